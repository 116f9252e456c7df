#pragma once

// Random linear network coding over a finite field: initial encoding,
// asymmetric-download repair, and rank-based reconstruction checks.
//
// Payloads are never materialised. Each stored row is a coefficient vector
// over the M source symbols; a set of nodes can rebuild the file iff its
// stacked rows have rank M.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "regen/error.hpp"
#include "regen/field.hpp"
#include "regen/model.hpp"
#include "regen/rational.hpp"

namespace regen {

enum class NodeClass { Cheap, Expensive };

template <typename Field>
struct StoredNode {
  Matrix<Field> rows;  // alpha_sym x file_len
  NodeClass cls = NodeClass::Cheap;
  int generation = 0;  // 0 for original nodes, r for the newcomer of repair r

  friend bool operator==(const StoredNode&, const StoredNode&) = default;
};

template <typename Field>
struct StorageState {
  int file_len = 0;
  int alpha_sym = 0;
  std::vector<StoredNode<Field>> nodes;

  int size() const noexcept { return static_cast<int>(nodes.size()); }
  friend bool operator==(const StorageState&, const StorageState&) = default;
};

/// Fills n nodes with alpha_sym uniformly random coefficient rows each.
/// classes, when given, tags each node; otherwise every node is cheap.
template <typename Field>
StorageState<Field> encode_initial(int file_len, int n, int alpha_sym, std::uint64_t seed,
                                   const std::vector<NodeClass>& classes = {}) {
  if (file_len <= 0 || n <= 0 || alpha_sym <= 0) {
    throw Error(ErrorCode::NonPositive, "M, n and alpha_sym must be positive");
  }
  if (!classes.empty() && static_cast<int>(classes.size()) != n) {
    throw Error(ErrorCode::InvalidArgument, "class tags must cover every node");
  }
  std::mt19937_64 rng(seed);
  StorageState<Field> state;
  state.file_len = file_len;
  state.alpha_sym = alpha_sym;
  state.nodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    StoredNode<Field> node;
    node.rows = random_matrix<Field>(alpha_sym, file_len, rng);
    node.cls = classes.empty() ? NodeClass::Cheap : classes[i];
    state.nodes.push_back(std::move(node));
  }
  return state;
}

/// Replaces failed_node by a newcomer. Each cheap helper sends beta1_sym
/// random combinations of its rows, each expensive helper beta2_sym; the
/// newcomer keeps alpha_sym random combinations of everything received.
template <typename Field, typename Rng>
StorageState<Field> repair(const StorageState<Field>& state, int failed_node,
                           const std::vector<int>& helpers_cheap,
                           const std::vector<int>& helpers_expensive, int beta1_sym,
                           int beta2_sym, Rng& rng) {
  const int n = state.size();
  if (failed_node < 0 || failed_node >= n) {
    throw Error(ErrorCode::UnknownNode, "failed node " + std::to_string(failed_node));
  }
  if (beta1_sym < 0 || beta2_sym < 0) {
    throw Error(ErrorCode::NonIntegerDownload, "download sizes must be non-negative integers");
  }
  std::set<int> seen;
  for (const auto* list : {&helpers_cheap, &helpers_expensive}) {
    for (int h : *list) {
      if (h < 0 || h >= n) throw Error(ErrorCode::UnknownNode, "helper " + std::to_string(h));
      if (h == failed_node) {
        throw Error(ErrorCode::InsufficientHelpers, "the failed node cannot act as a helper");
      }
      if (!seen.insert(h).second) {
        throw Error(ErrorCode::InsufficientHelpers, "helper " + std::to_string(h) + " listed twice");
      }
    }
  }

  Matrix<Field> pool(0, state.file_len);
  auto download = [&](int helper, int count) {
    if (count == 0) return;
    const auto mix = random_matrix<Field>(count, state.alpha_sym, rng);
    pool.append_rows(multiply(mix, state.nodes[helper].rows));
  };
  for (int h : helpers_cheap) download(h, beta1_sym);
  for (int h : helpers_expensive) download(h, beta2_sym);

  StorageState<Field> next = state;
  StoredNode<Field>& newcomer = next.nodes[failed_node];
  if (pool.rows() == 0) {
    newcomer.rows = Matrix<Field>(state.alpha_sym, state.file_len);
  } else {
    newcomer.rows = multiply(random_matrix<Field>(state.alpha_sym, pool.rows(), rng), pool);
  }
  int latest = 0;
  for (const auto& node : state.nodes) latest = std::max(latest, node.generation);
  newcomer.generation = latest + 1;
  return next;
}

/// Rank of the rows stored on node_ids, stacked.
template <typename Field>
int stacked_rank(const StorageState<Field>& state, const std::vector<int>& node_ids) {
  Matrix<Field> stacked(0, state.file_len);
  std::set<int> seen;
  for (int id : node_ids) {
    if (id < 0 || id >= state.size()) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id));
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(id) + " listed twice");
    }
    stacked.append_rows(state.nodes[id].rows);
  }
  return rank(std::move(stacked));
}

template <typename Field>
bool can_reconstruct(const StorageState<Field>& state, const std::vector<int>& node_ids) {
  return stacked_rank(state, node_ids) == state.file_len;
}

// ---------------------------------------------------------------------------
// Trials.

enum class HelperPolicy {
  Uniform,    // uniform among eligible survivors
  WorstCase,  // most recent newcomers first, mirroring the worst-case flow graph
};

struct TrialOptions {
  HelperPolicy policy = HelperPolicy::Uniform;
  int max_subsets = 100;
};

struct ReconstructionCheck {
  std::vector<int> nodes;
  bool success = false;

  friend bool operator==(const ReconstructionCheck&, const ReconstructionCheck&) = default;
};

struct TrialResult {
  std::uint64_t seed = 0;
  int repairs_performed = 0;
  std::vector<ReconstructionCheck> reconstruction_checks;
  double success_rate = 0.0;

  bool all_succeeded() const {
    return std::all_of(reconstruction_checks.begin(), reconstruction_checks.end(),
                       [](const auto& c) { return c.success; });
  }
  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Integer symbol counts for an operating point, after scaling the file by
/// the least common multiple of the denominators involved.
struct SymbolPoint {
  Integer scale;
  int file_len = 0;
  int alpha_sym = 0;
  int beta1_sym = 0;
  int beta2_sym = 0;
};

inline SymbolPoint scale_to_symbols(const SystemParams& params, const CodePoint& point) {
  Integer scale = 1;
  for (const Rational* r : {&params.M(), &point.alpha, &point.beta1, &point.beta2}) {
    scale = boost::multiprecision::lcm(scale, denom(*r));
  }
  auto as_int = [&](const Rational& r) {
    Rational v = r * Rational(scale);
    if (!is_integer(v) || numer(v) > 1'000'000) {
      throw Error(ErrorCode::NonIntegerDownload, "symbol count too large to simulate");
    }
    return numer(v).convert_to<int>();
  };
  return {scale, as_int(params.M()), as_int(point.alpha), as_int(point.beta1),
          as_int(point.beta2)};
}

/// Class tags for a trial: d1 + 1 cheap nodes when the survivors can always
/// supply d1 cheap and d2 expensive helpers, otherwise a proportional split.
inline std::vector<NodeClass> default_classes(const SystemParams& p) {
  const int n = p.n();
  int cheap = n >= p.d() + 2 ? p.d1() + 1 : (n * p.d1() + p.d() / 2) / p.d();
  std::vector<NodeClass> classes(n, NodeClass::Expensive);
  for (int i = 0; i < cheap && i < n; ++i) classes[i] = NodeClass::Cheap;
  return classes;
}

namespace detail {

template <typename Field, typename Rng>
std::vector<int> order_candidates(const StorageState<Field>& state, std::vector<int> ids,
                                  HelperPolicy policy, Rng& rng) {
  std::shuffle(ids.begin(), ids.end(), rng);
  if (policy == HelperPolicy::WorstCase) {
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
      return state.nodes[a].generation > state.nodes[b].generation;
    });
  }
  return ids;
}

}  // namespace detail

/// Picks d1 cheap and d2 expensive helpers among the survivors. Node class
/// tags are honoured when the survivors allow it; otherwise the link class is
/// assigned per repair (the first d1 chosen survivors are downloaded from at
/// the cheap rate).
template <typename Field, typename Rng>
std::pair<std::vector<int>, std::vector<int>> choose_helpers(const StorageState<Field>& state,
                                                             const SystemParams& p, int failed,
                                                             HelperPolicy policy, Rng& rng) {
  std::vector<int> cheap;
  std::vector<int> expensive;
  std::vector<int> survivors;
  for (int i = 0; i < state.size(); ++i) {
    if (i == failed) continue;
    survivors.push_back(i);
    (state.nodes[i].cls == NodeClass::Cheap ? cheap : expensive).push_back(i);
  }
  if (static_cast<int>(survivors.size()) < p.d()) {
    throw Error(ErrorCode::InsufficientHelpers,
                std::to_string(survivors.size()) + " survivors cannot supply d=" + std::to_string(p.d()));
  }
  if (static_cast<int>(cheap.size()) >= p.d1() && static_cast<int>(expensive.size()) >= p.d2()) {
    cheap = detail::order_candidates(state, cheap, policy, rng);
    expensive = detail::order_candidates(state, expensive, policy, rng);
    cheap.resize(p.d1());
    expensive.resize(p.d2());
    return {cheap, expensive};
  }
  survivors = detail::order_candidates(state, survivors, policy, rng);
  return {std::vector<int>(survivors.begin(), survivors.begin() + p.d1()),
          std::vector<int>(survivors.begin() + p.d1(), survivors.begin() + p.d())};
}

/// All k-subsets of {0..n-1} when there are at most max_subsets of them,
/// otherwise max_subsets distinct subsets sampled with rng.
template <typename Rng>
std::vector<std::vector<int>> collector_subsets(int n, int k, int max_subsets, Rng& rng) {
  std::vector<std::vector<int>> out;
  // Count C(n, k), stopping once it exceeds the cap.
  long long count = 1;
  for (int i = 1; i <= k && count <= max_subsets; ++i) count = count * (n - k + i) / i;
  if (count <= max_subsets) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      out.push_back(idx);
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  }
  std::set<std::vector<int>> chosen;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  while (static_cast<int>(chosen.size()) < max_subsets) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> pick(all.begin(), all.begin() + k);
    std::sort(pick.begin(), pick.end());
    if (chosen.insert(pick).second) out.push_back(pick);
  }
  return out;
}

/// Encode, then num_failures sequential fail-and-repair cycles, then check
/// reconstruction from k-node subsets. Deterministic in seed.
template <typename Field>
TrialResult run_trial(const SystemParams& p, int alpha_sym, int beta2_sym, int num_failures,
                      std::uint64_t seed, const TrialOptions& options = {}) {
  if (!is_integer(p.M())) throw Error(ErrorCode::NonIntegerDownload, "M must be a whole number of symbols");
  if (!is_integer(p.kprime())) {
    throw Error(ErrorCode::NonIntegerDownload, "kprime must be an integer when simulating");
  }
  if (alpha_sym <= 0 || beta2_sym < 0 || num_failures < 0) {
    throw Error(ErrorCode::InvalidArgument, "alpha_sym > 0, beta2_sym >= 0, failures >= 0 required");
  }
  const int file_len = numer(p.M()).convert_to<int>();
  const int beta1_sym = numer(p.kprime()).convert_to<int>() * beta2_sym;

  std::mt19937_64 rng(seed);
  auto state = encode_initial<Field>(file_len, p.n(), alpha_sym, rng(), default_classes(p));
  std::uniform_int_distribution<int> pick_node(0, p.n() - 1);

  TrialResult result;
  result.seed = seed;
  for (int r = 0; r < num_failures; ++r) {
    const int failed = pick_node(rng);
    auto [cheap, expensive] = choose_helpers(state, p, failed, options.policy, rng);
    state = repair(state, failed, cheap, expensive, beta1_sym, beta2_sym, rng);
    ++result.repairs_performed;
  }

  int successes = 0;
  for (auto& subset : collector_subsets(p.n(), p.k(), options.max_subsets, rng)) {
    const bool ok = can_reconstruct(state, subset);
    successes += ok ? 1 : 0;
    result.reconstruction_checks.push_back({std::move(subset), ok});
  }
  result.success_rate =
      result.reconstruction_checks.empty()
          ? 0.0
          : static_cast<double>(successes) / static_cast<double>(result.reconstruction_checks.size());
  return result;
}

}  // namespace regen
