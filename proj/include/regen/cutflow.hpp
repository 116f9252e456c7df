#pragma once

// Independent verification of the closed-form tradeoff through the
// worst-case information flow graph, its cut-capacity sum and an exact
// max-flow.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "regen/error.hpp"
#include "regen/flow_graph.hpp"
#include "regen/model.hpp"
#include "regen/rational.hpp"
#include "regen/tradeoff.hpp"

namespace regen {

/// Unclipped cut term of each of the k newcomers in the worst-case graph, in
/// newcomer order (non-increasing).
inline std::vector<Rational> cut_terms(const SystemParams& p, const Rational& beta2) {
  const Rational beta1 = p.kprime() * beta2;
  const Rational full = p.d1() * beta1 + p.d2() * beta2;
  std::vector<Rational> terms;
  terms.reserve(p.k());
  if (p.scenario() == Scenario::A) {
    for (int i = 0; i < p.k(); ++i) terms.push_back(full - i * beta1);
  } else {
    for (int i = 0; i <= p.d1(); ++i) terms.push_back(full - i * beta1);
    for (int i = p.d1() + 1; i < p.k(); ++i) terms.push_back((p.d() - i) * beta2);
  }
  return terms;
}

/// C(alpha) = sum over newcomers of min(term, alpha).
inline Rational cut_capacity_sum(const SystemParams& p, const Rational& alpha,
                                 const Rational& beta2) {
  Rational total = 0;
  for (const auto& t : cut_terms(p, beta2)) total += std::min(t, alpha);
  return total;
}

/// Builds the worst-case information flow graph for the scenario of p.
///
/// Newcomers x0..x(k-1) are repaired in sequence and each one downloads from
/// every earlier newcomer (cheap links first, then expensive ones once d1
/// cheap links are used up), topping up from fresh original nodes. Every
/// original-node link gets its own original so that no single storage edge
/// can cut several links at once. The data collector reads all k newcomers.
inline FlowGraph build_gstar(const SystemParams& p, const Rational& alpha, const Rational& beta2) {
  if (alpha < 0 || beta2 < 0) {
    throw Error(ErrorCode::InvalidArgument, "alpha and beta2 must be non-negative");
  }
  const Rational beta1 = p.kprime() * beta2;
  const int k = p.k();
  const int d1 = p.d1();
  const int d2 = p.d2();
  FlowGraph g;
  int originals = 0;
  std::vector<int> newcomer_in;

  auto from_original = [&](int target_in, const Rational& cap) {
    int in = g.add_storage_node("o" + std::to_string(originals++), alpha);
    g.add_edge(g.source(), in, std::nullopt);
    g.add_edge(in + 1, target_in, cap);
  };

  for (int i = 0; i < k; ++i) {
    const int in = g.add_storage_node("x" + std::to_string(i), alpha);
    const int cheap_from_newcomers = std::min(i, d1);
    const int expensive_from_newcomers = i - cheap_from_newcomers;
    if (expensive_from_newcomers > d2) {
      throw Error(ErrorCode::InvalidConstruction, "newcomer needs more helpers than d provides");
    }
    for (int j = 0; j < i; ++j) {
      g.add_edge(newcomer_in[j] + 1, in, j < d1 ? beta1 : beta2);
    }
    for (int c = cheap_from_newcomers; c < d1; ++c) from_original(in, beta1);
    for (int c = expensive_from_newcomers; c < d2; ++c) from_original(in, beta2);
    g.add_edge(in + 1, g.sink(), std::nullopt);
    newcomer_in.push_back(in);
  }
  return g;
}

/// Smallest alpha with C(alpha) >= M, found by walking the kinks of the
/// concave piecewise-linear C and solving the active linear piece exactly.
inline Rational alpha_min_oracle(const SystemParams& p, const Rational& beta2) {
  if (beta2 < 0) throw Error(ErrorCode::InvalidArgument, "beta2 must be non-negative");
  std::vector<Rational> terms = cut_terms(p, beta2);
  std::sort(terms.begin(), terms.end());
  const Rational& M = p.M();
  const Rational ceiling = std::accumulate(terms.begin(), terms.end(), Rational(0));
  if (ceiling < M) {
    throw Error(ErrorCode::InsufficientRepairBandwidth,
                "cut capacity cannot reach M: max C = " + to_fraction_string(ceiling));
  }
  // On [terms[j-1], terms[j]] the j smallest terms are saturated and the rest
  // contribute alpha each.
  Rational saturated = 0;
  const int count = static_cast<int>(terms.size());
  for (int j = 0; j < count; ++j) {
    const Rational candidate = (M - saturated) / (count - j);
    const Rational lo = j == 0 ? Rational(0) : terms[j - 1];
    if (candidate >= lo && candidate <= terms[j]) return candidate;
    saturated += terms[j];
  }
  throw Error(ErrorCode::InsufficientRepairBandwidth, "no piece of C reaches M");
}

/// Rational bisection on C(alpha) >= M; returns an upper bound within tol of
/// the true minimum.
inline Rational alpha_min_bisect(const SystemParams& p, const Rational& beta2,
                                 const Rational& tol = Rational(1, 1000000000)) {
  const auto terms = cut_terms(p, beta2);
  const Rational ceiling = std::accumulate(terms.begin(), terms.end(), Rational(0));
  if (ceiling < p.M()) {
    throw Error(ErrorCode::InsufficientRepairBandwidth,
                "cut capacity cannot reach M: max C = " + to_fraction_string(ceiling));
  }
  Rational lo = 0;
  Rational hi = *std::max_element(terms.begin(), terms.end());
  if (hi < p.M() / p.k()) hi = p.M();
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (cut_capacity_sum(p, mid, beta2) >= p.M()) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// A random repair history on n storage nodes: `repairs` failures, each
/// replaced by a newcomer that downloads beta1 from d1 random survivors and
/// beta2 from d2 others, followed by a data collector on k random live nodes.
template <typename Rng>
FlowGraph random_history_graph(const SystemParams& p, const Rational& alpha,
                               const Rational& beta2, int repairs, Rng& rng) {
  const Rational beta1 = p.kprime() * beta2;
  const int n = p.n();
  FlowGraph g;
  std::vector<int> live_out(n);
  for (int i = 0; i < n; ++i) {
    int in = g.add_storage_node("o" + std::to_string(i), alpha);
    g.add_edge(g.source(), in, std::nullopt);
    live_out[i] = in + 1;
  }
  std::vector<int> slots;
  for (int r = 0; r < repairs; ++r) {
    const int failed = std::uniform_int_distribution<int>(0, n - 1)(rng);
    slots.resize(n);
    std::iota(slots.begin(), slots.end(), 0);
    slots.erase(slots.begin() + failed);
    std::shuffle(slots.begin(), slots.end(), rng);
    const int in = g.add_storage_node("x" + std::to_string(r), alpha);
    for (int h = 0; h < p.d(); ++h) {
      g.add_edge(live_out[slots[h]], in, h < p.d1() ? beta1 : beta2);
    }
    live_out[failed] = in + 1;
  }
  slots.resize(n);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  for (int i = 0; i < p.k(); ++i) g.add_edge(live_out[slots[i]], g.sink(), std::nullopt);
  return g;
}

// ---------------------------------------------------------------------------
// Cross-validation harness.

struct CutReport {
  Rational beta2;
  std::optional<Rational> alpha_closed;  // empty: reported infeasible
  std::optional<Rational> alpha_oracle;
  std::optional<Rational> maxflow_at_alpha;
  bool agree = false;    // closed form and oracle give the same answer
  bool flow_ok = false;  // max-flow equals the cut sum at every probed alpha, and M at alpha_min

  bool passed() const { return agree && flow_ok; }
};

using AlphaMinFn = std::function<Rational(const SystemParams&, const Rational&)>;

/// Every breakpoint, the midpoints between neighbours, each breakpoint
/// +/- 1/1000, and a point well inside the flat branch.
inline std::vector<Rational> default_beta2_grid(const SystemParams& p) {
  const auto bps = tradeoff_curve(p).breakpoints();
  const Rational step(1, 1000);
  std::vector<Rational> grid;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    grid.push_back(bps[i]);
    grid.push_back(bps[i] + step);
    if (bps[i] - step > 0) grid.push_back(bps[i] - step);
    if (i + 1 < bps.size()) grid.push_back((bps[i] + bps[i + 1]) / 2);
  }
  grid.push_back(bps.back() * 3 / 2);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline CutReport check_point(const SystemParams& p, const Rational& beta2,
                             const AlphaMinFn& closed_form) {
  CutReport r;
  r.beta2 = beta2;
  auto attempt = [&](auto&& fn) -> std::optional<Rational> {
    try {
      return fn(p, beta2);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientRepairBandwidth) throw;
      return std::nullopt;
    }
  };
  r.alpha_closed = attempt(closed_form);
  r.alpha_oracle = attempt([](const SystemParams& q, const Rational& b) {
    return alpha_min_oracle(q, b);
  });
  r.agree = r.alpha_closed == r.alpha_oracle;

  std::vector<Rational> probes;
  if (r.alpha_closed) {
    probes = {*r.alpha_closed, *r.alpha_closed / 2, *r.alpha_closed * 2};
  } else {
    const auto terms = cut_terms(p, beta2);
    probes = {std::accumulate(terms.begin(), terms.end(), Rational(0))};
  }
  r.flow_ok = true;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Rational flow = max_flow(build_gstar(p, probes[i], beta2));
    if (i == 0) r.maxflow_at_alpha = flow;
    if (flow != cut_capacity_sum(p, probes[i], beta2)) r.flow_ok = false;
  }
  if (r.alpha_closed && *r.maxflow_at_alpha != p.M()) r.flow_ok = false;
  return r;
}

/// Compares closed_form against the oracle on each beta2 of the grid and
/// checks the max-flow of the worst-case graph at the closed-form alpha.
/// Reports come back in ascending beta2 order.
inline std::vector<CutReport> verify_closed_form(const SystemParams& p,
                                                 std::vector<Rational> grid,
                                                 const AlphaMinFn& closed_form = alpha_min) {
  if (grid.empty()) grid = default_beta2_grid(p);
  std::sort(grid.begin(), grid.end());
  std::vector<CutReport> reports;
  reports.reserve(grid.size());
  for (const auto& b : grid) {
    if (b <= 0) throw Error(ErrorCode::InvalidArgument, "beta2 grid values must be positive");
    reports.push_back(check_point(p, b, closed_form));
  }
  return reports;
}

}  // namespace regen
