#pragma once

// Parameter space of a two-cost-class regenerating code: validation, scenario
// classification and the repair cost of an operating point.

#include <optional>
#include <string>

#include "regen/error.hpp"
#include "regen/rational.hpp"

namespace regen {

enum class Scenario { A, B };

constexpr const char* to_string(Scenario s) noexcept {
  return s == Scenario::A ? "A" : "B";
}

/// Unvalidated parameter tuple, as read from flags or a config file.
struct RawParams {
  long n = 0;
  long k = 0;
  long d1 = 0;
  long d2 = 0;
  Rational kprime = 1;
  Rational M = 1;
  Rational C1 = 1;
  Rational C2 = 1;
};

class SystemParams;
SystemParams validate_params(const RawParams& raw);

/// Validated system parameters. Only validate_params() can build one, so every
/// instance satisfies: k >= 1, M > 0, n > k, k <= d1 + d2 <= n - 1,
/// 0 <= C1 <= C2 and kprime >= 1.
class SystemParams {
 public:
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  int d1() const noexcept { return d1_; }
  int d2() const noexcept { return d2_; }
  int d() const noexcept { return d1_ + d2_; }
  const Rational& kprime() const noexcept { return kprime_; }
  const Rational& M() const noexcept { return M_; }
  const Rational& C1() const noexcept { return C1_; }
  const Rational& C2() const noexcept { return C2_; }
  Scenario scenario() const noexcept { return d1_ >= k_ ? Scenario::A : Scenario::B; }

  RawParams raw() const {
    return RawParams{n_, k_, d1_, d2_, kprime_, M_, C1_, C2_};
  }

  SystemParams with_kprime(const Rational& kprime) const {
    RawParams r = raw();
    r.kprime = kprime;
    return validate_params(r);
  }

  SystemParams with_costs(const Rational& c1, const Rational& c2) const {
    RawParams r = raw();
    r.C1 = c1;
    r.C2 = c2;
    return validate_params(r);
  }

  SystemParams with_file_size(const Rational& M) const {
    RawParams r = raw();
    r.M = M;
    return validate_params(r);
  }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;

 private:
  SystemParams() = default;
  friend SystemParams validate_params(const RawParams& raw);

  int n_ = 0;
  int k_ = 0;
  int d1_ = 0;
  int d2_ = 0;
  Rational kprime_;
  Rational M_;
  Rational C1_;
  Rational C2_;
};

inline SystemParams validate_params(const RawParams& raw) {
  if (raw.k < 1) {
    throw Error(ErrorCode::NonPositive, "k must be at least 1, got " + std::to_string(raw.k));
  }
  if (raw.M <= 0) {
    throw Error(ErrorCode::NonPositive, "M must be positive, got " + to_fraction_string(raw.M));
  }
  if (raw.C1 < 0 || raw.C2 < 0) {
    throw Error(ErrorCode::NonPositive, "download costs must be non-negative");
  }
  if (raw.d1 < 0 || raw.d2 < 0) {
    throw Error(ErrorCode::InvalidDegree, "helper counts must be non-negative");
  }
  if (raw.n <= raw.k) {
    throw Error(ErrorCode::InvalidDegree,
                "n=" + std::to_string(raw.n) + " must exceed k=" + std::to_string(raw.k));
  }
  const long d = raw.d1 + raw.d2;
  if (d < raw.k) {
    throw Error(ErrorCode::InvalidDegree,
                "d=" + std::to_string(d) + " is below k=" + std::to_string(raw.k));
  }
  if (d > raw.n - 1) {
    throw Error(ErrorCode::InvalidDegree,
                "d=" + std::to_string(d) + " exceeds n-1=" + std::to_string(raw.n - 1));
  }
  if (raw.kprime < 1) {
    throw Error(ErrorCode::InvalidRatio,
                "kprime must be at least 1, got " + to_fraction_string(raw.kprime));
  }
  if (raw.C1 > raw.C2) {
    throw Error(ErrorCode::InvalidCostOrder,
                "C1=" + to_fraction_string(raw.C1) + " exceeds C2=" + to_fraction_string(raw.C2));
  }
  SystemParams p;
  p.n_ = static_cast<int>(raw.n);
  p.k_ = static_cast<int>(raw.k);
  p.d1_ = static_cast<int>(raw.d1);
  p.d2_ = static_cast<int>(raw.d2);
  p.kprime_ = raw.kprime;
  p.M_ = raw.M;
  p.C1_ = raw.C1;
  p.C2_ = raw.C2;
  return p;
}

inline Scenario classify_scenario(const SystemParams& params) noexcept {
  return params.scenario();
}

/// An operating point. cost is empty for the single-class baselines, which
/// have no cost model attached.
struct CodePoint {
  Rational alpha;
  Rational beta1;
  Rational beta2;
  Rational gamma;
  std::optional<Rational> cost;

  /// Set when a cheap helper would send more than it stores. Reported, not rejected.
  bool beta1_exceeds_alpha() const { return beta1 > alpha; }
};

/// C1*d1*beta1 + C2*d2*beta2 with beta1 = kprime*beta2.
inline Rational total_cost(const SystemParams& params, const Rational& beta2) {
  if (beta2 < 0) {
    throw Error(ErrorCode::InvalidArgument, "beta2 must be non-negative");
  }
  const Rational beta1 = params.kprime() * beta2;
  return params.C1() * params.d1() * beta1 + params.C2() * params.d2() * beta2;
}

/// Completes a point from its per-expensive-helper download.
inline CodePoint make_point(const SystemParams& params, const Rational& alpha,
                            const Rational& beta2) {
  CodePoint p;
  p.alpha = alpha;
  p.beta2 = beta2;
  p.beta1 = params.kprime() * beta2;
  p.gamma = params.d1() * p.beta1 + params.d2() * beta2;
  p.cost = total_cost(params, beta2);
  return p;
}

}  // namespace regen
