#pragma once

// Closed-form storage/bandwidth tradeoff for two download-cost classes.
//
// Scenario A (d1 >= k) and Scenario B (d1 < k) each give a piecewise-affine
// alpha_min(beta2). Branch intervals are half-open [lo, hi): at a breakpoint
// the lower-storage branch applies. All values are exact rationals.

#include <optional>
#include <string>
#include <vector>

#include "regen/error.hpp"
#include "regen/model.hpp"
#include "regen/rational.hpp"

namespace regen {

/// Which extremal point a ratio, threshold or limit refers to.
enum class Kind { Msr, Mbr };

constexpr const char* to_string(Kind k) noexcept { return k == Kind::Msr ? "msr" : "mbr"; }

namespace detail {

inline void require_scenario(const SystemParams& p, Scenario s, const char* op) {
  if (p.scenario() != s) {
    throw Error(ErrorCode::NotApplicable,
                std::string(op) + " requires scenario " + to_string(s) + ", params are scenario " +
                    to_string(p.scenario()));
  }
}

inline void require_positive_beta2(const Rational& beta2) {
  if (beta2 < 0) throw Error(ErrorCode::InvalidArgument, "beta2 must be non-negative");
}

// d1*k' + d2: the number of beta2 units in one repair.
inline Rational weighted_degree(const SystemParams& p) { return p.d1() * p.kprime() + p.d2(); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-class baselines.

inline CodePoint msr_point(const Rational& M, int k, int d) {
  if (k < 1) throw Error(ErrorCode::NonPositive, "k must be at least 1");
  if (d < k) throw Error(ErrorCode::InvalidDegree, "MSR point needs d >= k");
  CodePoint p;
  p.alpha = M / k;
  p.gamma = M * d / (Rational(k) * (d - k + 1));
  p.beta1 = p.beta2 = p.gamma / d;
  return p;
}

inline CodePoint mbr_point(const Rational& M, int k, int d) {
  if (k < 1) throw Error(ErrorCode::NonPositive, "k must be at least 1");
  if (d < k) throw Error(ErrorCode::InvalidDegree, "MBR point needs d >= k");
  CodePoint p;
  p.alpha = p.gamma = 2 * M * d / Rational(2 * k * d - k * k + k);
  p.beta1 = p.beta2 = p.gamma / d;
  return p;
}

// ---------------------------------------------------------------------------
// Scenario A breakpoints.

/// f(i) = 2M / (2k(d1 k' + d2 - k k') + k'(i+1)(2k-i)), 0 <= i <= k-1.
inline Rational breakpoint_f(const SystemParams& p, int i) {
  detail::require_scenario(p, Scenario::A, "breakpoint_f");
  const int k = p.k();
  if (i < 0 || i > k - 1) {
    throw Error(ErrorCode::IndexOutOfRange, "breakpoint_f index " + std::to_string(i) +
                                                " outside [0, " + std::to_string(k - 1) + "]");
  }
  const Rational& kp = p.kprime();
  const Rational den =
      2 * k * (p.d1() * kp + p.d2() - k * kp) + kp * (i + 1) * (2 * k - i);
  return checked_div(2 * p.M(), den, "breakpoint_f");
}

/// g(i) = i(2 d1 k' + 2 d2 - 2 k k' + (i+1) k').
inline Rational coefficient_g(const SystemParams& p, int i) {
  const Rational& kp = p.kprime();
  return i * (2 * p.d1() * kp + 2 * p.d2() - 2 * p.k() * kp + (i + 1) * kp);
}

// ---------------------------------------------------------------------------
// Scenario B breakpoints. The middle family uses i = 1..k-d1-1 and the lower
// family i = 0..d1-1.

/// f1(i) = 2M / (2k(d-k) + (i+1)(2k-i)).
inline Rational breakpoint_f1(const SystemParams& p, int i) {
  detail::require_scenario(p, Scenario::B, "breakpoint_f1");
  const int k = p.k();
  const int d = p.d();
  if (i < 0 || i > k - p.d1() - 1) {
    throw Error(ErrorCode::IndexOutOfRange, "breakpoint_f1 index " + std::to_string(i));
  }
  return checked_div(2 * p.M(), Rational(2 * k * (d - k) + (i + 1) * (2 * k - i)),
                     "breakpoint_f1");
}

/// f2(i) for 0 <= i <= d1-1; f2(-1) is f1(k-d1-1), the top of the lower family.
inline Rational breakpoint_f2(const SystemParams& p, int i) {
  detail::require_scenario(p, Scenario::B, "breakpoint_f2");
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  if (i == -1) return breakpoint_f1(p, k - d1 - 1);
  if (i < 0 || i > d1 - 1) {
    throw Error(ErrorCode::IndexOutOfRange, "breakpoint_f2 index " + std::to_string(i));
  }
  const Rational& kp = p.kprime();
  const Rational den = (2 * k * d - k * k - d1 * d1 - d1 + k + 2 * d1 * kp) +
                       i * kp * (2 * d1 - i - 1);
  return checked_div(2 * p.M(), den, "breakpoint_f2");
}

/// g1(i) = i(2d - 2k + i + 1).
inline Rational coefficient_g1(const SystemParams& p, int i) {
  return Rational(i * (2 * p.d() - 2 * p.k() + i + 1));
}

/// g2(i) = (i+1)(2 d2 + i k').
inline Rational coefficient_g2(const SystemParams& p, int i) {
  return (i + 1) * (2 * p.d2() + i * p.kprime());
}

// ---------------------------------------------------------------------------
// Minimum per-expensive-helper download.

inline Rational beta2_min_A(const SystemParams& p) {
  detail::require_scenario(p, Scenario::A, "beta2_min_A");
  const Rational& kp = p.kprime();
  const int k = p.k();
  return checked_div(2 * p.M(), k * (2 * p.d1() * kp + 2 * p.d2() - k * kp + kp), "beta2_min_A");
}

inline Rational beta2_min_B(const SystemParams& p) {
  detail::require_scenario(p, Scenario::B, "beta2_min_B");
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  const Rational den = 2 * k * d - k * k + k + (d1 * d1 + d1) * (p.kprime() - 1);
  return checked_div(2 * p.M(), den, "beta2_min_B");
}

inline Rational beta2_min(const SystemParams& p) {
  return p.scenario() == Scenario::A ? beta2_min_A(p) : beta2_min_B(p);
}

// ---------------------------------------------------------------------------
// alpha_min(beta2)

inline Rational alpha_min_A(const SystemParams& p, const Rational& beta2) {
  detail::require_scenario(p, Scenario::A, "alpha_min_A");
  detail::require_positive_beta2(beta2);
  const int k = p.k();
  const Rational& M = p.M();
  if (beta2 >= breakpoint_f(p, 0)) return M / k;
  for (int i = 1; i < k; ++i) {
    if (beta2 >= breakpoint_f(p, i)) {
      return (2 * M - coefficient_g(p, i) * beta2) / (2 * (k - i));
    }
  }
  throw Error(ErrorCode::InsufficientRepairBandwidth,
              "beta2=" + to_fraction_string(beta2) + " is below beta2_min=" +
                  to_fraction_string(beta2_min_A(p)));
}

inline Rational alpha_min_B(const SystemParams& p, const Rational& beta2) {
  detail::require_scenario(p, Scenario::B, "alpha_min_B");
  detail::require_positive_beta2(beta2);
  const int k = p.k();
  const int d1 = p.d1();
  const Rational& M = p.M();
  if (beta2 >= breakpoint_f1(p, 0)) return M / k;
  for (int i = 1; i <= k - d1 - 1; ++i) {
    if (beta2 >= breakpoint_f1(p, i)) {
      return (2 * M - coefficient_g1(p, i) * beta2) / (2 * (k - i));
    }
  }
  const Rational g1_top = coefficient_g1(p, k - d1 - 1);
  for (int i = 0; i <= d1 - 1; ++i) {
    if (beta2 >= breakpoint_f2(p, i)) {
      return (2 * M - (g1_top + coefficient_g2(p, i)) * beta2) / (2 * (d1 - i));
    }
  }
  throw Error(ErrorCode::InsufficientRepairBandwidth,
              "beta2=" + to_fraction_string(beta2) + " is below beta2_min=" +
                  to_fraction_string(beta2_min_B(p)));
}

inline Rational alpha_min(const SystemParams& p, const Rational& beta2) {
  return p.scenario() == Scenario::A ? alpha_min_A(p, beta2) : alpha_min_B(p, beta2);
}

// ---------------------------------------------------------------------------
// Extremal points.

inline CodePoint gmsr_point(const SystemParams& p) {
  const Rational& M = p.M();
  const Rational& kp = p.kprime();
  const int k = p.k();
  const Rational w = detail::weighted_degree(p);
  Rational gamma;
  if (p.scenario() == Scenario::A) {
    gamma = checked_div(M * w, k * (p.d1() * kp + p.d2() - k * kp + kp), "gmsr_point");
  } else {
    gamma = checked_div(M * w, Rational(k * (p.d() - k + 1)), "gmsr_point");
  }
  return make_point(p, M / k, checked_div(gamma, w, "gmsr_point"));
}

inline CodePoint gmbr_point(const SystemParams& p) {
  const Rational& M = p.M();
  const Rational& kp = p.kprime();
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  const Rational w = detail::weighted_degree(p);
  Rational value;
  if (p.scenario() == Scenario::A) {
    value = checked_div(2 * M * w, k * (2 * d1 * kp + 2 * p.d2() - k * kp + kp), "gmbr_point");
  } else {
    value = checked_div(2 * M * w, 2 * k * d - k * k + k + (d1 * d1 + d1) * (kp - 1), "gmbr_point");
  }
  return make_point(p, value, checked_div(value, w, "gmbr_point"));
}

/// Extremal points as k' grows without bound: only cheap helpers contribute,
/// so the pair matches the single-class code with d = d1. Scenario A only.
inline CodePoint grc_limit_point(const SystemParams& p, Kind kind) {
  if (p.scenario() != Scenario::A) {
    throw Error(ErrorCode::NotApplicable,
                "k' -> infinity limit needs d1 >= k; with d1 < k the expensive helpers cannot vanish");
  }
  const Rational& M = p.M();
  const int k = p.k();
  const int d1 = p.d1();
  CodePoint pt;
  if (kind == Kind::Msr) {
    pt.alpha = M / k;
    pt.gamma = M * d1 / Rational(k * (d1 - k + 1));
  } else {
    pt.alpha = pt.gamma = 2 * M * d1 / Rational(k * (2 * d1 - k + 1));
  }
  pt.beta1 = pt.gamma / d1;
  pt.beta2 = 0;
  pt.cost = p.C1() * pt.gamma;
  return pt;
}

// ---------------------------------------------------------------------------
// Ratios against the single-class code with the same d.

/// Bandwidth ratio gamma_GRC(k') / gamma_RC.
inline Rational rho(const SystemParams& p, Kind kind) {
  const Rational& kp = p.kprime();
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  const int d2 = p.d2();
  const Rational w = detail::weighted_degree(p);
  if (p.scenario() == Scenario::A) {
    if (kind == Kind::Msr) {
      return checked_div(w * (d - k + 1), d * (d1 * kp + d2 - k * kp + kp), "rho");
    }
    return checked_div(w * (2 * d - k + 1), d * (2 * d1 * kp + 2 * d2 - k * kp + kp), "rho");
  }
  if (kind == Kind::Msr) return checked_div(w, Rational(d), "rho");
  const int base = 2 * k * d - k * k + k;
  return checked_div(w * base, (base + (d1 * d1 + d1) * (kp - 1)) * d, "rho");
}

/// Download cost ratio C_T,GRC(k') / C_T,RC.
inline Rational eta(const SystemParams& p, Kind kind) {
  const Rational& kp = p.kprime();
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  const int d2 = p.d2();
  const Rational grc = p.C1() * d1 * kp + p.C2() * d2;
  const Rational rc = p.C1() * d1 + p.C2() * d2;
  if (p.scenario() == Scenario::A) {
    if (kind == Kind::Msr) {
      return checked_div(grc * (d - k + 1), (d1 * kp + d2 - k * kp + kp) * rc, "eta");
    }
    return checked_div(grc * (2 * d - k + 1), (2 * d1 * kp + 2 * d2 - k * kp + kp) * rc, "eta");
  }
  if (kind == Kind::Msr) return checked_div(grc, rc, "eta");
  const int base = 2 * k * d - k * k + k;
  return checked_div(grc * base, rc * (base + (d1 * d1 + d1) * (kp - 1)), "eta");
}

/// Smallest C2/C1 for which eta is non-increasing in k'.
inline Rational cost_threshold(const SystemParams& p, Kind kind) {
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  const int d2 = p.d2();
  if (p.scenario() == Scenario::A) {
    if (kind == Kind::Msr) return checked_div(Rational(d1), Rational(d1 - k + 1), "cost_threshold");
    return checked_div(Rational(2 * d1), Rational(2 * d1 - k + 1), "cost_threshold");
  }
  if (kind == Kind::Msr) {
    throw Error(ErrorCode::NotApplicable,
                "GMSR never lowers the download cost when d1 < k; no threshold exists");
  }
  return checked_div(Rational(2 * k * d - k * k + k - d1 * d1 - d1), Rational(d2 * (d1 + 1)),
                     "cost_threshold");
}

/// lim eta(k') as k' -> infinity.
inline Rational eta_limit(const SystemParams& p, Kind kind) {
  const int k = p.k();
  const int d = p.d();
  const int d1 = p.d1();
  const Rational cheap = p.C1() * d1;
  const Rational rc = cheap + p.C2() * p.d2();
  if (p.scenario() == Scenario::A) {
    if (kind == Kind::Msr) return checked_div(cheap * (d - k + 1), (d1 - k + 1) * rc, "eta_limit");
    return checked_div(cheap * (2 * d - k + 1), (2 * d1 - k + 1) * rc, "eta_limit");
  }
  if (kind == Kind::Msr) {
    throw Error(ErrorCode::NotApplicable, "eta grows without bound for GMSR when d1 < k");
  }
  return checked_div(cheap * (2 * k * d - k * k + k), rc * (d1 * d1 + d1), "eta_limit");
}

// ---------------------------------------------------------------------------
// Piecewise curve.

enum class SegmentKind { Flat, Middle, Lower };

/// alpha_min(beta2) = intercept - slope * beta2 on [beta2_lo, beta2_hi).
struct TradeoffSegment {
  Rational beta2_lo;
  std::optional<Rational> beta2_hi;  // empty: unbounded
  Rational intercept;
  Rational slope;
  SegmentKind kind = SegmentKind::Flat;
  int index = 0;

  Rational alpha_at(const Rational& beta2) const { return intercept - slope * beta2; }
  bool contains(const Rational& beta2) const {
    return beta2 >= beta2_lo && (!beta2_hi || beta2 < *beta2_hi);
  }
};

struct TradeoffCurve {
  SystemParams params;
  std::vector<TradeoffSegment> segments;  // ascending in beta2
  Rational beta2_min;

  /// Lower ends of every segment, ascending; the last one is where the flat
  /// branch (alpha = M/k) begins.
  std::vector<Rational> breakpoints() const {
    std::vector<Rational> out;
    out.reserve(segments.size());
    for (const auto& s : segments) out.push_back(s.beta2_lo);
    return out;
  }

  Rational alpha_at(const Rational& beta2) const {
    for (const auto& s : segments) {
      if (s.contains(beta2)) return s.alpha_at(beta2);
    }
    throw Error(ErrorCode::InsufficientRepairBandwidth,
                "beta2=" + to_fraction_string(beta2) + " is below beta2_min=" +
                    to_fraction_string(beta2_min));
  }
};

inline TradeoffCurve tradeoff_curve(const SystemParams& p) {
  const int k = p.k();
  const Rational& M = p.M();
  std::vector<TradeoffSegment> desc;  // built from the flat branch downwards

  auto affine = [&](const Rational& g, int clipped) {
    return std::pair<Rational, Rational>{M / clipped, g / (2 * clipped)};
  };

  if (p.scenario() == Scenario::A) {
    desc.push_back({breakpoint_f(p, 0), std::nullopt, M / k, 0, SegmentKind::Flat, 0});
    for (int i = 1; i < k; ++i) {
      auto [a, b] = affine(coefficient_g(p, i), k - i);
      desc.push_back({breakpoint_f(p, i), breakpoint_f(p, i - 1), a, b, SegmentKind::Middle, i});
    }
  } else {
    const int d1 = p.d1();
    desc.push_back({breakpoint_f1(p, 0), std::nullopt, M / k, 0, SegmentKind::Flat, 0});
    for (int i = 1; i <= k - d1 - 1; ++i) {
      auto [a, b] = affine(coefficient_g1(p, i), k - i);
      desc.push_back({breakpoint_f1(p, i), breakpoint_f1(p, i - 1), a, b, SegmentKind::Middle, i});
    }
    const Rational g1_top = coefficient_g1(p, k - d1 - 1);
    for (int i = 0; i <= d1 - 1; ++i) {
      auto [a, b] = affine(g1_top + coefficient_g2(p, i), d1 - i);
      desc.push_back({breakpoint_f2(p, i), breakpoint_f2(p, i - 1), a, b, SegmentKind::Lower, i});
    }
  }

  TradeoffCurve curve{p, {desc.rbegin(), desc.rend()}, beta2_min(p)};
  return curve;
}

/// The curve point at beta2 with its bandwidth and cost filled in.
inline CodePoint curve_point(const SystemParams& p, const Rational& beta2) {
  return make_point(p, alpha_min(p, beta2), beta2);
}

}  // namespace regen
