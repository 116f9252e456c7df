#pragma once

// Command-line front end. Every command writes data to `out` and
// diagnostics to `err`, and returns the process exit code:
//   0 success, 1 verification mismatch, 2 usage or validation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regen/cutflow.hpp"
#include "regen/error.hpp"
#include "regen/field.hpp"
#include "regen/model.hpp"
#include "regen/rational.hpp"
#include "regen/rlnc.hpp"
#include "regen/tradeoff.hpp"

namespace regen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

using json = nlohmann::ordered_json;

enum class Format { Csv, Json };

// ---------------------------------------------------------------------------
// Rendering.

/// "p/q" and 12-significant-digit decimal, comma separated.
inline std::string csv_pair(const Rational& r) {
  return to_fraction_string(r) + "," + to_decimal_string(r);
}

inline std::string csv_header_pair(const std::string& name) { return name + "," + name + "_dec"; }

inline void put_rational(json& j, const std::string& key, const Rational& r) {
  j[key] = to_fraction_string(r);
  j[key + "_dec"] = to_double(r);
}

inline json params_json(const SystemParams& p) {
  json j;
  j["n"] = p.n();
  j["k"] = p.k();
  j["d1"] = p.d1();
  j["d2"] = p.d2();
  j["kprime"] = to_fraction_string(p.kprime());
  j["M"] = to_fraction_string(p.M());
  j["C1"] = to_fraction_string(p.C1());
  j["C2"] = to_fraction_string(p.C2());
  j["scenario"] = to_string(p.scenario());
  return j;
}

inline std::string describe(const SystemParams& p) {
  std::ostringstream os;
  os << "n=" << p.n() << " k=" << p.k() << " d1=" << p.d1() << " d2=" << p.d2()
     << " kprime=" << to_fraction_string(p.kprime()) << " M=" << to_fraction_string(p.M());
  return os.str();
}

// ---------------------------------------------------------------------------
// Parameters from flags and an optional JSON config.

struct ParamOptions {
  std::optional<long> n, k, d1, d2;
  std::optional<std::string> kprime, M, c1, c2;
  std::optional<std::string> config;
};

inline void add_param_flags(CLI::App* app, ParamOptions& o) {
  app->add_option("--n", o.n, "number of storage nodes (default d1+d2+1)");
  app->add_option("--k", o.k, "nodes contacted by a data collector");
  app->add_option("--d1", o.d1, "cheap helpers per repair");
  app->add_option("--d2", o.d2, "expensive helpers per repair");
  app->add_option("--kprime", o.kprime, "download ratio beta1/beta2 (integer or p/q)");
  app->add_option("--M", o.M, "file size (default 1)");
  app->add_option("--c1", o.c1, "cost per symbol from a cheap helper (default 1)");
  app->add_option("--c2", o.c2, "cost per symbol from an expensive helper (default c1)");
  app->add_option("--config", o.config, "JSON file with n, k, d1, d2, kprime, M, C1, C2");
}

namespace detail {

inline Rational json_rational(const json& v, const std::string& key) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) return parse_rational(v.dump());
  throw Error(ErrorCode::ParseError, "config field " + key + " is not a number");
}

inline long json_long(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_string()) {
    Rational r = parse_rational(v.get<std::string>());
    if (is_integer(r)) return numer(r).convert_to<long>();
  }
  throw Error(ErrorCode::ParseError, "config field " + key + " must be an integer");
}

}  // namespace detail

/// Config file values first, then explicit flags on top.
inline SystemParams resolve_params(const ParamOptions& o) {
  std::optional<long> n = o.n, k = o.k, d1 = o.d1, d2 = o.d2;
  std::optional<Rational> kprime, M, c1, c2;
  if (o.config) {
    std::ifstream in(*o.config);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open config " + *o.config);
    json cfg;
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
    auto int_field = [&](const char* key, std::optional<long>& dst) {
      if (!dst && cfg.contains(key)) dst = detail::json_long(cfg[key], key);
    };
    auto rat_field = [&](const char* key, std::optional<Rational>& dst) {
      if (cfg.contains(key)) dst = detail::json_rational(cfg[key], key);
    };
    int_field("n", n);
    int_field("k", k);
    int_field("d1", d1);
    int_field("d2", d2);
    rat_field("kprime", kprime);
    rat_field("M", M);
    rat_field("C1", c1);
    rat_field("C2", c2);
  }
  if (o.kprime) kprime = parse_rational(*o.kprime);
  if (o.M) M = parse_rational(*o.M);
  if (o.c1) c1 = parse_rational(*o.c1);
  if (o.c2) c2 = parse_rational(*o.c2);

  if (!k || !d1 || !d2) {
    throw Error(ErrorCode::InvalidArgument, "--k, --d1 and --d2 are required");
  }
  RawParams raw;
  raw.k = *k;
  raw.d1 = *d1;
  raw.d2 = *d2;
  raw.n = n ? *n : *d1 + *d2 + 1;
  raw.kprime = kprime.value_or(Rational(1));
  raw.M = M.value_or(Rational(1));
  raw.C1 = c1.value_or(Rational(1));
  raw.C2 = c2.value_or(raw.C1);
  return validate_params(raw);
}

// ---------------------------------------------------------------------------
// point

inline CodePoint point_of_kind(const SystemParams& p, const std::string& kind) {
  if (kind == "msr" || kind == "mbr") {
    CodePoint pt = kind == "msr" ? msr_point(p.M(), p.k(), p.d()) : mbr_point(p.M(), p.k(), p.d());
    pt.cost = (p.C1() * p.d1() + p.C2() * p.d2()) * pt.beta2;
    return pt;
  }
  if (kind == "gmsr") return gmsr_point(p);
  if (kind == "gmbr") return gmbr_point(p);
  if (kind == "gmsr-limit") return grc_limit_point(p, Kind::Msr);
  if (kind == "gmbr-limit") return grc_limit_point(p, Kind::Mbr);
  throw Error(ErrorCode::InvalidArgument, "unknown point kind '" + kind + "'");
}

inline int cmd_point(const SystemParams& p, const std::string& kind, Format format,
                     std::ostream& out) {
  const CodePoint pt = point_of_kind(p, kind);
  if (format == Format::Json) {
    json j;
    j["kind"] = kind;
    j["params"] = params_json(p);
    put_rational(j, "alpha", pt.alpha);
    put_rational(j, "beta1", pt.beta1);
    put_rational(j, "beta2", pt.beta2);
    put_rational(j, "gamma", pt.gamma);
    put_rational(j, "cost", *pt.cost);
    j["beta1_exceeds_alpha"] = pt.beta1_exceeds_alpha();
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "kind," << csv_header_pair("alpha") << ',' << csv_header_pair("beta1") << ','
      << csv_header_pair("beta2") << ',' << csv_header_pair("gamma") << ','
      << csv_header_pair("cost") << ",beta1_exceeds_alpha\n";
  out << kind << ',' << csv_pair(pt.alpha) << ',' << csv_pair(pt.beta1) << ','
      << csv_pair(pt.beta2) << ',' << csv_pair(pt.gamma) << ',' << csv_pair(*pt.cost) << ','
      << (pt.beta1_exceeds_alpha() ? "true" : "false") << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curve

/// beta2 values for a curve listing: every breakpoint, plus `samples` evenly
/// spaced points over [beta2_min, 1.5 * start of the flat branch].
inline std::vector<Rational> curve_beta2_values(const SystemParams& p, int samples,
                                                bool breakpoints_only) {
  const TradeoffCurve curve = tradeoff_curve(p);
  std::vector<Rational> values = curve.breakpoints();
  if (!breakpoints_only && samples > 0) {
    const Rational lo = curve.beta2_min;
    const Rational hi = curve.segments.back().beta2_lo * 3 / 2;
    if (samples == 1) {
      values.push_back(lo);
    } else {
      for (int j = 0; j < samples; ++j) values.push_back(lo + (hi - lo) * j / (samples - 1));
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

inline std::string curve_header() {
  return csv_header_pair("beta2") + "," + csv_header_pair("beta1") + "," +
         csv_header_pair("alpha") + "," + csv_header_pair("gamma") + "," + csv_header_pair("cost");
}

inline std::string curve_row(const SystemParams& p, const Rational& beta2) {
  const CodePoint pt = curve_point(p, beta2);
  return csv_pair(pt.beta2) + "," + csv_pair(pt.beta1) + "," + csv_pair(pt.alpha) + "," +
         csv_pair(pt.gamma) + "," + csv_pair(*pt.cost);
}

inline int cmd_curve(const SystemParams& p, int samples, bool breakpoints_only, std::ostream& out) {
  out << curve_header() << '\n';
  for (const auto& b : curve_beta2_values(p, samples, breakpoints_only)) {
    out << curve_row(p, b) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ratio / threshold

inline Kind parse_kind(const std::string& s) {
  if (s == "msr") return Kind::Msr;
  if (s == "mbr") return Kind::Mbr;
  throw Error(ErrorCode::InvalidArgument, "kind must be msr or mbr, got '" + s + "'");
}

inline std::pair<int, int> parse_int_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      int v = std::stoi(s);
      return {v, v};
    }
    int lo = std::stoi(s.substr(0, dots));
    int hi = std::stoi(s.substr(dots + 2));
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty range '" + s + "'");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "expected lo..hi, got '" + s + "'");
  }
}

inline int cmd_ratio(const SystemParams& p, Kind kind, int kp_lo, int kp_hi,
                     std::vector<Rational> cost_ratios, std::ostream& out) {
  if (kp_lo < 1) throw Error(ErrorCode::InvalidRatio, "kprime range must start at 1 or above");
  if (cost_ratios.empty()) {
    cost_ratios.push_back(p.C1() == 0 ? Rational(1) : p.C2() / p.C1());
  }
  out << csv_header_pair("cost_ratio") << ",kprime," << csv_header_pair("rho") << ','
      << csv_header_pair("eta") << '\n';
  const Rational c1 = p.C1() == 0 ? Rational(1) : p.C1();
  for (const auto& ratio : cost_ratios) {
    const SystemParams costed = p.with_costs(c1, c1 * ratio);
    for (int kp = kp_lo; kp <= kp_hi; ++kp) {
      const SystemParams q = costed.with_kprime(kp);
      out << csv_pair(ratio) << ',' << kp << ',' << csv_pair(rho(q, kind)) << ','
          << csv_pair(eta(q, kind)) << '\n';
    }
  }
  return kExitOk;
}

inline int cmd_threshold(const SystemParams& p, std::ostream& out) {
  out << "kind,scenario," << csv_header_pair("threshold") << ',' << csv_header_pair("eta_limit")
      << '\n';
  for (Kind kind : {Kind::Msr, Kind::Mbr}) {
    auto cell = [&](auto&& fn) -> std::string {
      try {
        return csv_pair(fn());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable && e.code() != ErrorCode::DegenerateConfiguration) throw;
        return "NA,NA";
      }
    };
    out << to_string(kind) << ',' << to_string(p.scenario()) << ','
        << cell([&] { return cost_threshold(p, kind); }) << ','
        << cell([&] { return eta_limit(p, kind); }) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

/// k in 1..5, d1 + d2 <= 7, d >= k, kprime in {1, 2, 3, 5}, n = d + 1, M = 1.
inline std::vector<SystemParams> verification_sweep() {
  std::vector<SystemParams> out;
  for (int k = 1; k <= 5; ++k) {
    for (int d1 = 0; d1 <= 7; ++d1) {
      for (int d2 = 0; d1 + d2 <= 7; ++d2) {
        const int d = d1 + d2;
        if (d < k) continue;
        for (int kp : {1, 2, 3, 5}) {
          out.push_back(validate_params({d + 1, k, d1, d2, kp, 1, 1, 1}));
        }
      }
    }
  }
  return out;
}

struct VerifySummary {
  int configs = 0;
  int points = 0;
  int mismatches = 0;
};

inline json report_json(const CutReport& r) {
  json j;
  put_rational(j, "beta2", r.beta2);
  auto opt = [&](const char* key, const std::optional<Rational>& v) {
    if (v) {
      j[key] = to_fraction_string(*v);
    } else {
      j[key] = nullptr;
    }
  };
  opt("alpha_closed", r.alpha_closed);
  opt("alpha_oracle", r.alpha_oracle);
  opt("maxflow_at_alpha", r.maxflow_at_alpha);
  j["agree"] = r.agree;
  j["flow_ok"] = r.flow_ok;
  return j;
}

inline int cmd_verify(const std::vector<SystemParams>& configs, const std::vector<Rational>& grid,
                      Format format, std::ostream& out, const AlphaMinFn& closed_form = alpha_min) {
  VerifySummary summary;
  json all = json::array();
  std::ostringstream problems;
  for (const auto& p : configs) {
    const auto reports = verify_closed_form(p, grid, closed_form);
    ++summary.configs;
    json cfg;
    cfg["params"] = params_json(p);
    cfg["reports"] = json::array();
    for (const auto& r : reports) {
      ++summary.points;
      if (!r.passed()) {
        ++summary.mismatches;
        problems << "mismatch: " << describe(p) << " beta2=" << to_fraction_string(r.beta2)
                 << " closed=" << (r.alpha_closed ? to_fraction_string(*r.alpha_closed) : "infeasible")
                 << " oracle=" << (r.alpha_oracle ? to_fraction_string(*r.alpha_oracle) : "infeasible")
                 << " flow_ok=" << (r.flow_ok ? "true" : "false") << '\n';
      }
      if (format == Format::Json) cfg["reports"].push_back(report_json(r));
    }
    if (format == Format::Json) all.push_back(std::move(cfg));
  }
  if (format == Format::Json) {
    json j;
    j["configs"] = summary.configs;
    j["points"] = summary.points;
    j["agreements"] = summary.points - summary.mismatches;
    j["mismatches"] = summary.mismatches;
    j["results"] = std::move(all);
    out << j.dump(2) << '\n';
  } else {
    out << problems.str();
    if (configs.size() == 1 && grid.size() == 1 && summary.points == 1) {
      // Single point: show both sides.
      const auto r = verify_closed_form(configs.front(), grid, closed_form).front();
      out << "beta2=" << to_fraction_string(r.beta2)
          << " alpha_closed=" << (r.alpha_closed ? to_fraction_string(*r.alpha_closed) : "infeasible")
          << " alpha_oracle=" << (r.alpha_oracle ? to_fraction_string(*r.alpha_oracle) : "infeasible")
          << " maxflow="
          << (r.maxflow_at_alpha ? to_fraction_string(*r.maxflow_at_alpha) : "-") << '\n';
    }
    out << "configs=" << summary.configs << " points=" << summary.points
        << " agreements=" << summary.points - summary.mismatches
        << " mismatches=" << summary.mismatches << '\n';
  }
  return summary.mismatches == 0 ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::optional<int> alpha_sym;
  std::optional<int> beta2_sym;
  std::optional<std::string> at;  // "gmbr" / "gmsr": derive symbols from the scaled point
  std::string failures = "1";
  int trials = 100;
  std::uint64_t seed = 1;
  std::string field = "gf256";
  std::string policy = "uniform";
};

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("REGEN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, std::string("REGEN_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

template <typename Field>
std::vector<TrialResult> run_trials(const SystemParams& p, int alpha_sym, int beta2_sym,
                                    int fail_lo, int fail_hi, int trials, std::uint64_t seed,
                                    const TrialOptions& options) {
  std::vector<TrialResult> out;
  out.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const int failures = fail_lo + t % (fail_hi - fail_lo + 1);
    out.push_back(run_trial<Field>(p, alpha_sym, beta2_sym, failures, seed + t, options));
  }
  return out;
}

inline json simulate_json(const SystemParams& params, const SimulateArgs& a) {
  SystemParams p = params;
  int alpha_sym = 0;
  int beta2_sym = 0;
  if (a.at) {
    const CodePoint pt = point_of_kind(p, *a.at);
    const SymbolPoint sp = scale_to_symbols(p, pt);
    p = p.with_file_size(sp.file_len);
    alpha_sym = sp.alpha_sym;
    beta2_sym = sp.beta2_sym;
  }
  if (a.alpha_sym) alpha_sym = *a.alpha_sym;
  if (a.beta2_sym) beta2_sym = *a.beta2_sym;
  if (!a.at && (!a.alpha_sym || !a.beta2_sym)) {
    throw Error(ErrorCode::InvalidArgument, "give --alpha-sym and --beta2-sym, or --at gmbr|gmsr");
  }
  if (a.trials < 1) throw Error(ErrorCode::InvalidArgument, "--trials must be positive");

  const auto [fail_lo, fail_hi] = parse_int_range(a.failures);
  if (fail_lo < 0) throw Error(ErrorCode::InvalidArgument, "--failures must be non-negative");
  TrialOptions options;
  if (a.policy == "uniform") {
    options.policy = HelperPolicy::Uniform;
  } else if (a.policy == "worst-case") {
    options.policy = HelperPolicy::WorstCase;
  } else {
    throw Error(ErrorCode::InvalidArgument, "policy must be uniform or worst-case");
  }

  std::vector<TrialResult> results;
  if (a.field == "gf256") {
    results = run_trials<Gf256>(p, alpha_sym, beta2_sym, fail_lo, fail_hi, a.trials, a.seed, options);
  } else if (a.field == "p257") {
    results = run_trials<Prime257>(p, alpha_sym, beta2_sym, fail_lo, fail_hi, a.trials, a.seed, options);
  } else {
    throw Error(ErrorCode::InvalidArgument, "field must be gf256 or p257");
  }

  json j;
  json cfg = params_json(p);
  cfg["alpha_sym"] = alpha_sym;
  cfg["beta1_sym"] = numer(p.kprime() * beta2_sym).convert_to<long>();
  cfg["beta2_sym"] = beta2_sym;
  cfg["failures"] = a.failures;
  cfg["trials"] = a.trials;
  cfg["seed"] = a.seed;
  cfg["field"] = a.field;
  cfg["policy"] = a.policy;
  j["config"] = std::move(cfg);

  long checks = 0;
  long successes = 0;
  int fully = 0;
  json trials = json::array();
  for (const auto& r : results) {
    json t;
    t["seed"] = r.seed;
    t["repairs_performed"] = r.repairs_performed;
    json checks_json = json::array();
    for (const auto& c : r.reconstruction_checks) {
      checks_json.push_back({{"nodes", c.nodes}, {"success", c.success}});
      ++checks;
      successes += c.success ? 1 : 0;
    }
    t["reconstruction_checks"] = std::move(checks_json);
    t["success_rate"] = r.success_rate;
    trials.push_back(std::move(t));
    fully += r.all_succeeded() ? 1 : 0;
  }
  j["trials"] = std::move(trials);
  j["checks"] = checks;
  j["success_rate"] = checks == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(checks);
  j["trials_all_success_rate"] = static_cast<double>(fully) / static_cast<double>(results.size());
  return j;
}

inline int cmd_simulate(const SystemParams& p, const SimulateArgs& a, std::ostream& out) {
  out << simulate_json(p, a).dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// paper-figures: the sweeps behind the published plots.

inline int cmd_paper_figures(const std::filesystem::path& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  const SystemParams scen_a = validate_params({15, 5, 8, 6, 1, 1, 1, 1});
  const SystemParams scen_b = validate_params({15, 5, 4, 10, 1, 1, 1, 1});
  const std::vector<Rational> ratios = {1, Rational(4, 3), Rational(3, 2), 2, 3, 4};

  auto write = [&](const std::string& file, auto&& body) {
    std::ofstream f(dir / file);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir / file).string());
    body(f);
    out << (dir / file).string() << '\n';
  };
  write("fig2_gmsr_ratio.csv", [&](std::ostream& f) { cmd_ratio(scen_a, Kind::Msr, 1, 20, ratios, f); });
  write("fig3_gmbr_ratio.csv", [&](std::ostream& f) { cmd_ratio(scen_a, Kind::Mbr, 1, 20, ratios, f); });
  write("fig5_tradeoff_curves.csv", [&](std::ostream& f) {
    f << "kprime," << curve_header() << '\n';
    for (int kp : {1, 2, 4}) {
      const SystemParams q = scen_a.with_kprime(kp);
      for (const auto& b : curve_beta2_values(q, 200, false)) f << kp << ',' << curve_row(q, b) << '\n';
    }
  });
  write("fig6_eta_vs_kprime.csv", [&](std::ostream& f) {
    f << "kind," << csv_header_pair("cost_ratio") << ",kprime," << csv_header_pair("eta") << '\n';
    for (Kind kind : {Kind::Msr, Kind::Mbr}) {
      for (const auto& ratio : ratios) {
        for (int kp = 1; kp <= 20; ++kp) {
          const SystemParams q = scen_a.with_costs(1, ratio).with_kprime(kp);
          f << to_string(kind) << ',' << csv_pair(ratio) << ',' << kp << ',' << csv_pair(eta(q, kind)) << '\n';
        }
      }
    }
  });
  write("fig7_gmbr_ratio_scenario_b.csv",
        [&](std::ostream& f) { cmd_ratio(scen_b, Kind::Mbr, 1, 20, ratios, f); });
  write("thresholds.csv", [&](std::ostream& f) {
    cmd_threshold(scen_a, f);
    cmd_threshold(scen_b, f);
  });
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Dispatcher.

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cost/bandwidth tradeoff of regenerating codes with two download-cost classes"};
  app.require_subcommand(1);

  ParamOptions point_p, curve_p, ratio_p, threshold_p, verify_p, simulate_p;

  auto* point = app.add_subcommand("point", "extremal operating point");
  add_param_flags(point, point_p);
  std::string point_kind = "gmsr";
  std::string point_format = "csv";
  point->add_option("--kind", point_kind, "msr, mbr, gmsr, gmbr, gmsr-limit or gmbr-limit");
  point->add_option("--format", point_format, "csv or json");

  auto* curve = app.add_subcommand("curve", "piecewise alpha_min(beta2) tradeoff");
  add_param_flags(curve, curve_p);
  int samples = 200;
  bool breakpoints_only = false;
  curve->add_option("--samples", samples, "evenly spaced samples (default 200)");
  curve->add_flag("--breakpoints-only", breakpoints_only, "only the exact breakpoints");

  auto* ratio = app.add_subcommand("ratio", "bandwidth ratio rho and cost ratio eta over kprime");
  add_param_flags(ratio, ratio_p);
  std::string ratio_kind = "msr";
  std::string kp_range = "1..20";
  std::vector<std::string> cost_ratio_text;
  ratio->add_option("--kind", ratio_kind, "msr or mbr");
  ratio->add_option("--kprime-range", kp_range, "integer range lo..hi (default 1..20)");
  ratio->add_option("--cost-ratio", cost_ratio_text, "C2/C1 value; repeatable");

  auto* threshold = app.add_subcommand("threshold", "cost-ratio thresholds and eta limits");
  add_param_flags(threshold, threshold_p);

  auto* verify = app.add_subcommand("verify", "cross-check the closed form against the flow oracle");
  add_param_flags(verify, verify_p);
  bool sweep = false;
  std::vector<std::string> beta2_text;
  std::string verify_format = "text";
  verify->add_flag("--sweep", sweep, "k<=5, d<=7, kprime in {1,2,3,5}");
  verify->add_option("--beta2", beta2_text, "beta2 value to check; repeatable (default grid)");
  verify->add_option("--format", verify_format, "text or json");

  auto* simulate = app.add_subcommand("simulate", "random linear network coding trials");
  add_param_flags(simulate, simulate_p);
  SimulateArgs sim;
  simulate->add_option("--alpha-sym", sim.alpha_sym, "symbols stored per node");
  simulate->add_option("--beta2-sym", sim.beta2_sym, "symbols per expensive helper");
  simulate->add_option("--at", sim.at, "use the integer-scaled gmbr or gmsr point");
  simulate->add_option("--failures", sim.failures, "repairs per trial, N or lo..hi cycled over trials");
  simulate->add_option("--trials", sim.trials, "number of trials (default 100)");
  simulate->add_option("--seed", sim.seed, "base seed (default $REGEN_SEED or 1)");
  simulate->add_option("--field", sim.field, "gf256 or p257");
  simulate->add_option("--policy", sim.policy, "uniform or worst-case helper choice");

  auto* figures = app.add_subcommand("paper-figures", "write the published figure sweeps as CSV");
  std::string out_dir = "figures";
  figures->add_option("--out-dir", out_dir, "output directory (default ./figures)");

  std::vector<std::string> argv_storage{"regen"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: UsageError: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (point->parsed()) {
      return cmd_point(resolve_params(point_p), point_kind, parse_format(point_format), out);
    }
    if (curve->parsed()) return cmd_curve(resolve_params(curve_p), samples, breakpoints_only, out);
    if (ratio->parsed()) {
      const auto [lo, hi] = parse_int_range(kp_range);
      std::vector<Rational> ratios;
      for (const auto& r : cost_ratio_text) ratios.push_back(parse_rational(r));
      return cmd_ratio(resolve_params(ratio_p), parse_kind(ratio_kind), lo, hi, ratios, out);
    }
    if (threshold->parsed()) return cmd_threshold(resolve_params(threshold_p), out);
    if (verify->parsed()) {
      std::vector<SystemParams> configs =
          sweep ? verification_sweep() : std::vector<SystemParams>{resolve_params(verify_p)};
      std::vector<Rational> grid;
      for (const auto& b : beta2_text) grid.push_back(parse_rational(b));
      if (verify_format != "text" && verify_format != "json") {
        throw Error(ErrorCode::InvalidArgument, "format must be text or json");
      }
      return cmd_verify(configs, grid, verify_format == "json" ? Format::Json : Format::Csv, out);
    }
    if (simulate->parsed()) {
      if (simulate->count("--seed") == 0) sim.seed = default_seed();
      return cmd_simulate(resolve_params(simulate_p), sim, out);
    }
    if (figures->parsed()) return cmd_paper_figures(out_dir, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace regen::cli
