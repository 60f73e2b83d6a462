// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0
//
// devlab: sampling, rate evaluation, regime maps, Monte Carlo tail
// estimation, identity verification, and diagnostics for triangle/cherry
// count deviations in G(n,m) and G(n,p).
//
// Exit codes: 0 ok, 1 usage, 2 capacity, 3 i/o, 4 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "devlab/errors.hpp"
#include "devlab/experiments.hpp"
#include "devlab/graph.hpp"
#include "devlab/io.hpp"
#include "devlab/process.hpp"
#include "devlab/rates.hpp"
#include "devlab/rng.hpp"
#include "devlab/tailbounds.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace devlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerification = 4;

struct Common {
  std::string out;
  std::string format = "csv";
  uint64_t seed = 1;
  int workers = 1;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f << text;
}

void emit_resolved_config(const std::string& command, const json& cfg) {
  json j;
  j["command"] = command;
  j["resolved_config"] = cfg;
  std::cout << j.dump() << "\n";
}

PlantSpec parse_plant(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParamError("plant spec must be kind:size");
  PlantSpec spec;
  spec.kind = plant_kind_from_string(text.substr(0, colon));
  spec.size = std::stoi(text.substr(colon + 1));
  return spec;
}

int64_t resolve_m(int n, int64_t m, double t, bool has_m, bool has_t) {
  if (has_m) return m;
  if (has_t) return int64_t(t * double(pair_count(n)));
  throw ParamError("need --m or --t");
}

// --- sample ------------------------------------------------------------------

int cmd_sample(int n, int64_t m, double p, double t, bool has_m, bool has_p, bool has_t,
               bool as_process, const std::string& plant_text, const Common& c) {
  json cfg{{"n", n}, {"seed", c.seed}, {"out", c.out}};
  if (as_process) {
    const int64_t mm = resolve_m(n, m, t, has_m, has_t);
    cfg["m"] = mm;
    emit_resolved_config("sample", cfg);
    auto trace = sample_process(n, mm, c.seed);
    std::ostringstream os;
    os << trace_to_json(trace) << '\n';
    write_text(c.out, os.str());
    return kExitOk;
  }
  GraphSnapshot g = [&] {
    if (has_p) {
      cfg["p"] = p;
      return sample_gnp(n, p, c.seed);
    }
    const int64_t mm = resolve_m(n, m, t, has_m, has_t);
    cfg["m"] = mm;
    return sample_gnm(n, mm, c.seed);
  }();
  if (!plant_text.empty()) {
    cfg["plant"] = plant_text;
    g = plant(g, parse_plant(plant_text)).graph;
  }
  emit_resolved_config("sample", cfg);
  std::ostringstream os;
  write_edge_list(os, g);
  write_text(c.out, os.str());
  return kExitOk;
}

// --- rates --------------------------------------------------------------------

json regime_report_json(const RegimeReport& rep) {
  json j;
  j["normal"] = rep.normal;
  j["star"] = rep.star;
  j["hub"] = rep.hub;
  if (rep.has_clique) j["clique"] = rep.clique;
  j["M"] = rep.max_value;
  j["argmax"] = to_string(rep.argmax);
  j["window_ok"] = rep.window_ok;
  j["density_ok"] = rep.density_ok;
  return j;
}

int cmd_rates(int64_t n, double t, double b, const std::string& statistic, const Common& c) {
  emit_resolved_config("rates", {{"n", n}, {"t", t}, {"b", b}, {"statistic", statistic}});
  RateParams rp{n, t, b};
  json j;
  if (statistic == "cherry") {
    j = regime_report_json(rate_functions_cherry(rp));
  } else {
    j = regime_report_json(rate_functions_triangle(rp));
    KappaReport kr = kappa(rp);
    j["kappa"] = kr.kappa;
    if (kr.kappa_plus_defined) j["kappa_plus"] = kr.kappa_plus;
  }
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_rate_of_a(int64_t n, double t, double a, const Common& c) {
  emit_resolved_config("rate-of-a", {{"n", n}, {"t", t}, {"a", a}});
  auto r = rate_r_of_a(n, t, a);
  auto lt = lower_tail_rate(n, t, a);
  json j{{"r", r.value},
         {"argmin", to_string(r.argmin)},
         {"branch_normal", r.branch_normal},
         {"branch_star_hub", r.branch_star_hub},
         {"branch_clique", r.branch_clique},
         {"lower_tail_rate", lt.value},
         {"lower_window_low_ok", lt.window_low_ok},
         {"lower_window_high_ok", lt.window_high_ok}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_gnp_rate(int64_t n, double p, double delta, const std::string& variant,
                 const Common& c) {
  emit_resolved_config("gnp-rate", {{"n", n}, {"p", p}, {"delta", delta}, {"variant", variant}});
  GnpRateParams gp{n, p, delta};
  auto res = gnp_rate(gp, gnp_variant_from_string(variant));
  json j{{"variant", to_string(res.variant)},
         {"value", res.value},
         {"window_ok", res.window_ok},
         {"window_note", res.window_note}};
  if (res.variant == GnpVariant::precise) {
    j["error_band"] = res.error_band;
    j["x_star"] = gp.x_star();
    j["m_star"] = gp.m_star();
    j["m_minus"] = gp.m_minus();
  }
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

// --- regime map -----------------------------------------------------------------

int cmd_regime_map(const std::string& mode, double g_lo, double g_hi, int g_steps,
                   double x_lo, double x_hi, int x_steps, int64_t ref_n, const Common& c) {
  emit_resolved_config("regime-map",
                       {{"mode", mode}, {"gamma", {g_lo, g_hi, g_steps}},
                        {"theta_or_eta", {x_lo, x_hi, x_steps}}, {"ref_n", ref_n}});
  auto grid = [](double lo, double hi, int steps) {
    std::vector<double> out;
    for (int i = 0; i < steps; ++i) {
      out.push_back(steps == 1 ? lo : lo + (hi - lo) * i / double(steps - 1));
    }
    return out;
  };
  auto points = regime_map(grid(g_lo, g_hi, g_steps), grid(x_lo, x_hi, x_steps),
                           map_mode_from_string(mode), ref_n);
  std::ostringstream os;
  write_regime_map_csv(os, points);
  write_text(c.out, os.str());
  return kExitOk;
}

// --- mc-tail / empirical-dev ------------------------------------------------------

McTailSpec build_mc_spec(const std::string& model, int n, int64_t m, double p, double t,
                         bool has_m, bool has_p, bool has_t, const std::string& statistic,
                         double threshold, int64_t trials, const std::string& plant_text,
                         const Common& c) {
  McTailSpec spec;
  spec.model = model == "gnp" ? McModel::gnp : McModel::gnm;
  spec.n = n;
  if (spec.model == McModel::gnm) {
    spec.m = resolve_m(n, m, t, has_m, has_t);
  } else {
    if (!has_p) throw ParamError("gnp model needs --p");
    spec.p = p;
  }
  spec.statistic = statistic_from_string(statistic);
  spec.threshold = threshold;
  spec.trials = trials;
  spec.seed = c.seed;
  spec.workers = c.workers;
  if (!plant_text.empty()) spec.plant = parse_plant(plant_text);
  return spec;
}

json mc_spec_json(const McTailSpec& spec) {
  json j{{"model", to_string(spec.model)},
         {"n", spec.n},
         {"statistic", to_string(spec.statistic)},
         {"threshold", spec.threshold},
         {"trials", spec.trials},
         {"seed", spec.seed},
         {"workers", spec.workers}};
  if (spec.model == McModel::gnm) j["m"] = spec.m;
  else j["p"] = spec.p;
  if (spec.plant) j["plant"] = to_string(spec.plant->kind) + ":" + std::to_string(spec.plant->size);
  return j;
}

int cmd_mc_tail(const McTailSpec& spec, const Common& c) {
  emit_resolved_config("mc-tail", mc_spec_json(spec));
  auto est = mc_tail(spec);
  std::cout << json{{"wall_time_s", est.wall_time_s}}.dump() << "\n";
  if (c.format == "json") {
    json j{{"model", to_string(est.model)},       {"n", est.n},
           {"density", est.m_or_p},               {"statistic", to_string(est.statistic)},
           {"threshold", est.threshold},          {"trials", est.trials},
           {"exceed", est.exceed_count},          {"p_hat", est.p_hat},
           {"log_p_hat", est.log_p_hat},          {"ci_lo", est.ci_lo},
           {"ci_hi", est.ci_hi},                  {"seed", est.seed}};
    write_text(c.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    write_tail_estimate_csv(os, est);
    write_text(c.out, os.str());
  }
  return kExitOk;
}

int cmd_empirical_dev(const McTailSpec& spec, double b_target, const Common& c) {
  json cfg = mc_spec_json(spec);
  cfg["b_target"] = b_target;
  emit_resolved_config("empirical-dev", cfg);
  auto est = empirical_dev(spec, b_target);
  json j{{"b_target", est.b_target}, {"quantile", est.quantile},
         {"threshold", est.threshold}, {"ci_lo", est.ci_lo},
         {"ci_hi", est.ci_hi}, {"trials", est.trials}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

// --- planted boost ----------------------------------------------------------------

int cmd_planted_boost(int n, int64_t m, double t, bool has_m, bool has_t, double b,
                      const std::string& kind, int64_t trials, const Common& c) {
  const int64_t mm = resolve_m(n, m, t, has_m, has_t);
  emit_resolved_config("planted-boost", {{"n", n}, {"m", mm}, {"b", b}, {"kind", kind},
                                         {"trials", trials}, {"seed", c.seed}});
  auto rep = planted_boost(n, mm, b, plant_kind_from_string(kind), trials, c.seed, c.workers);
  json j{{"kind", to_string(rep.kind)},
         {"plant_size", rep.plant_size},
         {"plant_edges", rep.plant_edge_count},
         {"in_structure_copies", rep.in_structure_copies},
         {"boost", rep.boost},
         {"boost_se", rep.boost_se},
         {"boost_ci_lo", rep.boost_ci_lo},
         {"boost_ci_hi", rep.boost_ci_hi},
         {"M", rep.m_value},
         {"clique", rep.clique_value},
         {"ratio_vs_m", rep.ratio_vs_m},
         {"ratio_vs_clique", rep.ratio_vs_clique},
         {"prob_heuristic_ok", rep.prob_heuristic_ok},
         {"trials", rep.trials}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_variance_profile(int n, int64_t m, double t, bool has_m, bool has_t,
                         int64_t traces, const Common& c) {
  const int64_t mm = resolve_m(n, m, t, has_m, has_t);
  emit_resolved_config("variance-profile", {{"n", n}, {"m", mm}, {"traces", traces},
                                            {"seed", c.seed}});
  auto vp = variance_profile(n, mm, traces, c.seed, c.workers);
  std::ostringstream os;
  os << "i,mean_m2_cherry,mean_m2_triangle\n";
  for (int64_t i = 0; i < mm; ++i) {
    os << (i + 1) << ',' << format_double(vp.mean_m2_cherry[i]) << ','
       << format_double(vp.mean_m2_triangle[i]) << '\n';
  }
  write_text(c.out, os.str());
  json j{{"v_min", vp.v_min},
         {"v_mean", vp.v_mean},
         {"v_max", vp.v_max},
         {"second_half_min_ratio", vp.second_half_min_ratio},
         {"second_half_max_ratio", vp.second_half_max_ratio},
         {"subsampled", vp.subsampled}};
  std::cout << j.dump() << "\n";
  return kExitOk;
}

// --- bahadur / mixture -------------------------------------------------------------

int cmd_bahadur(int64_t trials_n, double p, int64_t k, double x, bool has_k, bool has_x,
                int terms, const Common& c) {
  emit_resolved_config("bahadur", {{"N", trials_n}, {"p", p}, {"J", terms}});
  BinomialTailQuery q = has_k ? BinomialTailQuery::from_k(trials_n, p, k, terms)
                              : (has_x ? BinomialTailQuery::from_x(trials_n, p, x, terms)
                                       : throw ParamError("need --k or --x"));
  auto r = bahadur(q);
  json j{{"N", r.trials}, {"p", r.p}, {"k", r.k}, {"x", r.x}, {"J", r.terms},
         {"log_b_exact", r.log_point_exact}, {"log_B_exact", r.log_tail_exact},
         {"log_b_approx", r.log_point_approx}, {"log_B_approx", r.log_tail_approx},
         {"E", r.correction}, {"window_ok", r.window_ok},
         {"finite_j_ratio", r.finite_j_ratio}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_mixture(int n, double p, int64_t threshold, bool use_mc, int64_t trials,
                const Common& c) {
  emit_resolved_config("mixture", {{"n", n}, {"p", p}, {"threshold", threshold},
                                   {"mc", use_mc}, {"trials", trials}, {"seed", c.seed}});
  MixtureReport rep = use_mc ? mixture_identity_mc(n, p, threshold, trials, c.seed)
                             : mixture_identity_exact(n, p, threshold);
  json j{{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"exact", rep.exact},
         {"abs_diff", std::abs(rep.lhs - rep.rhs)}, {"per_m", rep.per_m}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

// --- diagnostics / cover / minmax ---------------------------------------------------

GraphSnapshot load_or_sample(const std::string& in, int n, int64_t m, uint64_t seed) {
  if (!in.empty()) return read_edge_list_file(in);
  return sample_gnm(n, m, seed);
}

int cmd_diagnose(const std::string& in, int n, int64_t m, double t, double b,
                 const Common& c) {
  emit_resolved_config("diagnose", {{"in", in}, {"n", n}, {"m", m}, {"t", t}, {"b", b}});
  GraphSnapshot g = load_or_sample(in, n, m, c.seed);
  const double tt = t > 0 ? t : double(g.m()) / double(pair_count(g.n()));
  auto rep = diagnostics(g, tt, b);
  std::ostringstream os;
  write_diagnostics_csv(os, rep);
  write_text(c.out, os.str());
  return kExitOk;
}

int cmd_cover(const std::string& in, int n, int64_t m, int r, const Common& c) {
  emit_resolved_config("cover", {{"in", in}, {"n", n}, {"m", m}, {"r", r}});
  GraphSnapshot g = load_or_sample(in, n, m, c.seed);
  auto res = greedy_star_cover(g, r);
  json j{{"centers", res.centers}, {"covered", res.covered},
         {"hypothesis_ok", res.hypothesis_ok}, {"bound_met", res.bound_met}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_minmax(int n, int64_t m, int k, const Common& c) {
  emit_resolved_config("minmax-nbhd", {{"n", n}, {"m", m}, {"k", k}});
  json j{{"value", min_max_neighborhood_union(n, m, k)}};
  write_text(c.out, j.dump(2) + "\n");
  return kExitOk;
}

// --- decompose ----------------------------------------------------------------------

int cmd_decompose(const std::string& trace_path, int n, int64_t m, bool exact,
                  double k_cherry, double k_triangle, bool do_rebalance, bool do_qv,
                  const Common& c) {
  emit_resolved_config("decompose",
                       {{"trace", trace_path}, {"n", n}, {"m", m}, {"exact", exact},
                        {"k_cherry", k_cherry}, {"k_triangle", k_triangle},
                        {"rebalance", do_rebalance}, {"qv", do_qv}, {"seed", c.seed}});
  ProcessTrace trace = trace_path.empty() ? sample_process(n, m, c.seed)
                                          : read_trace_file(trace_path);
  if (exact) {
    if (trace.n > 10 && do_rebalance) {
      throw CapacityError("exact rebalance check limited to n <= 10");
    }
    auto dch = deviation_decomposition_exact(trace, WhichStat::cherry);
    auto dtr = deviation_decomposition_exact(trace, WhichStat::triangle);
    json j{{"d_cherry", dch.d_value.to_string()},
           {"residual_cherry", dch.residual.to_string()},
           {"d_triangle", dtr.d_value.to_string()},
           {"residual_triangle", dtr.residual.to_string()},
           {"residual_zero", dch.residual.is_zero() && dtr.residual.is_zero()}};
    write_text(c.out, j.dump(2) + "\n");
    return kExitOk;
  }
  TraceAnalysisOptions opts;
  if (k_cherry > 0) opts.trunc.k_cherry = k_cherry;
  if (k_triangle > 0) opts.trunc.k_triangle = k_triangle;
  opts.rebalance = do_rebalance;
  opts.second_moments = do_qv;
  opts.qv_seed = c.seed;
  auto analysis = analyze_trace(trace, opts);
  std::ostringstream os;
  write_steps_csv(os, analysis);
  write_text(c.out, os.str());
  json j{{"d_cherry", analysis.d_cherry},
         {"d_triangle", analysis.d_triangle},
         {"sum_cherry", analysis.sum_cherry},
         {"sum_triangle", analysis.sum_triangle},
         {"rel_residual_cherry", analysis.rel_residual_cherry()},
         {"rel_residual_triangle", analysis.rel_residual_triangle()},
         {"d_prime_cherry", analysis.d_prime_cherry},
         {"n_star_cherry", analysis.n_star_cherry},
         {"d_prime_triangle", analysis.d_prime_triangle},
         {"n_star_triangle", analysis.n_star_triangle},
         {"v_decomp", analysis.v_decomp},
         {"qv_subsampled", analysis.qv_subsampled}};
  std::cout << j.dump() << "\n";
  return kExitOk;
}

// --- verify suites --------------------------------------------------------------------

int verify_martingale(int n, int64_t m, int64_t trials, uint64_t seed) {
  int failures = 0;
  for (int64_t trial = 0; trial < trials; ++trial) {
    auto trace = sample_process(n, m, seed + uint64_t(trial));
    auto dch = deviation_decomposition_exact(trace, WhichStat::cherry);
    auto dtr = deviation_decomposition_exact(trace, WhichStat::triangle);
    if (!dch.residual.is_zero() || !dtr.residual.is_zero()) {
      ++failures;
      std::cout << "martingale residual nonzero at trial " << trial << "\n";
    }
  }
  std::cout << "verify martingale: " << trials << " traces (n=" << n << ", m=" << m
            << "), " << failures << " failures\n";
  return failures == 0 ? kExitOk : kExitVerification;
}

int verify_counts(int64_t trials, uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int64_t trial = 0; trial < trials; ++trial) {
    const int n = 4 + int(rng.below(9));  // 4..12
    const int64_t N = pair_count(n);
    const auto m = int64_t(rng.below(uint64_t(N + 1)));
    auto g = sample_gnm(n, m, seed * 31 + uint64_t(trial));
    if (count_triangles(g, CountKernel::bitset) != count_triangles_brute(g) ||
        count_triangles(g, CountKernel::merge) != count_triangles_brute(g) ||
        count_cherries(g) != count_cherries_brute(g)) {
      ++failures;
      std::cout << "count mismatch at trial " << trial << " (n=" << n << ", m=" << m << ")\n";
    }
  }
  if (count_triangles(sample_gnm(4, 6, 1)) != 24) ++failures;
  std::cout << "verify counts: " << trials << " graphs, " << failures << " failures\n";
  return failures == 0 ? kExitOk : kExitVerification;
}

int verify_mixture() {
  int failures = 0;
  for (int n = 3; n <= 5; ++n) {
    const int64_t max_tri = int64_t(n) * (n - 1) * (n - 2);
    for (int pi = 1; pi <= 9; ++pi) {
      const double p = pi / 10.0;
      for (int64_t thr = -1; thr <= max_tri; ++thr) {
        auto rep = mixture_identity_exact(n, p, thr);
        if (std::abs(rep.lhs - rep.rhs) >= 1e-12) {
          ++failures;
          std::cout << "mixture gap at n=" << n << " p=" << p << " thr=" << thr
                    << ": " << std::abs(rep.lhs - rep.rhs) << "\n";
        }
      }
    }
  }
  std::cout << "verify mixture: " << failures << " failures\n";
  return failures == 0 ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deviation laboratory for triangle and cherry counts in G(n,m)/G(n,p)"};
  app.set_config("--config");
  app.require_subcommand(1);

  Common common;
  app.add_option("--seed", common.seed, "master RNG seed")->capture_default_str();
  app.add_option("--workers", common.workers, "worker thread count")
      ->envname("DEVLAB_WORKERS")
      ->capture_default_str();
  app.add_option("--out", common.out, "output path (stdout when empty)");
  app.add_option("--format", common.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // shared numeric options
  int n = 0, k = 1, r = 1;
  int64_t m = 0, trials = 1000, big_n = 0, kth = 0;
  double p = 0, t = 0, b = 0, a = 0, delta = 0, threshold = 0, x = 0;
  std::string model = "gnm", statistic = "triangle-dev", plant_text, in_path, kind = "clique";
  std::string variant = "asymptotic-36", mode = "t-b", suite, trace_path;

  auto* sample = app.add_subcommand("sample", "sample a graph or an edge-revealing trace");
  auto* s_n = sample->add_option("--n", n, "vertex count")->required();
  auto* s_m = sample->add_option("--m", m, "edge count");
  auto* s_p = sample->add_option("--p", p, "edge probability");
  auto* s_t = sample->add_option("--t", t, "edge density m/N");
  bool as_process = false;
  sample->add_flag("--process", as_process, "emit a trace (JSON) instead of an edge list");
  sample->add_option("--plant", plant_text, "planted structure kind:size");
  (void)s_n;

  auto* rates_cmd = app.add_subcommand("rates", "closed-form deviation scales at (n, t, b)");
  std::string rates_statistic = "triangle";
  rates_cmd->add_option("--n", n)->required();
  rates_cmd->add_option("--t", t)->required();
  rates_cmd->add_option("--b", b)->required();
  rates_cmd->add_option("--statistic", rates_statistic, "triangle or cherry");

  auto* roa = app.add_subcommand("rate-of-a", "inverse rate r(t, a) and the lower-tail rate");
  roa->add_option("--n", n)->required();
  roa->add_option("--t", t)->required();
  roa->add_option("--a", a)->required();

  auto* gr = app.add_subcommand("gnp-rate", "G(n,p) upper-tail rate variants");
  gr->add_option("--n", n)->required();
  gr->add_option("--p", p)->required();
  gr->add_option("--delta", delta)->required();
  gr->add_option("--variant", variant,
                 "asymptotic-36 | asymptotic-DE | FMN | localised | precise");

  auto* rm = app.add_subcommand("regime-map", "regime labels over an exponent grid");
  double g_lo = -0.45, g_hi = -0.05, x_lo = 0.1, x_hi = 1.9;
  int g_steps = 9, x_steps = 37;
  int64_t ref_n = 1000000;
  rm->add_option("--mode", mode, "t-a | t-b | p-delta");
  rm->add_option("--gamma-lo", g_lo);
  rm->add_option("--gamma-hi", g_hi);
  rm->add_option("--gamma-steps", g_steps);
  rm->add_option("--x-lo", x_lo);
  rm->add_option("--x-hi", x_hi);
  rm->add_option("--x-steps", x_steps);
  rm->add_option("--ref-n", ref_n);

  auto* mc = app.add_subcommand("mc-tail", "Monte Carlo exceedance estimate");
  mc->add_option("--model", model, "gnm or gnp");
  mc->add_option("--n", n)->required();
  auto* mc_m = mc->add_option("--m", m);
  auto* mc_p = mc->add_option("--p", p);
  auto* mc_t = mc->add_option("--t", t);
  mc->add_option("--statistic", statistic);
  mc->add_option("--threshold", threshold)->required();
  mc->add_option("--trials", trials);
  mc->add_option("--plant", plant_text);

  auto* ed = app.add_subcommand("empirical-dev", "empirical (1 - e^{-b}) deviation quantile");
  ed->add_option("--model", model);
  ed->add_option("--n", n)->required();
  auto* ed_m = ed->add_option("--m", m);
  auto* ed_p = ed->add_option("--p", p);
  auto* ed_t = ed->add_option("--t", t);
  ed->add_option("--statistic", statistic);
  ed->add_option("--b", b)->required();
  ed->add_option("--trials", trials);

  auto* pb = app.add_subcommand("planted-boost", "planted-structure triangle boost");
  pb->add_option("--n", n)->required();
  auto* pb_m = pb->add_option("--m", m);
  auto* pb_t = pb->add_option("--t", t);
  pb->add_option("--b", b)->required();
  pb->add_option("--kind", kind, "star | hub | clique");
  pb->add_option("--trials", trials);

  auto* vp = app.add_subcommand("variance-profile", "conditional second moments along the process");
  vp->add_option("--n", n)->required();
  auto* vp_m = vp->add_option("--m", m);
  auto* vp_t = vp->add_option("--t", t);
  int64_t traces = 20;
  vp->add_option("--traces", traces);

  auto* bah = app.add_subcommand("bahadur", "binomial point/tail values and expansion");
  bah->add_option("--N", big_n)->required();
  bah->add_option("--p", p)->required();
  auto* bah_k = bah->add_option("--k", kth);
  auto* bah_x = bah->add_option("--x", x);
  int terms = -1;
  bah->add_option("--J", terms, "expansion order; -1 = machine-precision truncation");

  auto* mix = app.add_subcommand("mixture", "edge-count mixture identity check");
  mix->add_option("--n", n)->required();
  mix->add_option("--p", p)->required();
  int64_t mix_thr = 0;
  mix->add_option("--threshold", mix_thr)->required();
  bool mix_mc = false;
  mix->add_flag("--mc", mix_mc, "paired Monte Carlo instead of exact enumeration");
  mix->add_option("--trials", trials);

  auto* diag = app.add_subcommand("diagnose", "degree/codegree diagnostics of a graph");
  diag->add_option("--in", in_path, "edge-list file (otherwise sample G(n,m))");
  diag->add_option("--n", n);
  diag->add_option("--m", m);
  diag->add_option("--t", t);
  diag->add_option("--b", b)->required();

  auto* cover = app.add_subcommand("cover", "greedy star cover");
  cover->add_option("--in", in_path);
  cover->add_option("--n", n);
  cover->add_option("--m", m);
  cover->add_option("--r", r)->required();

  auto* mm = app.add_subcommand("minmax-nbhd", "min-max neighbourhood union explorer");
  mm->add_option("--n", n)->required();
  mm->add_option("--m", m)->required();
  mm->add_option("--k", k)->required();

  auto* dec = app.add_subcommand("decompose", "martingale decomposition of a trace");
  dec->add_option("--trace", trace_path, "trace JSON (otherwise sample one)");
  dec->add_option("--n", n);
  dec->add_option("--m", m);
  bool dec_exact = false, dec_rebalance = false, dec_qv = false;
  double dec_kch = 0, dec_ktri = 0;
  dec->add_flag("--exact", dec_exact);
  dec->add_option("--k-cherry", dec_kch, "cherry truncation cutoff (0 = none)");
  dec->add_option("--k-triangle", dec_ktri, "triangle truncation cutoff (0 = none)");
  dec->add_flag("--rebalance", dec_rebalance);
  dec->add_flag("--qv", dec_qv);

  auto* ver = app.add_subcommand("verify", "exact identity suites");
  ver->add_option("--suite", suite, "martingale | counts | mixture")->required();
  ver->add_option("--n", n);
  ver->add_option("--m", m);
  ver->add_option("--trials", trials);

  // global options may appear after the subcommand name
  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
    sc->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample) {
      return cmd_sample(n, m, p, t, bool(*s_m), bool(*s_p), bool(*s_t), as_process,
                        plant_text, common);
    }
    if (*rates_cmd) return cmd_rates(n, t, b, rates_statistic, common);
    if (*roa) return cmd_rate_of_a(n, t, a, common);
    if (*gr) return cmd_gnp_rate(n, p, delta, variant, common);
    if (*rm) {
      return cmd_regime_map(mode, g_lo, g_hi, g_steps, x_lo, x_hi, x_steps, ref_n, common);
    }
    if (*mc) {
      return cmd_mc_tail(build_mc_spec(model, n, m, p, t, bool(*mc_m), bool(*mc_p),
                                       bool(*mc_t), statistic, threshold, trials,
                                       plant_text, common),
                         common);
    }
    if (*ed) {
      return cmd_empirical_dev(build_mc_spec(model, n, m, p, t, bool(*ed_m), bool(*ed_p),
                                             bool(*ed_t), statistic, 0, trials, "", common),
                               b, common);
    }
    if (*pb) {
      return cmd_planted_boost(n, m, t, bool(*pb_m), bool(*pb_t), b, kind, trials, common);
    }
    if (*vp) {
      return cmd_variance_profile(n, m, t, bool(*vp_m), bool(*vp_t), traces, common);
    }
    if (*bah) return cmd_bahadur(big_n, p, kth, x, bool(*bah_k), bool(*bah_x), terms, common);
    if (*mix) return cmd_mixture(n, p, mix_thr, mix_mc, trials, common);
    if (*diag) return cmd_diagnose(in_path, n, m, t, b, common);
    if (*cover) return cmd_cover(in_path, n, m, r, common);
    if (*mm) return cmd_minmax(n, m, k, common);
    if (*dec) {
      return cmd_decompose(trace_path, n, m, dec_exact, dec_kch, dec_ktri, dec_rebalance,
                           dec_qv, common);
    }
    if (*ver) {
      if (suite == "martingale") {
        return verify_martingale(n ? n : 6, m ? m : 9, trials, common.seed);
      }
      if (suite == "counts") return verify_counts(trials ? trials : 500, common.seed);
      if (suite == "mixture") return verify_mixture();
      throw ParamError("unknown suite: " + suite);
    }
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
