// Copyright 2026 the devlab authors
// SPDX-License-Identifier: Apache-2.0

#include "devlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "devlab/errors.hpp"
#include "json.hpp"

namespace devlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_edge_list(std::ostream& os, const GraphSnapshot& g) {
  os << g.n() << ' ' << g.m() << '\n';
  for (const auto& [u, w] : g.edges()) os << u << ' ' << w << '\n';
}

GraphSnapshot read_edge_list(std::istream& is) {
  int n = 0;
  int64_t m = 0;
  if (!(is >> n >> m)) throw IoError("edge list: missing header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (int64_t i = 0; i < m; ++i) {
    int u, w;
    if (!(is >> u >> w)) throw IoError("edge list: truncated edge rows");
    edges.emplace_back(u, w);
  }
  return GraphSnapshot(n, std::move(edges));
}

void write_edge_list_file(const std::string& path, const GraphSnapshot& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  write_edge_list(out, g);
}

GraphSnapshot read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for read: " + path);
  return read_edge_list(in);
}

std::string trace_to_json(const ProcessTrace& trace) {
  nlohmann::json j;
  j["n"] = trace.n;
  j["m"] = trace.m();
  j["seed"] = trace.seed;
  auto edges = nlohmann::json::array();
  for (const auto& [u, w] : trace.edges) edges.push_back({u, w});
  j["edges"] = std::move(edges);
  return j.dump();
}

ProcessTrace trace_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ProcessTrace trace;
  trace.n = j.at("n").get<int>();
  trace.seed = j.at("seed").get<uint64_t>();
  for (const auto& e : j.at("edges")) {
    trace.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  if (j.contains("m") && j.at("m").get<int64_t>() != trace.m()) {
    throw IoError("trace json: edge count disagrees with m");
  }
  return trace;
}

void write_trace_file(const std::string& path, const ProcessTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for write: " + path);
  out << trace_to_json(trace) << '\n';
}

ProcessTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for read: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return trace_from_json(ss.str());
}

void write_steps_csv(std::ostream& os, const TraceAnalysis& analysis) {
  os << "i,u,w,d_u,d_w,d_uw,a_cherry,a_triangle,ea_cherry,ea_triangle,"
        "x_cherry,x_triangle,coeff_cherry,coeff_triangle,coeff_mix,"
        "xp_cherry,xp_triangle,z_cherry,z_triangle,v_cum\n";
  for (const auto& s : analysis.steps) {
    os << s.i << ',' << s.e.first << ',' << s.e.second << ',' << s.d_u << ','
       << s.d_w << ',' << s.d_uw << ',' << s.a_cherry << ',' << s.a_triangle << ','
       << format_double(s.ea_cherry) << ',' << format_double(s.ea_triangle) << ','
       << format_double(s.x_cherry) << ',' << format_double(s.x_triangle) << ','
       << format_double(s.coeff_cherry) << ',' << format_double(s.coeff_triangle) << ','
       << format_double(s.coeff_mix) << ',' << format_double(s.xp_cherry) << ','
       << format_double(s.xp_triangle) << ',' << format_double(s.z_cherry) << ','
       << format_double(s.z_triangle) << ',' << format_double(s.v_cum) << '\n';
  }
}

void write_regime_map_csv(std::ostream& os, const std::vector<MapPoint>& points) {
  os << "gamma,theta_or_eta,normal,star,hub,clique,M,argmax\n";
  for (const auto& p : points) {
    os << format_double(p.gamma) << ',' << format_double(p.theta_or_eta) << ','
       << format_double(p.normal) << ',' << format_double(p.star) << ','
       << format_double(p.hub) << ',' << format_double(p.clique) << ','
       << format_double(p.m_value) << ',' << p.label << '\n';
  }
}

void write_tail_estimate_csv(std::ostream& os, const TailEstimate& est) {
  os << "model,n,density,statistic,threshold,trials,exceed,p_hat,log_p_hat,"
        "ci_lo,ci_hi,seed,plant\n";
  os << to_string(est.model) << ',' << est.n << ',' << format_double(est.m_or_p) << ','
     << to_string(est.statistic) << ',' << format_double(est.threshold) << ','
     << est.trials << ',' << est.exceed_count << ',' << format_double(est.p_hat) << ','
     << format_double(est.log_p_hat) << ',' << format_double(est.ci_lo) << ','
     << format_double(est.ci_hi) << ',' << est.seed << ',';
  if (est.plant) os << to_string(est.plant->kind) << ':' << est.plant->size;
  else os << "none";
  os << '\n';
}

void write_diagnostics_csv(std::ostream& os, const DiagnosticsReport& rep) {
  os << "name,index,value\n";
  os << "n,," << rep.n << '\n';
  os << "m,," << rep.m << '\n';
  os << "t,," << format_double(rep.t) << '\n';
  os << "b,," << format_double(rep.b) << '\n';
  os << "max_degree,," << rep.max_degree << '\n';
  for (size_t j = 0; j < rep.v_j_start_5.size(); ++j) {
    os << "v_j," << (j + 5) << ',' << rep.v_j_start_5[j] << '\n';
  }
  os << "sum_du_sq,," << format_double(rep.sum_du_sq) << '\n';
  os << "sum_du_sq_restricted,," << format_double(rep.sum_du_sq_restricted) << '\n';
  os << "sum_duw_sq,," << format_double(rep.sum_duw_sq) << '\n';
  for (size_t i = 0; i < rep.k1.size(); ++i) {
    os << "f_k," << rep.k1[i] << ',' << rep.f_k[i] << '\n';
  }
  for (size_t i = 0; i < rep.k2.size(); ++i) {
    os << "h_k," << rep.k2[i] << ',' << rep.h_k[i] << '\n';
  }
  os << "ratio_du_sq_vs_kappa,," << format_double(rep.ratio_du_sq_vs_kappa) << '\n';
  os << "kappa_plus_defined,," << (rep.kappa_plus_defined ? 1 : 0) << '\n';
  os << "ratio_restricted_vs_kappa_plus,,"
     << format_double(rep.ratio_restricted_vs_kappa_plus) << '\n';
  os << "ratio_duw_sq_vs_bound,," << format_double(rep.ratio_duw_sq_vs_bound) << '\n';
  for (size_t i = 0; i < rep.k1.size(); ++i) {
    os << "f_ratio," << rep.k1[i] << ',' << format_double(rep.f_ratio[i]) << '\n';
  }
  for (size_t i = 0; i < rep.k2.size(); ++i) {
    os << "h_ratio," << rep.k2[i] << ',' << format_double(rep.h_ratio[i]) << '\n';
  }
}

}  // namespace devlab
