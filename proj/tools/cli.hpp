#pragma once

// Command-line driver: list-examples, check, spectrum, oracle.
// Exit codes: 0 success, 1 a certificate or dominance check failed (report
// still written), 2 usage or configuration error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pinchlab/pinchlab.hpp"

namespace pinchlab::cli {

struct Options {
  std::string example;
  std::vector<std::string> params;
  int samples = 16;
  std::uint64_t seed = 0;
  double tol = Tolerances{}.certificate;
  double eq_tol = Tolerances{}.equality;
  std::string certs;
  int restarts = 32;
  int max_iters = 500;
  int oracle_samples = -1;  // command default when negative
  std::string out;
  std::string format = "json";
  bool json = false;  // list-examples
};

inline int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PINCHLAB_THREADS")) {
    const long long cap = parse_int(env, "PINCHLAB_THREADS");
    if (cap < 1) throw Error("PINCHLAB_THREADS must be a positive integer");
    n = std::min<long long>(n, cap);
  }
  return n;
}

inline ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("--param expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (out.count(key)) throw Error("parameter '" + key + "' given twice");
    out[key] = item.substr(eq + 1);
  }
  return out;
}

inline std::vector<Certificate> parse_certificates(const std::string& list, const ImmersionChart& chart) {
  if (list.empty()) return default_certificates(chart);
  std::vector<Certificate> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const std::string name = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto c = parse_certificate(name);
    if (!c) throw Error("unknown certificate '" + name + "'");
    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline SearchConfig search_config(const Options& o, int default_oracle) {
  SearchConfig s;
  s.restarts = o.restarts;
  s.max_iters = o.max_iters;
  s.oracle_samples = o.oracle_samples < 0 ? default_oracle : o.oracle_samples;
  s.seed = o.seed;
  s.validate();
  return s;
}

/// Where the report goes: the --out file, or `fallback` when none is given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw Error("cannot write output file '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw Error("error while writing the report");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline Json envelope(const std::string& command, const std::string& example, const ResolvedExample& ex,
                     const Options& o) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["scope"] = kScope;
  j["command"] = command;
  j["example"] = example;
  j["params"] = params_json(ex.params);
  j["seed"] = o.seed;
  j["samples"] = o.samples;
  return j;
}

inline int cmd_list_examples(const Options& o, std::ostream& out) {
  if (o.json) {
    Json arr = Json::array();
    for (const auto& e : example_registry()) {
      Json params = Json::array();
      for (const auto& p : e.params)
        params.push_back(Json{{"name", p.name}, {"type", p.type}, {"default", p.default_value}, {"description", p.description}});
      arr.push_back(Json{{"name", e.name}, {"description", e.description}, {"statement", e.statement}, {"params", params}});
    }
    out << arr.dump(2) << '\n';
    return 0;
  }
  for (const auto& e : example_registry()) {
    out << e.name << "\n  " << e.description << "\n  checks: " << e.statement << '\n';
    for (const auto& p : e.params)
      out << "  --param " << p.name << "=<" << p.type << ">  (default " << (p.default_value.empty() ? "-" : p.default_value)
          << ")  " << p.description << '\n';
    out << '\n';
  }
  return 0;
}

inline int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  const ResolvedExample ex = build_example(o.example, parse_params(o.params));
  RunOptions run;
  run.samples = o.samples;
  run.seed = o.seed;
  run.tol = {o.tol, o.eq_tol};
  run.certificates = parse_certificates(o.certs, ex.chart);
  run.search = search_config(o, 0);
  run.threads = thread_count();
  if (!(o.tol >= 0.0) || !(o.eq_tol >= 0.0)) throw Error("tolerances must be nonnegative");
  check_applicable(ex.chart, run);
  Sink sink(o.out, out);

  ManifoldReport rep = certify_manifold(ex.chart, run);
  rep.example = o.example;
  rep.params = ex.params;
  if (o.format == "csv") sink.stream() << report_csv(rep);
  else sink.stream() << report_json(rep).dump(2) << '\n';
  sink.finish();

  std::ostream& log = o.out.empty() ? err : out;
  log << o.example << ": " << rep.samples << " points, " << kScope << '\n';
  for (const auto& s : rep.certificates) {
    log << "  " << certificate_name(s.which) << ": " << s.status << ", worst margin " << csv_real(s.worst_margin);
    if (s.worst_point >= 0) log << " at point " << s.worst_point;
    log << '\n';
  }
  log << (rep.pass ? "all requested certificates pass\n" : "violation found\n");
  return rep.pass ? 0 : 1;
}

inline int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedExample ex = build_example(o.example, parse_params(o.params));
  if (ex.chart.n != 4) throw Error("spectrum requires an example with n = 4");
  if (o.samples < 1) throw Error("samples must be >= 1");
  Sink sink(o.out, out);
  const auto pts = low_discrepancy_points(ex.chart, o.samples, o.seed);
  const auto spectra = parallel_map<SpectrumReport>(o.samples, thread_count(), [&](int i) {
    const PointData pd = pointwise_sff(ex.chart, pts[static_cast<std::size_t>(i)]);
    return sd_asd_spectra(bochner_matrix(gauss_curvature(pd.sff, pd.amb)));
  });
  if (o.format == "csv") {
    auto& os = sink.stream();
    os << "id,mu_sd_1,mu_sd_2,mu_sd_3,mu_asd_1,mu_asd_2,mu_asd_3,min\n";
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      const auto& s = spectra[i];
      os << i;
      for (double v : s.mu_sd) os << ',' << csv_real(v);
      for (double v : s.mu_asd) os << ',' << csv_real(v);
      os << ',' << csv_real(s.min_eig) << '\n';
    }
  } else {
    Json j = envelope("spectrum", o.example, ex, o);
    Json points = Json::array();
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      const auto& s = spectra[i];
      points.push_back(Json{{"id", i},
                            {"u", json_vector(pts[i])},
                            {"mu_sd", {json_real(s.mu_sd[0]), json_real(s.mu_sd[1]), json_real(s.mu_sd[2])}},
                            {"mu_asd", {json_real(s.mu_asd[0]), json_real(s.mu_asd[1]), json_real(s.mu_asd[2])}},
                            {"min", json_real(s.min_eig)}});
    }
    j["points"] = points;
    j["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["timestamp"] = utc_timestamp();
    sink.stream() << j.dump(2) << '\n';
  }
  sink.finish();
  return 0;
}

struct OracleRow {
  int id = 0;
  std::string search;
  ExtremumResult result;
};

inline int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedExample ex = build_example(o.example, parse_params(o.params));
  if (o.samples < 1) throw Error("samples must be >= 1");
  const SearchConfig base = search_config(o, 2000);
  Sink sink(o.out, out);
  const auto pts = low_discrepancy_points(ex.chart, o.samples, o.seed);
  const auto per_point = parallel_map<std::vector<OracleRow>>(o.samples, thread_count(), [&](int i) {
    SearchConfig cfg = base;
    cfg.seed = derive_seed(o.seed, 4, static_cast<std::uint64_t>(i));
    const PointData pd = pointwise_sff(ex.chart, pts[static_cast<std::size_t>(i)]);
    const CurvatureTensor R = gauss_curvature(pd.sff, pd.amb);
    std::vector<OracleRow> rows;
    rows.push_back({i, "k_min", k_min(R, cfg.reseeded(1))});
    for (int p = 2; p <= pd.sff.dim() - 2; ++p)
      rows.push_back({i, "sup_theta_" + std::to_string(p), sup_theta(pd.sff, p, cfg.reseeded(10 + static_cast<std::uint64_t>(p)))});
    if (pd.sff.dim() >= 4) rows.push_back({i, "min_isotropic", min_isotropic(R, cfg.reseeded(2))});
    return rows;
  });
  int violations = 0;
  for (const auto& rows : per_point)
    for (const auto& r : rows) violations += r.result.optimizer_dominates() ? 0 : 1;

  if (o.format == "csv") {
    auto& os = sink.stream();
    os << "id,search,optimizer,oracle,gap,dominates\n";
    for (const auto& rows : per_point)
      for (const auto& r : rows)
        os << r.id << ',' << r.search << ',' << csv_real(r.result.value) << ',' << csv_real(r.result.oracle_value) << ','
           << csv_real(r.result.gap) << ',' << (r.result.optimizer_dominates() ? "true" : "false") << '\n';
  } else {
    Json j = envelope("oracle", o.example, ex, o);
    j["search"] = search_json(base);
    Json rows_json = Json::array();
    for (const auto& rows : per_point)
      for (const auto& r : rows)
        rows_json.push_back(Json{{"id", r.id},
                                 {"search", r.search},
                                 {"optimizer", json_real(r.result.value)},
                                 {"oracle", json_real(r.result.oracle_value)},
                                 {"gap", json_real(r.result.gap)},
                                 {"dominates", r.result.optimizer_dominates()}});
    j["rows"] = rows_json;
    j["dominance_violations"] = violations;
    j["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["timestamp"] = utc_timestamp();
    sink.stream() << j.dump(2) << '\n';
  }
  sink.finish();
  std::ostream& log = o.out.empty() ? err : out;
  log << o.example << ": " << violations << " dominance violation(s)\n";
  return violations == 0 ? 0 : 1;
}

inline void add_run_options(CLI::App* sub, Options& o, bool with_certs) {
  sub->add_option("--example", o.example, "example name (see list-examples)")->required();
  sub->add_option("--param", o.params, "example parameter key=value (repeatable)");
  sub->add_option("--samples", o.samples, "number of chart points");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--restarts", o.restarts, "optimizer restarts per search");
  sub->add_option("--max-iters", o.max_iters, "optimizer iterations per restart");
  sub->add_option("--oracle-samples", o.oracle_samples, "random frames for the sampling oracle");
  sub->add_option("--out", o.out, "report file (default: standard output)");
  sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  if (with_certs) {
    sub->add_option("--tol", o.tol, "certificate tolerance");
    sub->add_option("--eq-tol", o.eq_tol, "equality band and equality-structure tolerance");
    sub->add_option("--cert", o.certs,
                    "comma list of star, lawson-simons, isotropic, bochner, equality-case, prop-ell "
                    "(default: all applicable)");
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pinchlab: pointwise curvature-pinching certificates for submanifolds"};
  app.require_subcommand(1, 1);
  Options o;
  auto* list = app.add_subcommand("list-examples", "list example immersions and their parameters");
  list->add_flag("--json", o.json, "machine-readable output");
  auto* check = app.add_subcommand("check", "certify an example at sampled points");
  add_run_options(check, o, true);
  auto* spectrum = app.add_subcommand("spectrum", "Bochner self-dual / anti-self-dual spectra (n = 4)");
  add_run_options(spectrum, o, false);
  auto* oracle = app.add_subcommand("oracle", "compare every optimizer with its sampling oracle");
  add_run_options(oracle, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (list->parsed()) return cmd_list_examples(o, out);
    if (check->parsed()) return cmd_check(o, out, err);
    if (spectrum->parsed()) return cmd_spectrum(o, out);
    if (oracle->parsed()) return cmd_oracle(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pinchlab::cli
