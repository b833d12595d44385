#pragma once

// JSON and CSV serialization of certification runs.
//
// JSON field order is fixed. Every field except "timestamp" and
// "runtime_seconds" is a deterministic function of the inputs and seed.
// CSV numbers use 17 significant digits and '.' regardless of locale.

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pinchlab/harness.hpp"

namespace pinchlab {

inline constexpr std::string_view kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// NaN and infinities become null.
inline Json json_real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json json_vector(const VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_real(v(i)));
  return a;
}

inline Json json_matrix(const MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(json_vector(m.row(i).transpose()));
  return rows;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// "%.17g" without locale.
inline std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

inline std::string csv_optional(const std::optional<double>& v) { return v ? csv_real(*v) : std::string(); }

inline Json params_json(const std::vector<std::pair<std::string, std::string>>& params) {
  Json p = Json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return p;
}

inline Json search_json(const SearchConfig& s) {
  return Json{{"restarts", s.restarts},
              {"max_iters", s.max_iters},
              {"grad_tol", s.grad_tol},
              {"oracle_samples", s.oracle_samples}};
}

inline Json equality_json(const EqualityCaseReport& e) {
  return Json{{"residual", json_real(e.max_residual)},
              {"sff_conditions", json_real(e.sff_residual)},
              {"mixed_curvature", json_real(e.mixed_curvature)},
              {"lemma_components", json_real(e.lemma_components)},
              {"eigenvalue_formulas", json_real(e.eigenvalue_formulas)},
              {"kaehler", json_real(e.kaehler)},
              {"frame", json_matrix(e.frame)}};
}

inline Json point_json(const PointVerdict& v) {
  Json j;
  j["id"] = v.id;
  j["u"] = json_vector(v.u);
  j["K_min"] = json_real(v.kmin);
  j["H"] = json_real(v.H);
  j["c"] = json_real(v.c);
  j["b"] = json_real(v.bound);
  j["star_margin"] = json_real(v.star_margin);
  if (!v.theta_margins.empty()) {
    Json t = Json::object();
    for (const auto& [p, m] : v.theta_margins) t[std::to_string(p)] = json_real(m);
    j["theta_margins"] = t;
  }
  if (v.iso_min) j["iso_min"] = json_real(*v.iso_min);
  if (v.bochner) {
    const auto& s = v.bochner->spectra;
    j["bochner"] = Json{{"sd", {json_real(s.mu_sd[0]), json_real(s.mu_sd[1]), json_real(s.mu_sd[2])}},
                        {"asd", {json_real(s.mu_asd[0]), json_real(s.mu_asd[1]), json_real(s.mu_asd[2])}},
                        {"min", json_real(s.min_eig)},
                        {"consistent_with_isotropic", v.bochner->consistent}};
  }
  if (v.equality) j["equality_case"] = equality_json(*v.equality);
  Json pass = Json::object(), status = Json::object();
  for (Certificate c : kAllCertificates) {
    auto it = v.status.find(c);
    if (it == v.status.end()) continue;
    pass[std::string(certificate_name(c))] = it->second != "fail";
    status[std::string(certificate_name(c))] = it->second;
  }
  j["pass"] = pass;
  j["status"] = status;
  return j;
}

inline Json prop_ell_json(const PropEllReport& r) {
  return Json{{"min_lambda1", json_real(r.extremes.min_lambda1)},
              {"argmin", json_vector(r.extremes.argmin)},
              {"max_lambdan", json_real(r.extremes.max_lambdan)},
              {"argmax", json_vector(r.extremes.argmax)},
              {"lhs", json_real(r.lhs)},
              {"rhs", json_real(r.rhs)},
              {"lambda_margin", json_real(r.lambda_margin)},
              {"hypothesis", r.hypothesis},
              {"strict", r.strict},
              {"worst_star_margin", json_real(r.worst_star_margin)},
              {"worst_point", r.worst_point >= 0 ? Json(r.worst_point) : Json(nullptr)},
              {"status", r.status}};
}

inline Json report_json(const ManifoldReport& rep) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["scope"] = kScope;
  j["command"] = "check";
  j["example"] = rep.example;
  j["params"] = params_json(rep.params);
  j["seed"] = rep.seed;
  j["samples"] = rep.samples;
  j["tolerances"] = Json{{"certificate", rep.tol.certificate}, {"equality", rep.tol.equality}};
  j["search"] = search_json(rep.search);
  Json certs = Json::array();
  for (const auto& s : rep.certificates) {
    certs.push_back(Json{{"name", certificate_name(s.which)},
                         {"status", s.status},
                         {"worst_margin", json_real(s.worst_margin)},
                         {"worst_point", s.worst_point >= 0 ? Json(s.worst_point) : Json(nullptr)},
                         {"pass", s.pass}});
  }
  j["certificates"] = certs;
  j["overall_pass"] = rep.pass;
  if (rep.prop_ell) j["prop_ell"] = prop_ell_json(*rep.prop_ell);
  Json points = Json::array();
  for (const auto& v : rep.points) points.push_back(point_json(v));
  j["points"] = points;
  j["runtime_seconds"] = rep.runtime_seconds;
  j["timestamp"] = utc_timestamp();
  return j;
}

/// One row per point.
inline std::string report_csv(const ManifoldReport& rep) {
  std::ostringstream os;
  const auto n = rep.points.empty() ? 0 : rep.points.front().u.size();
  std::vector<int> ps;
  if (!rep.points.empty())
    for (const auto& [p, m] : rep.points.front().theta_margins) ps.push_back(p);
  os << "id";
  for (Eigen::Index i = 0; i < n; ++i) os << ",u_" << i + 1;
  os << ",K_min,H,c,b,star_margin";
  for (int p : ps) os << ",theta_margin_" << p;
  os << ",iso_min,bochner_min,equality_residual\n";
  for (const auto& v : rep.points) {
    os << v.id;
    for (Eigen::Index i = 0; i < v.u.size(); ++i) os << ',' << csv_real(v.u(i));
    os << ',' << csv_real(v.kmin) << ',' << csv_real(v.H) << ',' << csv_real(v.c) << ',' << csv_real(v.bound) << ','
       << csv_real(v.star_margin);
    for (int p : ps) os << ',' << csv_real(v.theta_margins.at(p));
    os << ',' << csv_optional(v.iso_min) << ','
       << csv_optional(v.bochner ? std::optional<double>(v.bochner->spectra.min_eig) : std::nullopt) << ','
       << csv_optional(v.equality ? std::optional<double>(v.equality->max_residual) : std::nullopt) << '\n';
  }
  return os.str();
}

}  // namespace pinchlab
