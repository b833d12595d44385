#pragma once

// Named example immersions with typed parameters.

#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pinchlab/error.hpp"
#include "pinchlab/harness.hpp"
#include "pinchlab/immersion.hpp"

namespace pinchlab {

struct ParamSpec {
  std::string name;
  std::string type;  // int | real | real-list | bool | choice
  std::string default_value;
  std::string description;
};

struct ExampleInfo {
  std::string name;
  std::string description;
  std::string statement;  // the property the example exercises
  std::vector<ParamSpec> params;
};

using ParamMap = std::map<std::string, std::string>;

/// A chart together with its fully resolved parameters.
struct ResolvedExample {
  ImmersionChart chart;
  std::vector<std::pair<std::string, std::string>> params;
};

// ---------------------------------------------------------------------------
// Locale-independent number handling.

inline double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error("invalid real value '" + std::string(s) + "' for " + std::string(what));
  }
  return v;
}

inline long long parse_int(std::string_view s, std::string_view what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("invalid integer value '" + std::string(s) + "' for " + std::string(what));
  }
  return v;
}

inline bool parse_bool(std::string_view s, std::string_view what) {
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw Error("invalid boolean value '" + std::string(s) + "' for " + std::string(what));
}

/// Shortest representation that round-trips.
inline std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline std::vector<double> parse_real_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_real(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

inline const std::vector<ExampleInfo>& example_registry() {
  static const std::vector<ExampleInfo> registry{
      {"sphere",
       "round sphere S^n(r) in R^{n+1}; with ambient=sphere, a great subsphere of S^{n+1}(r)",
       "umbilic with K = 1/r^2; in R^{n+1} the pinching condition holds with margin 1 - b(n,1,0) at r = 1, "
       "zero at n = 8 and violated for n >= 9",
       {{"n", "int", "4", "intrinsic dimension (>= 2)"},
        {"r", "real", "1", "radius"},
        {"ambient", "choice", "euclidean", "euclidean | sphere"}}},
      {"ellipsoid",
       "ellipsoid x_1^2/a_1^2 + ... + x_{n+1}^2/a_{n+1}^2 = 1 in R^{n+1}",
       "principal-curvature condition (max lambda_n)^2 <= 2c + 3(min lambda_1)^2 (n = 4) or "
       "(4/n)(c + 2(min lambda_1)^2) (n >= 5) implies the pinching condition; axes (1,...,1,eps(n)) sit on the "
       "threshold",
       {{"n", "int", "4", "intrinsic dimension (4..8 for the default ratio)"},
        {"ratio", "real", "eps(n)", "a_{n+1}/a_1 with a_1 = ... = a_n = 1"},
        {"axes", "real-list", "", "explicit comma-separated axes a_1..a_{n+1}; overrides n and ratio"}}},
      {"product-spheres",
       "S^2(r1) x S^2(r2) in R^6, optionally regarded inside S^5(sqrt(r1^2 + r2^2))",
       "negative control: the Clifford-type product with r1 = r2 = 1/sqrt(2) in S^5(1) is minimal with flat mixed "
       "planes, K_min = 0 < b(4,0,1) = 1/3",
       {{"r1", "real", "0.7071067811865476", "radius of the first factor"},
        {"r2", "real", "0.7071067811865476", "radius of the second factor"},
        {"on_sphere", "bool", "true", "regard the image inside the sphere through it"}}},
      {"veronese",
       "Veronese embedding of RP^n into the unit sphere of trace-free symmetric matrices",
       "minimal with constant sectional curvature n/(2(n+1)); for n = 4 the pinching margin is 0.4 - 1/3 = 1/15",
       {{"n", "int", "4", "intrinsic dimension"}}},
      {"cp2-s7",
       "standard embedding of CP^2 into S^7(sqrt(2/3)) in trace-free Hermitian 3x3 matrices",
       "equality case of the four-dimensional pinching condition: K_min = (c + H^2)/3, vanishing minimal isotropic "
       "curvature, Bochner spectra {0,12k,12k} / {8k,8k,8k} and the adapted-frame structure of the second "
       "fundamental form",
       {{"ambient", "choice", "sphere", "sphere (c = 3/2) | euclidean (composed into R^8, c = 0)"}}},
  };
  return registry;
}

inline const ExampleInfo& example_info(std::string_view name) {
  for (const auto& e : example_registry())
    if (e.name == name) return e;
  throw Error("unknown example '" + std::string(name) + "'");
}

namespace detail {

class ParamReader {
 public:
  ParamReader(const ExampleInfo& info, const ParamMap& given) : info_(info), given_(given) {
    for (const auto& [key, value] : given) {
      bool known = false;
      for (const auto& p : info.params) known = known || p.name == key;
      if (!known) throw Error("example '" + info.name + "' has no parameter '" + key + "'");
    }
  }

  [[nodiscard]] bool has(const std::string& key) const { return given_.count(key) != 0; }

  [[nodiscard]] std::string raw(const std::string& key) const {
    if (auto it = given_.find(key); it != given_.end()) return it->second;
    for (const auto& p : info_.params)
      if (p.name == key) return p.default_value;
    throw Error("internal: unknown parameter " + key);
  }

  [[nodiscard]] std::string what(const std::string& key) const { return "parameter " + key; }

 private:
  const ExampleInfo& info_;
  const ParamMap& given_;
};

}  // namespace detail

/// Builds the chart for a registry entry. Throws Error on unknown examples,
/// unknown parameters or invalid values.
inline ResolvedExample build_example(std::string_view name, const ParamMap& given) {
  const ExampleInfo& info = example_info(name);
  const detail::ParamReader in(info, given);
  ResolvedExample out;
  if (info.name == "sphere") {
    const long long n = parse_int(in.raw("n"), in.what("n"));
    const double r = parse_real(in.raw("r"), in.what("r"));
    const std::string ambient = in.raw("ambient");
    if (n < 2 || n > 16) throw Error("sphere: n must be in 2..16");
    if (ambient != "euclidean" && ambient != "sphere") throw Error("sphere: ambient must be euclidean or sphere");
    out.chart = gen_sphere(static_cast<int>(n), r);
    if (ambient == "sphere") out.chart = with_sphere_flag(padded(out.chart, 1), r);
    out.params = {{"n", std::to_string(n)}, {"r", format_real(r)}, {"ambient", ambient}};
  } else if (info.name == "ellipsoid") {
    std::vector<double> axes;
    if (in.has("axes")) {
      if (in.has("n") || in.has("ratio")) throw Error("ellipsoid: give either axes or n/ratio");
      axes = parse_real_list(in.raw("axes"), in.what("axes"));
    } else {
      const long long n = parse_int(in.raw("n"), in.what("n"));
      if (n < 2 || n > 15) throw Error("ellipsoid: n must be in 2..15");
      double ratio = 1.0;
      if (in.has("ratio")) ratio = parse_real(in.raw("ratio"), in.what("ratio"));
      else if (n >= 4 && n <= 8) ratio = epsilon_bound(static_cast<int>(n));
      else throw Error("ellipsoid: ratio has no default outside n = 4..8");
      axes.assign(static_cast<std::size_t>(n), 1.0);
      axes.push_back(ratio);
    }
    out.chart = gen_ellipsoid(axes);
    std::string list;
    for (double a : axes) list += (list.empty() ? "" : ",") + format_real(a);
    out.params = {{"n", std::to_string(axes.size() - 1)}, {"axes", list}};
  } else if (info.name == "product-spheres") {
    const double r1 = parse_real(in.raw("r1"), in.what("r1"));
    const double r2 = parse_real(in.raw("r2"), in.what("r2"));
    const bool on_sphere = parse_bool(in.raw("on_sphere"), in.what("on_sphere"));
    out.chart = gen_product_spheres(r1, r2, on_sphere);
    out.params = {{"r1", format_real(r1)}, {"r2", format_real(r2)}, {"on_sphere", on_sphere ? "true" : "false"}};
  } else if (info.name == "veronese") {
    const long long n = parse_int(in.raw("n"), in.what("n"));
    if (n < 2 || n > 8) throw Error("veronese: n must be in 2..8");
    out.chart = gen_veronese(static_cast<int>(n));
    out.params = {{"n", std::to_string(n)}};
  } else if (info.name == "cp2-s7") {
    const std::string ambient = in.raw("ambient");
    if (ambient != "euclidean" && ambient != "sphere") throw Error("cp2-s7: ambient must be euclidean or sphere");
    out.chart = gen_cp2();
    if (ambient == "euclidean") out.chart = composed_into_euclidean(out.chart);
    out.params = {{"ambient", ambient}};
  }
  return out;
}

/// Certificates that apply to a chart: everything it supports.
inline std::vector<Certificate> default_certificates(const ImmersionChart& chart) {
  std::vector<Certificate> out;
  if (chart.n >= 4) out = {Certificate::Star, Certificate::LawsonSimons};
  if (chart.n == 4) {
    out.push_back(Certificate::Isotropic);
    out.push_back(Certificate::Bochner);
    out.push_back(Certificate::EqualityCase);
  }
  if (chart.name == "ellipsoid" && chart.n >= 4) out.push_back(Certificate::PropEll);
  return out;
}

}  // namespace pinchlab
