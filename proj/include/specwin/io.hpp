#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "mobius.hpp"
#include "oracle.hpp"
#include "space.hpp"
#include "symbol.hpp"
#include "truncation.hpp"
#include "witness.hpp"

namespace specwin {

using json = nlohmann::ordered_json;

// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- scalars

namespace detail {

[[noreturn]] inline void bad_field(const std::string& path, const std::string& what) {
  throw error(errc::invalid_input, (path.empty() ? "/" : path) + ": " + what);
}

inline double nan_or(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) detail::bad_field(path, "expected a number");
  return j.get<double>();
}

inline long integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) detail::bad_field(path, "expected an integer");
  return j.get<long>();
}

// Prefix errors raised while building a domain object with the config path.
template <class F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const error& e) {
    if (!e.message().empty() && e.message().front() == '/') throw;
    throw error(e.code(), path + ": " + e.message());
  }
}

inline json complex_to_json(cplx z) { return json::array({detail::nullable(z.real()), detail::nullable(z.imag())}); }

// [re, im] or a plain real number.
inline cplx complex_at(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    detail::bad_field(path, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json complex_list_to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (cplx z : v) out.push_back(complex_to_json(z));
  return out;
}

inline std::vector<cplx> complex_list_at(const json& j, const std::string& path) {
  if (!j.is_array()) detail::bad_field(path, "expected a list of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(complex_at(j[k], path + "/" + std::to_string(k)));
  return out;
}

inline cplx complex_from_json(const json& j) { return {detail::nan_or(j.at(0)), detail::nan_or(j.at(1))}; }

// ---------------------------------------------------------------- domain objects

inline json to_json(const MobiusMap& m) {
  const auto c = m.coefficients();
  return json{{"coeffs", complex_list_to_json({c[0], c[1], c[2], c[3]})}};
}

// {"rotation": turns} | {"elliptic": {"fixed": z, "angle": radians | "turns": t}} |
// {"hyperbolic_r": r} | {"parabolic_cayley": s} | {"coeffs": [a, b, c, d]}
inline MobiusMap map_at(const json& j, const std::string& path);
namespace detail {
inline MobiusMap map_at_unwrapped(const json& j, const std::string& path);
}
inline MobiusMap map_at(const json& j, const std::string& path) {
  return with_path(path, [&] { return detail::map_at_unwrapped(j, path); });
}
inline MobiusMap detail::map_at_unwrapped(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) detail::bad_field(path, "expected exactly one map constructor");
  const auto& [key, v] = *j.items().begin();
  const std::string sub = path + "/" + key;
  if (key == "rotation") return MobiusMap::rotation(number_at(v, sub));
  if (key == "hyperbolic_r") return MobiusMap::hyperbolic(number_at(v, sub));
  if (key == "parabolic_cayley") return MobiusMap::parabolic_cayley(number_at(v, sub));
  if (key == "elliptic") {
    if (!v.is_object() || !v.contains("fixed")) detail::bad_field(sub, "expected {\"fixed\": z, \"angle\" | \"turns\": x}");
    const cplx fixed = complex_at(v["fixed"], sub + "/fixed");
    if (v.contains("angle") == v.contains("turns")) detail::bad_field(sub, "give exactly one of angle (radians) or turns");
    const double radians = v.contains("angle") ? number_at(v["angle"], sub + "/angle")
                                               : two_pi * number_at(v["turns"], sub + "/turns");
    return MobiusMap::elliptic(fixed, radians);
  }
  if (key == "coeffs") {
    const std::vector<cplx> c = complex_list_at(v, sub);
    if (c.size() != 4) detail::bad_field(sub, "expected four coefficients [a, b, c, d]");
    return MobiusMap(c[0], c[1], c[2], c[3]);
  }
  detail::bad_field(path, "unknown map constructor \"" + key + "\"");
}

inline json to_json(const SymbolSpec& s) {
  json out{{"num", complex_list_to_json(s.numerator().coefficients())}};
  if (s.denominator().degree() > 0 || s.denominator().coefficients().front() != cplx{1.0})
    out["den"] = complex_list_to_json(s.denominator().coefficients());
  if (!s.blaschke_zeros().empty()) out["blaschke"] = complex_list_to_json(s.blaschke_zeros());
  return out;
}

inline SymbolSpec symbol_at(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("num")) detail::bad_field(path, "expected {\"num\": [...], \"den\"?: [...], \"blaschke\"?: [...]}");
  for (const auto& [key, v] : j.items())
    if (key != "num" && key != "den" && key != "blaschke") detail::bad_field(path + "/" + key, "unknown symbol field");
  std::vector<cplx> den{1.0}, blaschke;
  if (j.contains("den")) den = complex_list_at(j["den"], path + "/den");
  if (j.contains("blaschke")) blaschke = complex_list_at(j["blaschke"], path + "/blaschke");
  return with_path(path, [&] {
    return SymbolSpec(Polynomial(complex_list_at(j["num"], path + "/num")), Polynomial(den), blaschke);
  });
}

inline json to_json(const SpaceSpec& sp) {
  if (sp.kind == SpaceSpec::Kind::hardy) return "hardy";
  return json{{"bergman", sp.alpha}};
}

inline SpaceSpec space_at(const json& j, const std::string& path) {
  if (j == "hardy") return SpaceSpec::hardy();
  if (j.is_object() && j.size() == 1 && j.contains("bergman"))
    return with_path(path, [&] { return SpaceSpec::bergman(number_at(j["bergman"], path + "/bergman")); });
  detail::bad_field(path, "expected \"hardy\" or {\"bergman\": alpha}");
}

inline MapKind map_kind_from_string(const std::string& s) {
  for (MapKind k : {MapKind::identity, MapKind::elliptic_rational, MapKind::elliptic_irrational, MapKind::hyperbolic,
                    MapKind::parabolic})
    if (s == to_string(k)) return k;
  throw error(errc::invalid_input, "unknown map kind " + s);
}

inline json to_json(const Classification& c) {
  json out{{"kind", to_string(c.kind)},
           {"fixed_points", complex_list_to_json(c.fixed_points)},
           {"denjoy_wolff", c.denjoy_wolff ? complex_to_json(*c.denjoy_wolff) : json(nullptr)},
           {"multiplier", complex_to_json(c.multiplier)},
           {"period", c.period}};
  return out;
}

inline Classification classification_from_json(const json& j) {
  Classification c;
  c.kind = map_kind_from_string(j.at("kind").get<std::string>());
  for (const json& z : j.at("fixed_points")) c.fixed_points.push_back(complex_from_json(z));
  if (!j.at("denjoy_wolff").is_null()) c.denjoy_wolff = complex_from_json(j["denjoy_wolff"]);
  c.multiplier = complex_from_json(j.at("multiplier"));
  c.period = j.at("period").get<int>();
  return c;
}

inline SpectrumShape shape_from_string(const std::string& s) {
  for (SpectrumShape k : {SpectrumShape::disk, SpectrumShape::circle, SpectrumShape::annulus, SpectrumShape::sampled_closure})
    if (s == to_string(k)) return k;
  throw error(errc::invalid_input, "unknown spectrum shape " + s);
}

// {shape, parameters, provenance, inputs}
inline json to_json(const SpectrumSet& set) {
  json params = json::object();
  switch (set.shape) {
    case SpectrumShape::disk:
    case SpectrumShape::circle: params["radius"] = set.radius; break;
    case SpectrumShape::annulus:
      params["r_min"] = set.r_min;
      params["r_max"] = set.r_max;
      break;
    case SpectrumShape::sampled_closure:
      params["period"] = set.period;
      params["membership_tol"] = set.membership_tol;
      params["count"] = set.points.size();
      params["points"] = complex_list_to_json(set.points);
      break;
  }
  json inputs = json::object();
  for (const auto& [k, v] : set.provenance.inputs) inputs[k] = detail::nullable(v);
  return json{{"shape", to_string(set.shape)},
              {"parameters", params},
              {"provenance", {{"rule", set.provenance.rule}, {"source", set.provenance.source}}},
              {"inputs", inputs}};
}

inline SpectrumSet spectrum_from_json(const json& j) {
  SpectrumSet set;
  set.shape = shape_from_string(j.at("shape").get<std::string>());
  const json& p = j.at("parameters");
  if (p.contains("radius")) set.radius = p["radius"].get<double>();
  if (p.contains("r_min")) set.r_min = p["r_min"].get<double>();
  if (p.contains("r_max")) set.r_max = p["r_max"].get<double>();
  if (p.contains("period")) set.period = p["period"].get<int>();
  if (p.contains("membership_tol")) set.membership_tol = p["membership_tol"].get<double>();
  if (p.contains("points"))
    for (const json& z : p["points"]) set.points.push_back(complex_from_json(z));
  set.provenance.rule = j.at("provenance").at("rule").get<std::string>();
  set.provenance.source = j.at("provenance").at("source").get<std::string>();
  for (const auto& [k, v] : j.at("inputs").items()) set.provenance.inputs[k] = detail::nan_or(v);
  return set;
}

inline json to_json(const RadiusBound& r) {
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = detail::nullable(v);
  return json{{"value", r.value}, {"kind", to_string(r.kind)}, {"details", details}};
}

inline RadiusBound radius_from_json(const json& j) {
  RadiusBound r;
  r.value = j.at("value").get<double>();
  const std::string kind = j.at("kind").get<std::string>();
  bool known = false;
  for (RadiusKind k : {RadiusKind::elliptic_outer, RadiusKind::parabolic_weight_at_dw, RadiusKind::hyperbolic_max})
    if (kind == to_string(k)) {
      r.kind = k;
      known = true;
    }
  if (!known) throw error(errc::invalid_input, "unknown radius kind " + kind);
  for (const auto& [k, v] : j.at("details").items()) r.details[k] = detail::nan_or(v);
  return r;
}

inline Construction construction_from_string(const std::string& s) {
  for (Construction c : {Construction::elliptic_boundary_zero, Construction::elliptic_inner_zero,
                         Construction::elliptic_level_circle, Construction::rational_rotation_exact,
                         Construction::backward_orbit})
    if (s == to_string(c)) return c;
  throw error(errc::invalid_input, "unknown construction " + s);
}

inline json to_json(const WitnessRun& run) {
  json stages = json::array();
  for (const WitnessStage& st : run.stages) {
    std::vector<cplx> coefs, points;
    for (const auto& t : st.h.terms) {
      coefs.push_back(t.coef);
      points.push_back(t.point);
    }
    stages.push_back(json{{"j", st.index},
                          {"n_terms", st.n_terms},
                          {"base_point", complex_to_json(st.base_point)},
                          {"eigenvalue", complex_to_json(st.eigenvalue)},
                          {"residual", detail::nullable(st.residual)},
                          {"norm", detail::nullable(st.norm)},
                          {"floor", detail::nullable(st.floor)},
                          {"bound", detail::nullable(st.bound)},
                          {"q", detail::nullable(st.q)},
                          {"radius", detail::nullable(st.radius)},
                          {"selected_root", st.selected_root},
                          {"basis", st.h.basis == KernelBasis::raw ? "raw" : "normalized"},
                          {"coefficients", complex_list_to_json(coefs)},
                          {"points", complex_list_to_json(points)}});
  }
  return json{{"construction", to_string(run.construction)},
              {"lambda", complex_to_json(run.lambda)},
              {"space", to_json(run.space)},
              {"conjugated", run.conjugated},
              {"schedule_exhausted", run.schedule_exhausted},
              {"note", run.note},
              {"stages", stages}};
}

inline WitnessRun witness_from_json(const json& j) {
  WitnessRun run;
  run.construction = construction_from_string(j.at("construction").get<std::string>());
  run.lambda = complex_from_json(j.at("lambda"));
  run.space = space_at(j.at("space"), "/space");
  run.conjugated = j.at("conjugated").get<bool>();
  run.schedule_exhausted = j.at("schedule_exhausted").get<bool>();
  run.note = j.at("note").get<std::string>();
  for (const json& s : j.at("stages")) {
    WitnessStage st;
    st.index = s.at("j").get<int>();
    st.n_terms = s.at("n_terms").get<int>();
    st.base_point = complex_from_json(s.at("base_point"));
    st.eigenvalue = complex_from_json(s.at("eigenvalue"));
    st.residual = detail::nan_or(s.at("residual"));
    st.norm = detail::nan_or(s.at("norm"));
    st.floor = detail::nan_or(s.at("floor"));
    st.bound = detail::nan_or(s.at("bound"));
    st.q = detail::nan_or(s.at("q"));
    st.radius = detail::nan_or(s.at("radius"));
    st.selected_root = s.at("selected_root").get<int>();
    st.h = {run.space, s.at("basis") == "raw" ? KernelBasis::raw : KernelBasis::normalized, {}};
    const json& c = s.at("coefficients");
    const json& p = s.at("points");
    for (std::size_t k = 0; k < c.size(); ++k) st.h.add(complex_from_json(c[k]), complex_from_json(p.at(k)));
    run.stages.push_back(std::move(st));
  }
  return run;
}

inline json to_json(const TruncationMatrix& t) {
  json rows = json::array();
  for (int m = 0; m < t.size(); ++m) {
    json row = json::array();
    for (int n = 0; n < t.size(); ++n) row.push_back(complex_to_json(t.A(m, n)));
    rows.push_back(std::move(row));
  }
  return json{{"N", t.size()},
              {"rho", t.rho},
              {"samples", t.samples},
              {"observed_change", t.observed_change},
              {"symbol", to_json(t.symbol)},
              {"map", to_json(t.map)},
              {"space", to_json(t.space)},
              {"matrix", rows}};
}

inline TruncationMatrix truncation_from_json(const json& j) {
  TruncationMatrix t;
  const int n = j.at("N").get<int>();
  t.rho = j.at("rho").get<double>();
  t.samples = j.at("samples").get<std::size_t>();
  t.observed_change = j.at("observed_change").get<double>();
  t.symbol = symbol_at(j.at("symbol"), "/symbol");
  t.map = map_at(j.at("map"), "/map");
  t.space = space_at(j.at("space"), "/space");
  t.A.resize(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) t.A(m, k) = complex_from_json(j.at("matrix").at(m).at(k));
  return t;
}

// ---------------------------------------------------------------- CSV

inline std::string points_csv(const std::vector<cplx>& points) {
  std::string out = "re,im\n";
  for (cplx p : points) out += format_double(p.real()) + "," + format_double(p.imag()) + "\n";
  return out;
}

inline std::string field_csv(const PseudospectrumField& f) {
  std::string out = "re,im,sigma_min\n";
  for (int iy = 0; iy < f.grid.ny; ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix) {
      const cplx p = f.grid.point(ix, iy);
      out += format_double(p.real()) + "," + format_double(p.imag()) + "," + format_double(f.at(ix, iy)) + "\n";
    }
  return out;
}

inline std::string ergodic_csv(const std::vector<std::pair<long, double>>& series) {
  std::string out = "n,average\n";
  for (const auto& [n, v] : series) out += std::to_string(n) + "," + format_double(v) + "\n";
  return out;
}

inline std::string residual_csv(const WitnessRun& run) {
  std::string out = "j,n_terms,residual,floor,norm,bound\n";
  for (const WitnessStage& st : run.stages)
    out += std::to_string(st.index) + "," + std::to_string(st.n_terms) + "," + format_double(st.residual) + "," +
           format_double(st.floor) + "," + format_double(st.norm) + "," + format_double(st.bound) + "\n";
  return out;
}

// ---------------------------------------------------------------- run configuration

struct WitnessConfig {
  std::string construction = "auto";
  std::optional<cplx> lambda;     // default: lambda_fraction times the attainable radius
  double lambda_fraction = 0.9;
  std::vector<cplx> base_points;  // backward orbit; default from ray_base_points
  int ray_count = 12;
  RaySpacing ray_spacing = RaySpacing::geometric;
  std::optional<int> n_terms;    // backward orbit; default: as many as 50 digits allow, at most 160
  cplx z0 = 0.5;
  int root_index = 0;
  double r0 = 0.5;
  std::optional<double> t0;
  WitnessSchedule schedule;
};

struct ErgodicConfig {
  cplx z = 1.0;
  long n = 100000;
  long every = 1000;
  long sup_n = 2000;
  int sup_samples = 4096;
};

// Test hook: perturb one truncation entry before the verification battery runs.
struct FaultInjection {
  bool enabled = false;
  int row = 0, col = 1;
  cplx amount = 0.1;
};

struct RunConfig {
  std::optional<MobiusMap> map;
  std::optional<SymbolSpec> symbol;
  SpaceSpec space;
  int N = 256;
  std::optional<GridSpec> grid;
  std::uint64_t seed = 1;
  OracleOptions oracle;
  WitnessConfig witness;
  ErgodicConfig ergodic;
  FaultInjection fault;
  double contour_level = 1e-2;

  const MobiusMap& require_map() const {
    if (!map) throw error(errc::invalid_input, "/map: missing");
    return *map;
  }
  const SymbolSpec& require_symbol() const {
    if (!symbol) throw error(errc::invalid_input, "/symbol: missing");
    return *symbol;
  }
};

namespace detail {

inline void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad_field(path, "expected an object");
  for (const auto& [key, v] : j.items()) {
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) bad_field(path + "/" + key, "unknown field");
  }
}

inline GridSpec grid_at(const json& j, const std::string& path) {
  only_keys(j, path, {"re", "im", "nx", "ny"});
  GridSpec g;
  auto range = [&](const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const json& r = j[key];
    if (!r.is_array() || r.size() != 2) bad_field(path + "/" + key, "expected [min, max]");
    lo = number_at(r[0], path + "/" + key + "/0");
    hi = number_at(r[1], path + "/" + key + "/1");
  };
  range("re", g.re_min, g.re_max);
  range("im", g.im_min, g.im_max);
  if (j.contains("nx")) g.nx = static_cast<int>(integer_at(j["nx"], path + "/nx"));
  if (j.contains("ny")) g.ny = static_cast<int>(integer_at(j["ny"], path + "/ny"));
  try {
    g.validate();
  } catch (const error& e) {
    bad_field(path, e.message());
  }
  return g;
}

inline void schedule_at(const json& j, const std::string& path, WitnessSchedule& s) {
  only_keys(j, path, {"stages", "candidates", "max_orbit_steps", "birkhoff_fraction", "angle_scale", "terms_step",
                      "max_return_time", "start_angle", "max_radius_halvings", "enforce_guarantee", "merge_tol"});
  auto i = [&](const char* k, auto& dst) {
    if (j.contains(k)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(integer_at(j[k], path + "/" + k));
  };
  auto d = [&](const char* k, double& dst) {
    if (j.contains(k)) dst = number_at(j[k], path + "/" + k);
  };
  i("stages", s.stages);
  i("candidates", s.candidates);
  i("max_orbit_steps", s.max_orbit_steps);
  d("birkhoff_fraction", s.birkhoff_fraction);
  d("angle_scale", s.angle_scale);
  i("terms_step", s.terms_step);
  i("max_return_time", s.max_return_time);
  d("start_angle", s.start_angle);
  i("max_radius_halvings", s.max_radius_halvings);
  d("merge_tol", s.merge_tol);
  if (j.contains("enforce_guarantee")) {
    if (!j["enforce_guarantee"].is_boolean()) bad_field(path + "/enforce_guarantee", "expected true or false");
    s.enforce_guarantee = j["enforce_guarantee"].get<bool>();
  }
  if (s.stages < 1 || s.candidates < 1 || s.max_orbit_steps < 1 || s.terms_step < 1)
    bad_field(path, "stage counts and budgets must be positive");
}

inline WitnessConfig witness_at(const json& j, const std::string& path) {
  only_keys(j, path, {"construction", "lambda", "lambda_fraction", "base_points", "ray_count", "ray_spacing", "n_terms",
                      "z0", "root_index", "r0", "t0", "schedule"});
  WitnessConfig w;
  if (j.contains("construction")) {
    w.construction = j["construction"].is_string() ? j["construction"].get<std::string>() : "";
    static const char* known[] = {"auto", "backward_orbit", "rational_rotation", "elliptic_boundary", "level_circle",
                                  "inner_zero"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return w.construction == k; }) ==
        std::end(known))
      bad_field(path + "/construction", "unknown construction");
  }
  if (j.contains("lambda")) w.lambda = complex_at(j["lambda"], path + "/lambda");
  if (j.contains("lambda_fraction")) w.lambda_fraction = number_at(j["lambda_fraction"], path + "/lambda_fraction");
  if (j.contains("base_points")) w.base_points = complex_list_at(j["base_points"], path + "/base_points");
  if (j.contains("ray_count")) w.ray_count = static_cast<int>(integer_at(j["ray_count"], path + "/ray_count"));
  if (j.contains("ray_spacing")) {
    if (j["ray_spacing"] == "harmonic")
      w.ray_spacing = RaySpacing::harmonic;
    else if (j["ray_spacing"] == "geometric")
      w.ray_spacing = RaySpacing::geometric;
    else
      bad_field(path + "/ray_spacing", "expected \"harmonic\" or \"geometric\"");
  }
  if (j.contains("n_terms")) w.n_terms = static_cast<int>(integer_at(j["n_terms"], path + "/n_terms"));
  if (w.n_terms && *w.n_terms < 1) bad_field(path + "/n_terms", "must be positive");
  if (j.contains("z0")) w.z0 = complex_at(j["z0"], path + "/z0");
  if (j.contains("root_index")) w.root_index = static_cast<int>(integer_at(j["root_index"], path + "/root_index"));
  if (j.contains("r0")) w.r0 = number_at(j["r0"], path + "/r0");
  if (j.contains("t0")) w.t0 = number_at(j["t0"], path + "/t0");
  if (j.contains("schedule")) schedule_at(j["schedule"], path + "/schedule", w.schedule);
  if (w.ray_count < 1) bad_field(path + "/ray_count", "must be positive");
  return w;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  detail::only_keys(j, "", {"description", "map", "symbol", "space", "N", "grid", "seed", "classify", "zero_tol",
                            "sampling", "witness", "ergodic", "fault_injection", "contour_level"});
  RunConfig cfg;
  if (j.contains("map")) cfg.map = map_at(j["map"], "/map");
  if (j.contains("symbol")) cfg.symbol = symbol_at(j["symbol"], "/symbol");
  if (j.contains("space")) cfg.space = space_at(j["space"], "/space");
  if (j.contains("N")) {
    cfg.N = static_cast<int>(integer_at(j["N"], "/N"));
    if (cfg.N < 1 || cfg.N > 4096) detail::bad_field("/N", "expected 1 <= N <= 4096");
  }
  if (j.contains("grid")) cfg.grid = detail::grid_at(j["grid"], "/grid");
  if (j.contains("seed")) {
    const long s = integer_at(j["seed"], "/seed");
    if (s < 0) detail::bad_field("/seed", "expected a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("classify")) {
    const json& c = j["classify"];
    detail::only_keys(c, "/classify", {"max_period", "rational_tol", "boundary_tol", "parabolic_tol"});
    ClassifyOptions& o = cfg.oracle.classify;
    if (c.contains("max_period")) o.max_period = static_cast<int>(integer_at(c["max_period"], "/classify/max_period"));
    if (c.contains("rational_tol")) o.rational_tol = number_at(c["rational_tol"], "/classify/rational_tol");
    if (c.contains("boundary_tol")) o.boundary_tol = number_at(c["boundary_tol"], "/classify/boundary_tol");
    if (c.contains("parabolic_tol")) o.parabolic_tol = number_at(c["parabolic_tol"], "/classify/parabolic_tol");
  }
  if (j.contains("zero_tol")) cfg.oracle.zero_tol = number_at(j["zero_tol"], "/zero_tol");
  if (j.contains("sampling")) {
    const json& s = j["sampling"];
    detail::only_keys(s, "/sampling", {"radii", "angles", "boundary_gap", "membership_tol"});
    SamplingSpec& o = cfg.oracle.sampling;
    if (s.contains("radii")) o.radii = static_cast<int>(integer_at(s["radii"], "/sampling/radii"));
    if (s.contains("angles")) o.angles = static_cast<int>(integer_at(s["angles"], "/sampling/angles"));
    if (s.contains("boundary_gap")) o.boundary_gap = number_at(s["boundary_gap"], "/sampling/boundary_gap");
    if (s.contains("membership_tol")) o.membership_tol = number_at(s["membership_tol"], "/sampling/membership_tol");
    if (o.radii < 2 || o.angles < 1) detail::bad_field("/sampling", "need at least 2 radii and 1 angle");
  }
  if (j.contains("witness")) cfg.witness = detail::witness_at(j["witness"], "/witness");
  if (j.contains("ergodic")) {
    const json& e = j["ergodic"];
    detail::only_keys(e, "/ergodic", {"z", "n", "every", "sup_n", "sup_samples"});
    if (e.contains("z")) cfg.ergodic.z = complex_at(e["z"], "/ergodic/z");
    if (e.contains("n")) cfg.ergodic.n = integer_at(e["n"], "/ergodic/n");
    if (e.contains("every")) cfg.ergodic.every = integer_at(e["every"], "/ergodic/every");
    if (e.contains("sup_n")) cfg.ergodic.sup_n = integer_at(e["sup_n"], "/ergodic/sup_n");
    if (e.contains("sup_samples")) cfg.ergodic.sup_samples = static_cast<int>(integer_at(e["sup_samples"], "/ergodic/sup_samples"));
    if (cfg.ergodic.n < 1 || cfg.ergodic.every < 1 || cfg.ergodic.sup_n < 1 || cfg.ergodic.sup_samples < 1)
      detail::bad_field("/ergodic", "counts must be positive");
  }
  if (j.contains("fault_injection")) {
    const json& f = j["fault_injection"];
    detail::only_keys(f, "/fault_injection", {"corrupt_entry", "amount"});
    cfg.fault.enabled = true;
    if (f.contains("corrupt_entry")) {
      const json& e = f["corrupt_entry"];
      if (!e.is_array() || e.size() != 2) detail::bad_field("/fault_injection/corrupt_entry", "expected [row, col]");
      cfg.fault.row = static_cast<int>(integer_at(e[0], "/fault_injection/corrupt_entry/0"));
      cfg.fault.col = static_cast<int>(integer_at(e[1], "/fault_injection/corrupt_entry/1"));
    }
    if (f.contains("amount")) cfg.fault.amount = complex_at(f["amount"], "/fault_injection/amount");
  }
  if (j.contains("contour_level")) cfg.contour_level = number_at(j["contour_level"], "/contour_level");
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::invalid_input, std::string("config: ") + e.what());
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::invalid_input, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const error& e) {
    throw error(e.code(), path + ": " + e.message());
  }
}

}  // namespace specwin
