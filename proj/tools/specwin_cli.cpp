// specwin: spectra of weighted composition operators from a JSON config.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specwin/specwin.hpp"

namespace fs = std::filesystem;
using namespace specwin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitVerification = 4;
constexpr int kExitNumerical = 5;

struct Flags {
  std::string config;
  std::string out;
  std::optional<int> n;
  std::string grid;  // WxH
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

// What a command produces: the primary text goes to stdout, everything is written under --out.
struct Output {
  std::string primary;
  std::string primary_name;
  std::vector<std::pair<std::string, std::string>> files;
  int exit_code = kExitOk;
};

// Indented unless the report carries large arrays.
std::string dump(const json& j) {
  std::string compact = j.dump();
  return (compact.size() < 20000 ? j.dump(2) : std::move(compact)) + "\n";
}

RunConfig load(const Flags& f) {
  if (f.config.empty()) throw error(errc::invalid_input, "--config is required");
  RunConfig cfg = load_config(f.config);
  if (f.n) {
    if (*f.n < 1 || *f.n > 4096) throw error(errc::invalid_input, "--N: expected 1 <= N <= 4096");
    cfg.N = *f.n;
  }
  if (f.seed) cfg.seed = *f.seed;
  if (!f.grid.empty()) {
    const auto x = f.grid.find('x');
    GridSpec g = cfg.grid.value_or(GridSpec{});
    try {
      if (x == std::string::npos) throw std::invalid_argument("");
      std::size_t used = 0;
      g.nx = std::stoi(f.grid.substr(0, x), &used);
      if (used != x) throw std::invalid_argument("");
      g.ny = std::stoi(f.grid.substr(x + 1), &used);
      if (used != f.grid.size() - x - 1) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw error(errc::invalid_input, "--grid: expected WxH, e.g. 201x201");
    }
    g.validate();
    if (!cfg.grid) {
      // Window chosen later from the prediction; remember only the resolution.
      cfg.grid = g;
      cfg.grid->re_min = cfg.grid->re_max = std::numeric_limits<double>::quiet_NaN();
    } else {
      cfg.grid = g;
    }
  }
  return cfg;
}

// The grid window: configured, or around the predicted set (falls back to the unit disk).
GridSpec window(const RunConfig& cfg, const std::optional<SpectrumSet>& set) {
  const double radius = set ? std::max(set->outer_radius(), 0.2) : 1.0;
  GridSpec g = grid_around(radius, 201, 201);
  if (cfg.grid) {
    if (std::isnan(cfg.grid->re_min)) {
      g.nx = cfg.grid->nx;
      g.ny = cfg.grid->ny;
    } else {
      g = *cfg.grid;
    }
  }
  return g;
}

std::optional<SpectrumSet> try_predict(const RunConfig& cfg) {
  try {
    return predict_spectrum(cfg.require_symbol(), cfg.require_map(), cfg.space, cfg.oracle);
  } catch (const error& e) {
    if (e.category() == error_category::input) throw;
    return std::nullopt;
  }
}

Output cmd_classify(const RunConfig& cfg, const Flags&) {
  const MobiusMap& m = cfg.require_map();
  json report{{"map", to_json(m)}, {"classification", to_json(classify(m, cfg.oracle.classify))}};
  const Classification cl = classify(m, cfg.oracle.classify);
  if (cl.kind == MapKind::hyperbolic || cl.kind == MapKind::parabolic) {
    const HalfPlaneModel h = half_plane_model(m);
    report["half_plane"] = {{"kind", h.kind == CanonicalKind::dilation ? "dilation" : "translation"},
                            {"parameter", h.parameter},
                            {"max_error", h.max_error}};
  }
  return {dump(report), "classify.json", {}};
}

Output cmd_predict(const RunConfig& cfg, const Flags& f) {
  const SpectrumSet set = predict_spectrum(cfg.require_symbol(), cfg.require_map(), cfg.space, cfg.oracle);
  Output out{dump(to_json(set)), "predict.json", {}};
  if (set.shape == SpectrumShape::sampled_closure) out.files.emplace_back("predict_points.csv", points_csv(set.points));
  if (f.svg) out.files.emplace_back("predict.svg", render_spectrum(set));
  return out;
}

Output cmd_radius(const RunConfig& cfg, const Flags&) {
  return {dump(to_json(spectral_radius_bound(cfg.require_symbol(), cfg.require_map(), cfg.space, cfg.oracle))),
          "radius.json",
          {}};
}

Output cmd_truncate(const RunConfig& cfg, const Flags&) {
  const TruncationMatrix t = build_truncation(cfg.require_symbol(), cfg.require_map(), cfg.space, cfg.N);
  const std::vector<cplx> eig = eigenvalues(t);
  const json summary{{"N", t.size()},
                     {"rho", t.rho},
                     {"samples", t.samples},
                     {"observed_change", t.observed_change},
                     {"space", to_json(t.space)},
                     {"eigenvalues", complex_list_to_json(eig)}};
  return {dump(summary), "truncate_summary.json", {{"truncate.json", to_json(t).dump() + "\n"}, {"eigenvalues.csv", points_csv(eig)}}};
}

Output cmd_pseudospec(const RunConfig& cfg, const Flags& f) {
  const std::optional<SpectrumSet> set = try_predict(cfg);
  const GridSpec grid = window(cfg, set);
  const TruncationMatrix t = build_truncation(cfg.require_symbol(), cfg.require_map(), cfg.space, cfg.N);
  PseudospectrumOptions opt;
  opt.seed = cfg.seed;
  const PseudospectrumField field = pseudospectrum_grid(t, grid, opt);
  Output out{field_csv(field), "pseudospec.csv", {}};
  if (f.svg) {
    SpectrumSet shown;
    shown.provenance.rule = "no prediction";
    if (set) shown = *set;
    out.files.emplace_back("pseudospec.svg", render_spectrum(shown, &field, cfg.contour_level, eigenvalues(t)));
  }
  return out;
}

Output cmd_witness(const RunConfig& cfg, const Flags&) {
  const WitnessRun run = run_witness(cfg);
  return {dump(to_json(run)), "witness.json", {{"witness_residuals.csv", residual_csv(run)}}};
}

Output cmd_ergodic(const RunConfig& cfg, const Flags&) {
  const SymbolSpec& s = cfg.require_symbol();
  const MobiusMap& m = cfg.require_map();
  const ErgodicConfig& e = cfg.ergodic;
  const auto series = ergodic_series(s, m, e.z, e.n, e.every, cfg.oracle.classify);
  const json summary{{"z", complex_to_json(e.z)},
                     {"n", e.n},
                     {"average", series.empty() ? json(nullptr) : json(series.back().second)},
                     {"sup_cocycle_root", sup_cocycle_root(s, m, e.sup_n, e.sup_samples)},
                     {"sup_n", e.sup_n},
                     {"sup_samples", e.sup_samples}};
  return {ergodic_csv(series), "ergodic.csv", {{"ergodic.json", dump(summary)}}};
}

Output cmd_verify(const RunConfig& cfg, const Flags&) {
  const VerifyReport report = run_verification(cfg);
  Output out{dump(to_json(report)), "verify.json", {}};
  if (const Check* bad = report.first_hard_failure()) {
    std::cerr << "verification failed: " << bad->name << " (measured " << format_double(bad->measured)
              << ", threshold " << format_double(bad->threshold) << ")\n";
    out.exit_code = kExitVerification;
  }
  return out;
}

int exit_code_for(const error& e) {
  switch (e.category()) {
    case error_category::input: return kExitInput;
    case error_category::unsupported: return kExitUnsupported;
    case error_category::numerical: return kExitNumerical;
  }
  return kExitInput;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error(errc::invalid_input, "cannot write " + path.string());
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of weighted composition operators on Hardy and Bergman spaces"};
  app.require_subcommand(1);
  Flags flags;

  using Command = Output (*)(const RunConfig&, const Flags&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"classify", "classify the map", cmd_classify},
      {"predict", "predicted spectrum (JSON, optional SVG)", cmd_predict},
      {"verify", "verification battery for the configured case", cmd_verify},
      {"truncate", "matrix truncation and its eigenvalues", cmd_truncate},
      {"pseudospec", "sigma_min field of the truncation (CSV, optional SVG)", cmd_pseudospec},
      {"witness", "approximate eigenvectors of the adjoint", cmd_witness},
      {"ergodic", "running Birkhoff averages of log|psi|", cmd_ergodic},
      {"radius", "spectral radius bound", cmd_radius},
  };
  std::map<CLI::App*, Command> dispatch;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON run configuration")->required();
    sub->add_option("--out", flags.out, "directory for all output files");
    sub->add_option("--N", flags.n, "truncation size");
    sub->add_option("--grid", flags.grid, "pseudospectrum grid resolution WxH");
    sub->add_option("--seed", flags.seed, "seed for randomized checks");
    sub->add_flag("--svg", flags.svg, "also render an SVG plot (needs --out)");
    dispatch[sub] = fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (flags.svg && flags.out.empty()) throw error(errc::invalid_input, "--svg needs --out");
    Command fn = nullptr;
    for (const auto& [sub, f] : dispatch)
      if (sub->parsed()) fn = f;
    const RunConfig cfg = load(flags);
    const Output out = fn(cfg, flags);
    // Files first, so a closed stdout pipe cannot lose them.
    if (!flags.out.empty()) {
      fs::create_directories(flags.out);
      write_file(fs::path(flags.out) / out.primary_name, out.primary);
      for (const auto& [name, text] : out.files) write_file(fs::path(flags.out) / name, text);
    }
    std::cout << out.primary << std::flush;
    return out.exit_code;
  } catch (const error& e) {
    std::cerr << "specwin: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "specwin: " << e.what() << "\n";
    return kExitInput;
  }
}
