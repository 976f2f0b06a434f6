#include <gtest/gtest.h>

#include "specwin/specwin.hpp"

using namespace specwin;

namespace {

const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

errc code_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const error& e) {
    return e.code();
  }
  return errc::zero_on_orbit;  // sentinel: parsed fine
}

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const error& e) {
    return e.message();
  }
  return {};
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::sqrt(3.0)}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Config, MapConstructors) {
  const RunConfig a = parse_config_text(R"({"map": {"rotation": 0.25}})");
  EXPECT_EQ(classify(*a.map).kind, MapKind::elliptic_rational);
  const RunConfig b = parse_config_text(R"({"map": {"elliptic": {"fixed": [0.1, 0.2], "turns": 0.25}}})");
  EXPECT_EQ(classify(*b.map).period, 4);
  const RunConfig c = parse_config_text(R"({"map": {"elliptic": {"fixed": [0.1, 0.2], "angle": 1.5707963267948966}}})");
  EXPECT_NEAR(std::abs((*c.map)(0.3) - (*b.map)(0.3)), 0.0, 1e-14);
  const RunConfig d = parse_config_text(R"({"map": {"hyperbolic_r": 0.5}})");
  EXPECT_NEAR(std::abs(classify(*d.map).multiplier - 1.0 / 3.0), 0.0, 1e-12);
  const RunConfig e = parse_config_text(R"({"map": {"parabolic_cayley": -1}})");
  EXPECT_EQ(classify(*e.map).kind, MapKind::parabolic);
  const RunConfig f = parse_config_text(R"({"map": {"coeffs": [[0, 1], 0, 0, [0, -1]]}})");
  EXPECT_NEAR(std::abs((*f.map)(0.5) + 0.5), 0.0, 1e-15);
}

TEST(Config, SymbolAndSpace) {
  const RunConfig c = parse_config_text(
      R"({"symbol": {"num": [[1, 0], [0, 0.5]], "den": [2, 0.5], "blaschke": [[0.2, 0.1]]}, "space": {"bergman": 1.5}})");
  EXPECT_EQ(c.symbol->numerator().degree(), 1);
  EXPECT_EQ(c.symbol->blaschke_zeros().size(), 1u);
  EXPECT_EQ(c.space, SpaceSpec::bergman(1.5));
  EXPECT_EQ(parse_config_text(R"({"space": "hardy"})").space, SpaceSpec::hardy());
}

TEST(Config, Diagnostics) {
  EXPECT_EQ(code_of(R"({"map": {"coeffs": [[2, 0], 0, 0, 1]}})"), errc::not_automorphism);
  EXPECT_EQ(message_of(R"({"map": {"coeffs": [[2, 0], 0, 0, 1]}})").rfind("/map:", 0), 0u);
  EXPECT_EQ(message_of(R"({"map": {"spin": 1}})"), "/map: unknown map constructor \"spin\"");
  EXPECT_EQ(message_of(R"({"symbol": {"num": [1, [0.5]]}})"), "/symbol/num/1: expected a complex number [re, im]");
  EXPECT_EQ(message_of(R"({"sapce": "hardy"})"), "/sapce: unknown field");
  EXPECT_EQ(message_of(R"({"space": {"bergman": -1}})").rfind("/space:", 0), 0u);
  EXPECT_EQ(message_of(R"({"witness": {"schedule": {"stages": 0}}})"), "/witness/schedule: stage counts and budgets must be positive");
  EXPECT_EQ(message_of(R"({"grid": {"nx": 600}})").rfind("/grid:", 0), 0u);
  EXPECT_EQ(message_of(R"({"N": 2.5})"), "/N: expected an integer");
  EXPECT_EQ(message_of(R"({"symbol": {"num": [1], "den": [0.5, 1]}})").rfind("/symbol:", 0), 0u);
  const std::string syntax = message_of("{\"map\":\n  {\"rotation\": }}");
  EXPECT_NE(syntax.find("line 2"), std::string::npos) << syntax;
}

TEST(Config, WitnessAndFault) {
  const RunConfig c = parse_config_text(R"({
    "witness": {"construction": "backward_orbit", "lambda": [0.1, 0.2], "base_points": [0.1, [0, 0.2]], "n_terms": 30,
                "ray_spacing": "harmonic", "schedule": {"stages": 3, "enforce_guarantee": false}},
    "fault_injection": {"corrupt_entry": [2, 3], "amount": [0, 1]}, "seed": 9})");
  EXPECT_EQ(c.witness.construction, "backward_orbit");
  EXPECT_EQ(*c.witness.lambda, cplx(0.1, 0.2));
  EXPECT_EQ(c.witness.base_points.size(), 2u);
  EXPECT_EQ(*c.witness.n_terms, 30);
  EXPECT_EQ(c.witness.ray_spacing, RaySpacing::harmonic);
  EXPECT_EQ(c.witness.schedule.stages, 3);
  EXPECT_FALSE(c.witness.schedule.enforce_guarantee);
  EXPECT_TRUE(c.fault.enabled);
  EXPECT_EQ(c.fault.row, 2);
  EXPECT_EQ(c.fault.amount, cplx(0, 1));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(code_of(R"({"witness": {"construction": "magic"}})"), errc::invalid_input);
}

TEST(RoundTrip, DomainObjects) {
  const MobiusMap m = MobiusMap::disk_automorphism(cplx(0.3, -0.2), 0.7);
  const MobiusMap m2 = map_at(json::parse(to_json(m).dump()), "/map");
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(m.coefficients()[k] - m2.coefficients()[k]), 0.0, 1e-15);

  const SymbolSpec s(Polynomial({0.5, cplx(0, -0.3), 0.1}), Polynomial({1.5, 0.4}), {cplx(0.1, 0.2)});
  const SymbolSpec s2 = symbol_at(json::parse(to_json(s).dump()), "/symbol");
  EXPECT_EQ(s2.numerator().coefficients(), s.numerator().coefficients());
  EXPECT_EQ(s2.denominator().coefficients(), s.denominator().coefficients());
  EXPECT_EQ(s2.blaschke_zeros(), s.blaschke_zeros());
  EXPECT_EQ(to_json(s2), to_json(s));

  for (const SpaceSpec& sp : {SpaceSpec::hardy(), SpaceSpec::bergman(2.5)}) EXPECT_EQ(space_at(to_json(sp), ""), sp);

  const Classification c = classify(MobiusMap::hyperbolic(0.5));
  const Classification c2 = classification_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(c2.kind, c.kind);
  EXPECT_EQ(c2.fixed_points, c.fixed_points);
  EXPECT_EQ(*c2.denjoy_wolff, *c.denjoy_wolff);
  EXPECT_EQ(c2.multiplier, c.multiplier);
  EXPECT_EQ(to_json(c2), to_json(c));
}

TEST(RoundTrip, Reports) {
  const SymbolSpec z(Polynomial({0.0, 1.0}));
  for (const MobiusMap& m : {MobiusMap::hyperbolic(0.5), MobiusMap::rotation(0.5), MobiusMap::parabolic_cayley(1.0)}) {
    const SpectrumSet set = predict_spectrum(z, m, SpaceSpec::hardy());
    const json j = to_json(set);
    const SpectrumSet back = spectrum_from_json(json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(back.points, set.points);
    EXPECT_EQ(back.provenance.inputs, set.provenance.inputs);
  }
  const RadiusBound r = spectral_radius_bound(z, MobiusMap::hyperbolic(0.5), SpaceSpec::bergman(0.0));
  EXPECT_EQ(to_json(radius_from_json(json::parse(to_json(r).dump()))), to_json(r));

  const WitnessRun w = witness_elliptic_boundary(SymbolSpec(Polynomial({-1.0, 1.0})), MobiusMap::rotation(golden),
                                                 SpaceSpec::hardy(), 0.5);
  const WitnessRun w2 = witness_from_json(json::parse(to_json(w).dump()));
  EXPECT_EQ(to_json(w2), to_json(w));
  ASSERT_EQ(w2.stages.size(), w.stages.size());
  EXPECT_EQ(w2.stages.back().h.terms.size(), w.stages.back().h.terms.size());
  EXPECT_TRUE(std::isnan(witness_from_json(to_json(witness_rational_rotation(
                             z, MobiusMap::rotation(0.5), SpaceSpec::hardy(), 0.5))).stages[0].q));

  const TruncationMatrix t = build_truncation(SymbolSpec(Polynomial({0.5, 0.25})), MobiusMap::hyperbolic(0.3),
                                              SpaceSpec::bergman(1.0), 12);
  const TruncationMatrix t2 = truncation_from_json(json::parse(to_json(t).dump()));
  EXPECT_EQ(t2.A, t.A);
  EXPECT_EQ(t2.size(), t.size());
  // Loading re-normalizes the map, which may move its coefficients by an ulp.
  EXPECT_NEAR(std::abs(t2.map(0.4) - t.map(0.4)), 0.0, 1e-15);
  EXPECT_EQ(to_json(t2.symbol), to_json(t.symbol));
}

TEST(Csv, Headers) {
  EXPECT_EQ(points_csv({cplx(0.5, -1.0)}), "re,im\n0.5,-1\n");
  EXPECT_EQ(ergodic_csv({{10, 0.25}}), "n,average\n10,0.25\n");
  PseudospectrumField f{{0.0, 1.0, 0.0, 0.0, 2, 1}, {0.5, 0.125}};
  EXPECT_EQ(field_csv(f), "re,im,sigma_min\n0,0,0.5\n1,0,0.125\n");
  WitnessRun run;
  run.stages.push_back(WitnessStage{});
  EXPECT_EQ(residual_csv(run).substr(0, 37), "j,n_terms,residual,floor,norm,bound\n0");
}

TEST(Contour, CircleLevelSet) {
  // sigma = |z|: the level set at 0.5 is the circle of radius 0.5.
  GridSpec g{-1.0, 1.0, -1.0, 1.0, 81, 81};
  PseudospectrumField f{g, {}};
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) f.sigma_min.push_back(std::abs(g.point(ix, iy)));
  const std::vector<Segment> segs = contour_segments(f, 0.5);
  ASSERT_GT(segs.size(), 40u);
  double length = 0.0;
  for (const auto& [a, b] : segs) {
    EXPECT_NEAR(std::abs(a), 0.5, 2e-3);
    EXPECT_NEAR(std::abs(b), 0.5, 2e-3);
    length += std::abs(b - a);
  }
  EXPECT_NEAR(length, pi, 0.01);
  EXPECT_TRUE(contour_segments(f, 5.0).empty());
}

TEST(Svg, RendersShapes) {
  const SpectrumSet set = predict_spectrum(SymbolSpec::constant(1.0), MobiusMap::hyperbolic(0.5), SpaceSpec::hardy());
  const std::string svg = render_spectrum(set);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("evenodd"), std::string::npos);
  EXPECT_NE(svg.find("Annulus"), std::string::npos);
  EXPECT_EQ(svg, render_spectrum(set));
}

TEST(Verify, GoldenAndFault) {
  RunConfig cfg = parse_config_text(R"({"map": {"parabolic_cayley": 1}, "symbol": {"num": [-0.5, 1]}, "N": 128})");
  const VerifyReport ok = run_verification(cfg);
  EXPECT_TRUE(ok.passed()) << to_json(ok).dump(2);
  cfg.fault.enabled = true;
  const VerifyReport bad = run_verification(cfg);
  ASSERT_NE(bad.first_hard_failure(), nullptr);
  EXPECT_EQ(bad.first_hard_failure()->name, "adjoint_identity");

  const RunConfig id = parse_config_text(R"({"map": {"coeffs": [1, 0, 0, 1]}, "symbol": {"num": [0.2, 0.5]}, "N": 64})");
  const VerifyReport toeplitz = run_verification(id);
  EXPECT_TRUE(toeplitz.passed()) << to_json(toeplitz).dump(2);
  EXPECT_EQ(toeplitz.checks[1].detail, "RationalRotationExact at |lambda| = 0.45");
}

TEST(Verify, WitnessDispatch) {
  auto pick = [](const char* text) { return choose_construction(parse_config_text(text)); };
  EXPECT_EQ(pick(R"({"map": {"rotation": 0.25}, "symbol": {"num": [1]}})"), "rational_rotation");
  EXPECT_EQ(pick(R"({"map": {"hyperbolic_r": 0.5}, "symbol": {"num": [0, 1]}})"), "backward_orbit");
  EXPECT_EQ(pick(R"({"map": {"rotation": 0.6180339887498949}, "symbol": {"num": [-1, 1]}})"), "elliptic_boundary");
  EXPECT_EQ(pick(R"({"map": {"rotation": 0.6180339887498949}, "symbol": {"num": [-0.5, 1]}})"), "inner_zero");
  EXPECT_EQ(pick(R"({"map": {"rotation": 0.6180339887498949}, "symbol": {"num": [0, 1]}})"), "level_circle");
  EXPECT_EQ(pick(R"({"map": {"rotation": 0.6180339887498949}, "symbol": {"num": [2, 1]}})"), "level_circle");
}
