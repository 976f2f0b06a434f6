#include <gtest/gtest.h>

#include <random>

#include "specwin/symbol.hpp"

using namespace specwin;

namespace {

const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

// c * prod (z - z_k) / prod (z - p_k) * prod Blaschke(w_j), built from roots.
struct RootForm {
  cplx c{1.0};
  std::vector<cplx> zeros, poles, blaschke;

  SymbolSpec symbol() const {
    Polynomial p({c}), q({1.0});
    for (cplx z : zeros) p = p * Polynomial({-z, 1.0});
    for (cplx z : poles) q = q * Polynomial({-z, 1.0});
    return SymbolSpec(p, q, blaschke);
  }
  // Jensen: the circle mean of log|z - w| on |z| = r is log max(r, |w|).
  double log_delta(double r) const {
    double v = std::log(std::abs(c));
    for (cplx z : zeros) v += std::log(std::max(r, std::abs(z)));
    for (cplx z : poles) v -= std::log(std::abs(z));
    for (cplx w : blaschke) v += std::log(std::max(r, std::abs(w)));
    return v;
  }
  // Poisson integral of log|psi| on the circle, term by term.
  double log_outer(cplx a) const {
    double v = std::log(std::abs(c));
    for (cplx z : zeros)
      v += std::abs(z) >= 1.0 ? std::log(std::abs(a - z)) : std::log(std::abs(1.0 - std::conj(z) * a));
    for (cplx z : poles) v -= std::log(std::abs(a - z));
    return v;
  }
};

RootForm random_root_form(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RootForm f;
  f.c = std::polar(0.5 + u(rng), two_pi * u(rng));
  const int nz = 1 + static_cast<int>(u(rng) * 3), np = static_cast<int>(u(rng) * 3);
  for (int k = 0; k < nz; ++k) f.zeros.push_back(std::polar(1.6 * u(rng), two_pi * u(rng)));
  for (int k = 0; k < np; ++k) f.poles.push_back(std::polar(1.2 + u(rng), two_pi * u(rng)));
  if (u(rng) < 0.5) f.blaschke.push_back(std::polar(0.9 * u(rng), two_pi * u(rng)));
  return f;
}

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return errc::invalid_input;
}

}  // namespace

TEST(Symbol, EvaluateSimple) {
  const SymbolSpec s(Polynomial({-0.5, 1.0}));
  EXPECT_EQ(evaluate(s, 0.0), cplx(-0.5));
  const SymbolSpec b(Polynomial({1.0}), Polynomial({1.0}), {cplx(0.5)});
  EXPECT_NEAR(std::abs(evaluate(b, 0.0) - cplx(-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(evaluate(b, 1.0)), 1.0, 1e-15);
  EXPECT_EQ(code_of([&] { evaluate(s, 1.5); }), errc::outside_closed_disk);
}

TEST(Symbol, RejectsBadInput) {
  EXPECT_EQ(code_of([] { SymbolSpec(Polynomial({1.0}), Polynomial({-0.5, 1.0})); }), errc::invalid_input);
  EXPECT_EQ(code_of([] { SymbolSpec(Polynomial({0.0})); }), errc::invalid_input);
  EXPECT_EQ(code_of([] { SymbolSpec(Polynomial({1.0}), Polynomial({1.0}), {cplx(1.0)}); }), errc::invalid_input);
}

TEST(Symbol, ZeroReportBuckets) {
  RootForm f;
  f.zeros = {1.0, 0.5, 3.0};
  const ZeroReport r = zero_report(f.symbol());
  ASSERT_EQ(r.interior.size(), 1u);
  ASSERT_EQ(r.boundary.size(), 1u);
  ASSERT_EQ(r.exterior.size(), 1u);
  EXPECT_NEAR(std::abs(r.interior[0] - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.boundary[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.exterior[0] - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(r.min_inner_radius, 0.5, 1e-12);
  EXPECT_FALSE(is_invertible_weight(f.symbol()));
  EXPECT_TRUE(is_invertible_weight(SymbolSpec(Polynomial({2.0, 1.0}))));
  EXPECT_EQ(zero_report(SymbolSpec(Polynomial({0.0, 1.0}))).min_inner_radius, 0.0);
}

TEST(Symbol, JensenForLinearWeight) {
  const SymbolSpec s(Polynomial({-0.5, 1.0}));
  EXPECT_NEAR(jensen_delta(s, 0.25), 0.5, 1e-15);
  EXPECT_NEAR(jensen_delta(s, 0.8), 0.8, 1e-15);
  EXPECT_NEAR(delta_psi(s, 0.25), 0.5, 1e-10);
  EXPECT_NEAR(delta_psi(s, 0.8), 0.8, 1e-10);
  EXPECT_NEAR(delta_psi(s, 0.5), 0.5, 1e-12);  // zero on the circle: closed form
  EXPECT_NEAR(delta_psi(s, 0.0), 0.5, 1e-15);
  EXPECT_EQ(jensen_delta(SymbolSpec(Polynomial({0.0, 0.0, 3.0})), 0.0), 0.0);
  EXPECT_NEAR(jensen_delta(SymbolSpec(Polynomial({0.0, 0.0, 3.0})), 0.5), 0.75, 1e-15);
}

TEST(Symbol, BoundaryZeroMeans) {
  const SymbolSpec s(Polynomial({-1.0, 1.0}));  // z - 1
  EXPECT_NEAR(delta_psi(s, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(outer_modulus_at(s, 0.0), 1.0, 1e-10);
  EXPECT_NEAR(outer_modulus_at(s, 0.5), 0.5, 1e-10);
  EXPECT_EQ(code_of([&] { outer_modulus_at(s, 1.0); }), errc::outside_disk);
}

TEST(Symbol, QuadratureCapIsReported) {
  const SymbolSpec s(Polynomial({-(1.0 - 1e-9), 1.0}));
  QuadratureOptions opt;
  opt.on_circle_tol = 1e-12;
  opt.max_nodes = 1 << 12;
  EXPECT_EQ(code_of([&] { delta_psi(s, 1.0, opt); }), errc::quadrature_nonconvergence);
}

TEST(Symbol, CocycleOfIdentityWeight) {
  const cplx eta = unit(two_pi * golden);
  const MobiusMap rot = MobiusMap::rotation(golden);
  const SymbolSpec s(Polynomial({0.0, 1.0}));
  const cplx z(0.6, 0.3);
  for (long n : {1L, 5L, 40L}) {
    // prod_{k<n} eta^k z = z^n eta^{n(n-1)/2}
    const cplx expected = std::pow(z, static_cast<double>(n)) * std::pow(eta, static_cast<double>(n * (n - 1) / 2));
    EXPECT_NEAR(std::abs(cocycle(s, rot, n, z) - expected), 0.0, 1e-12 * std::abs(expected));
  }
  EXPECT_EQ(cocycle(s, rot, 0, z), cplx(1.0));
  const CocycleLog l = cocycle_log(s, rot, 20000, unit(0.1));
  // 20000 rotation steps drift off the circle by accumulated rounding only.
  EXPECT_NEAR(l.log_modulus, 0.0, 1e-7);
  EXPECT_NEAR(std::abs(cocycle(s, rot, 20000, unit(0.1))), 1.0, 1e-7);
}

TEST(Symbol, ErgodicAndSupRoot) {
  const MobiusMap rot = MobiusMap::rotation(golden);
  // mean of log|2 + e^{it}| is log 2
  EXPECT_NEAR(ergodic_average(SymbolSpec(Polynomial({2.0, 1.0})), rot, 1.0, 20000), std::log(2.0), 1e-3);
  EXPECT_NEAR(sup_cocycle_root(SymbolSpec::constant(0.7), rot, 50, 64), 0.7, 1e-14);
  EXPECT_EQ(code_of([&] { ergodic_average(SymbolSpec::constant(1.0), MobiusMap::hyperbolic(0.5), 0.0, 10); }),
            errc::wrong_kind);
  const SymbolSpec hits(Polynomial({-unit(two_pi * golden), 1.0}));
  EXPECT_EQ(code_of([&] { ergodic_average(hits, rot, 1.0, 10); }), errc::zero_on_orbit);
  const auto series = ergodic_series(SymbolSpec(Polynomial({2.0, 1.0})), rot, 1.0, 100, 25);
  ASSERT_EQ(series.size(), 4u);
  EXPECT_EQ(series.back().first, 100);
}

TEST(Symbol, ComposeMatchesPointwise) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SymbolSpec s = random_root_form(rng).symbol();
    const MobiusMap g = MobiusMap::disk_automorphism(std::polar(0.6 * u(rng), two_pi * u(rng)), two_pi * u(rng));
    const SymbolSpec sg = compose(s, g);
    for (int k = 0; k < 5; ++k) {
      const cplx z = std::polar(0.95 * u(rng), two_pi * u(rng));
      const cplx expected = s(g(z));
      EXPECT_NEAR(std::abs(sg(z) - expected), 0.0, 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(Symbol, CocycleSymbol) {
  const MobiusMap m = MobiusMap::hyperbolic(0.3);
  const SymbolSpec s(Polynomial({-0.2, 1.0}), Polynomial({2.0, 1.0}), {cplx(0.1, 0.4)});
  const SymbolSpec s3 = cocycle_symbol(s, m, 3);
  const cplx z(0.2, -0.5);
  EXPECT_NEAR(std::abs(s3(z) - cocycle(s, m, 3, z)), 0.0, 1e-12);
}

TEST(SymbolProperty, DeltaMatchesJensenAndClosedForm) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const RootForm f = random_root_form(rng);
    const SymbolSpec s = f.symbol();
    const double r = 0.05 + 0.95 * u(rng);
    const double oracle = std::exp(f.log_delta(r));
    EXPECT_NEAR(jensen_delta(s, r), oracle, 1e-10 * std::max(1.0, oracle));
    EXPECT_NEAR(delta_psi(s, r), oracle, 1e-8 * std::max(1.0, oracle));
  }
}

TEST(SymbolProperty, DeltaIsNondecreasing) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const SymbolSpec s = random_root_form(rng).symbol();
    double prev = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double d = delta_psi(s, k / 20.0);
      EXPECT_GE(d, prev - 1e-10);
      prev = d;
    }
  }
}

TEST(SymbolProperty, OuterModulusMatchesClosedForm) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    RootForm f = random_root_form(rng);
    if (trial % 3 == 0) f.zeros.push_back(unit(two_pi * u(rng)));  // boundary zero
    const cplx a = std::polar(0.8 * u(rng), two_pi * u(rng));
    const double oracle = std::exp(f.log_outer(a));
    EXPECT_NEAR(outer_modulus_at(f.symbol(), a), oracle, 1e-7 * std::max(1.0, oracle));
  }
}

TEST(SymbolProperty, ContinuityAtTheBoundary) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    RootForm f = random_root_form(rng);
    const SymbolSpec s = f.symbol();
    if (!zero_report(s).boundary.empty()) continue;
    EXPECT_NEAR(delta_psi(s, 0.999), delta_psi(s, 1.0), 1e-2);
  }
}

TEST(SymbolProperty, ZeroReportPartitions) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SymbolSpec s = random_root_form(rng).symbol();
    const ZeroReport r = zero_report(s);
    EXPECT_EQ(r.interior.size() + r.boundary.size() + r.exterior.size(), s.zeros().size());
    for (cplx z : s.zeros()) EXPECT_LT(std::abs(s(z)), 1e-9);
  }
}
