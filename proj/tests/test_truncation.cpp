#include <gtest/gtest.h>

#include <random>

#include "specwin/truncation.hpp"

using namespace specwin;

namespace {

const double golden = (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

TEST(Truncation, ShiftOnHardy) {
  const TruncationMatrix t = build_truncation(SymbolSpec(Polynomial({0.0, 1.0})), MobiusMap(), SpaceSpec::hardy(), 4);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  for (int n = 0; n < 3; ++n) expected(n + 1, n) = 1.0;
  EXPECT_LT((t.A - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Truncation, IdentityOnBergman) {
  const TruncationMatrix t = build_truncation(SymbolSpec::constant(1.0), MobiusMap(), SpaceSpec::bergman(0.0), 3);
  EXPECT_LT((t.A - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Truncation, WeightedShiftOnBergman) {
  // z e_n = (||z^{n+1}|| / ||z^n||) e_{n+1} = sqrt((n+1)/(n+2)) e_{n+1} in A^2_0.
  const TruncationMatrix t =
      build_truncation(SymbolSpec(Polynomial({0.0, 1.0})), MobiusMap(), SpaceSpec::bergman(0.0), 6);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(std::abs(t.A(n + 1, n) - std::sqrt((n + 1.0) / (n + 2.0))), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(t.A(0, 0)), 0.0, 1e-13);
}

TEST(Truncation, RotationIsDiagonal) {
  const cplx eta = unit(two_pi * golden);
  const TruncationMatrix t = build_truncation(SymbolSpec::constant(1.0), MobiusMap::rotation(golden), SpaceSpec::hardy(), 8);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  for (int n = 0; n < 8; ++n) expected(n, n) = std::pow(eta, n);
  EXPECT_LT((t.A - expected).cwiseAbs().maxCoeff(), 1e-12);
  const std::vector<cplx> ev = eigenvalues(t);
  for (int n = 0; n < 8; ++n) {
    double best = 1.0;
    for (cplx l : ev) best = std::min(best, std::abs(l - std::pow(eta, n)));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(Truncation, ColumnsReproduceTheFunction) {
  const SymbolSpec s(Polynomial({0.5, -0.3, 0.1}), Polynomial({1.5, 0.4}), {cplx(0.2, 0.1)});
  const MobiusMap m = MobiusMap::hyperbolic(0.4);
  for (const SpaceSpec sp : {SpaceSpec::hardy(), SpaceSpec::bergman(1.0)}) {
    const int n_size = 64;
    const TruncationMatrix t = build_truncation(s, m, sp, n_size);
    const cplx z(0.2, 0.25);
    for (int n : {0, 3, 10}) {
      cplx sum{0.0}, zm{1.0};
      for (int k = 0; k < n_size; ++k) {
        sum += t.A(k, n) * (basis_norm(sp, n) / basis_norm(sp, k)) * zm;
        zm *= z;
      }
      EXPECT_NEAR(std::abs(sum - s(z) * std::pow(m(z), n)), 0.0, 1e-10);
    }
  }
}

TEST(Truncation, AdjointActsOnKernels) {
  const SymbolSpec s(Polynomial({0.5, -0.3, 0.1}), Polynomial({1.5, 0.4}));
  const MobiusMap m = MobiusMap::disk_automorphism(cplx(0.3, -0.2), 0.7);
  for (const SpaceSpec sp : {SpaceSpec::hardy(), SpaceSpec::bergman(0.0), SpaceSpec::bergman(2.5)}) {
    const int n_size = 96;
    const TruncationMatrix t = build_truncation(s, m, sp, n_size);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.1), cplx(0.0, -0.6)}) {
      const Eigen::VectorXcd lhs = t.A.adjoint() * kernel_coefficients(sp, z, n_size);
      const Eigen::VectorXcd rhs = std::conj(s(z)) * kernel_coefficients(sp, m(z), n_size);
      EXPECT_LT((lhs - rhs).norm(), 1e-8 * rhs.norm());
    }
  }
}

TEST(Truncation, CocycleConsistency) {
  const SymbolSpec s(Polynomial({0.7, 0.2}));
  const MobiusMap m = MobiusMap::rotation(golden) * MobiusMap::hyperbolic(0.15);
  const int n_size = 96;
  const TruncationMatrix t1 = build_truncation(s, m, SpaceSpec::hardy(), n_size);
  const TruncationMatrix t2 = build_truncation(cocycle_symbol(s, m, 2), m.power(2), SpaceSpec::hardy(), n_size);
  const Eigen::MatrixXcd sq = t1.A * t1.A;
  const int h = n_size / 2;
  EXPECT_LT((sq.topLeftCorner(h, h) - t2.A.topLeftCorner(h, h)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Truncation, UnstableExtractionIsReported) {
  TruncationOptions opt;
  opt.rho = 0.5;
  try {
    build_truncation(SymbolSpec(Polynomial({1.0, 0.5})), MobiusMap::hyperbolic(0.5), SpaceSpec::hardy(), 80, opt);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::coefficient_extraction_unstable);
  }
}

TEST(Truncation, RotationIsDiagonalToRoundoff) {
  const cplx eta = std::polar(1.0, two_pi * 0.1234567);
  const TruncationMatrix t = build_truncation(SymbolSpec::constant(1.0), MobiusMap::rotation(0.1234567), SpaceSpec::hardy(), 256);
  EXPECT_EQ(t.rho, 1.0);
  double worst = 0.0;
  for (int r = 0; r < 256; ++r)
    for (int c = 0; c < 256; ++c) worst = std::max(worst, std::abs(t.A(r, c) - (r == c ? std::pow(eta, r) : cplx{})));
  EXPECT_LT(worst, 1e-12);
}

TEST(Truncation, PoleNearCircleFallsBackToSmallerRadius) {
  // psi = 1/(z - p): A(m, n) = eta^n [z^(m-n)] psi = -eta^n p^(n-m-1) for m >= n.
  const double p = 1.005;
  const cplx eta = std::polar(1.0, two_pi * 0.3);
  const TruncationMatrix t = build_truncation(SymbolSpec(Polynomial({1.0}), Polynomial({-p, 1.0})), MobiusMap::rotation(0.3),
                                              SpaceSpec::hardy(), 128);
  EXPECT_EQ(t.rho, default_sampling_radius(128));
  double worst = 0.0;
  for (int r = 0; r < 128; ++r)
    for (int c = 0; c < 128; ++c) {
      const cplx expected = r >= c ? -std::pow(eta, c) * std::pow(p, c - r - 1) : cplx{};
      worst = std::max(worst, std::abs(t.A(r, c) - expected));
    }
  EXPECT_LT(worst, 1e-9);
}

TEST(Truncation, DefaultRadiusBoundsAmplification) {
  for (int n : {8, 64, 256, 512, 1024}) {
    const double rho = default_sampling_radius(n);
    EXPECT_GE(rho, 0.95);
    EXPECT_LE(std::pow(rho, -(n - 1)), 1e4 * (1 + 1e-9));
  }
}

TEST(Pseudospectrum, SchurPathMatchesDenseSvd) {
  const TruncationMatrix t =
      build_truncation(SymbolSpec(Polynomial({-0.5, 1.0})), MobiusMap::hyperbolic(0.5), SpaceSpec::hardy(), 80);
  const GridSpec grid{-1.0, 1.0, -0.5, 0.5, 5, 3};
  const PseudospectrumField f = pseudospectrum_grid(t, grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double dense = sigma_min(t.A, grid.point(ix, iy));
      EXPECT_NEAR(f.at(ix, iy), dense, 1e-6 * std::max(1.0, dense));
      EXPECT_GE(f.at(ix, iy), 0.0);
    }
}

TEST(Pseudospectrum, VanishesAtEigenvalues) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3);
  A(0, 0) = 0.5;
  A(1, 1) = cplx(0, 0.25);
  A(2, 2) = -0.75;
  const GridSpec grid{-0.75, 0.5, 0.0, 0.25, 6, 2};
  const PseudospectrumField f = pseudospectrum_grid(A, grid);
  EXPECT_NEAR(f.at(5, 0), 0.0, 1e-14);
  EXPECT_NEAR(f.at(0, 0), 0.0, 1e-14);
  EXPECT_THROW(pseudospectrum_grid(A, GridSpec{-1, 1, -1, 1, 600, 10}), error);
}

TEST(Powers, NormPowerRadius) {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 0.5;
  D(1, 1) = 0.3;
  for (double v : norm_power_radius(D, 20)) EXPECT_NEAR(v, 0.5, 1e-12);
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(3, 3);
  J(1, 0) = 1.0;
  J(2, 1) = 1.0;
  const std::vector<double> r = norm_power_radius(J, 5);
  EXPECT_NEAR(r[0], 1.0, 1e-12);
  EXPECT_NEAR(r[1], 1.0, 1e-12);
  EXPECT_EQ(r[2], 0.0);
  EXPECT_EQ(r[4], 0.0);
  // Larger sizes use power iteration.
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(40, 40);
  for (int i = 0; i < 40; ++i) B(i, i) = 0.9 - 0.01 * i;
  B(0, 1) = 0.5;
  const std::vector<double> rb = norm_power_radius(B, 60);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(40, 40);
  for (int n = 1; n <= 60; ++n) {
    P = P * B;
    if (n == 1 || n == 10 || n == 60) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
      EXPECT_NEAR(rb[n - 1], std::pow(svd.singularValues()(0), 1.0 / n), 1e-9);
    }
  }
}
