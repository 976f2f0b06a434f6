#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "errors.hpp"
#include "mobius.hpp"
#include "numeric.hpp"
#include "space.hpp"
#include "symbol.hpp"

namespace specwin {

struct TruncationOptions {
  std::optional<double> rho;  // sampling radius; unset tries 1, then default_sampling_radius(N)
  std::size_t min_samples = 1024;
  double stability_tol = 1e-9;
};

// Fallback radius: at least 0.95, and rho^-(N-1) stays below 1e4.
inline double default_sampling_radius(int n) {
  if (n <= 1) return 0.95;
  return std::max(0.95, std::pow(10.0, -4.0 / (n - 1)));
}

// Upper-left N x N block of C in the orthonormal basis e_n = z^n / ||z^n||. These are
// compressions: spectra of the blocks need not converge to the operator spectrum.
struct TruncationMatrix {
  Eigen::MatrixXcd A;
  SymbolSpec symbol;
  MobiusMap map;
  SpaceSpec space;
  double rho = 1.0;
  std::size_t samples = 0;
  double observed_change = 0.0;  // max entry change in the last sample doubling

  int size() const { return static_cast<int>(A.rows()); }
};

namespace detail {

// A(m, n) = (||z^m|| / ||z^n||) * [z^m](psi phi^n), Taylor coefficients from a DFT on |z| = rho.
inline Eigen::MatrixXcd truncation_block(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, int n,
                                         double rho, std::size_t samples) {
  std::vector<cplx> psi(samples), phi(samples), power(samples), spectrum;
  for (std::size_t j = 0; j < samples; ++j) {
    const cplx z = std::polar(rho, two_pi * static_cast<double>(j) / static_cast<double>(samples));
    psi[j] = s(z);
    phi[j] = m(z);
    power[j] = psi[j];
  }
  const std::vector<double> beta = basis_norms(sp, n);
  std::vector<double> rho_inv(n);
  for (int k = 0; k < n; ++k) rho_inv[k] = std::pow(rho, -k) / static_cast<double>(samples);
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd A(n, n);
  for (int col = 0; col < n; ++col) {
    fft.fwd(spectrum, power);
    for (int row = 0; row < n; ++row) A(row, col) = spectrum[row] * rho_inv[row] * (beta[row] / beta[col]);
    for (std::size_t j = 0; j < samples; ++j) power[j] *= phi[j];
  }
  return A;
}

inline std::size_t next_pow2(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

}  // namespace detail

namespace detail {

// Block at M, 2M and 4M samples; accepts once an entry-wise change drops below the tolerance.
inline std::optional<TruncationMatrix> certified_block(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, int n,
                                                       double rho, const TruncationOptions& opt, double& change) {
  std::size_t samples = next_pow2(std::max<std::size_t>(4 * static_cast<std::size_t>(n), opt.min_samples));
  Eigen::MatrixXcd prev = truncation_block(s, m, sp, n, rho, samples);
  for (int attempt = 0; attempt < 2; ++attempt) {
    samples *= 2;
    Eigen::MatrixXcd next = truncation_block(s, m, sp, n, rho, samples);
    change = (next - prev).cwiseAbs().maxCoeff();
    if (change < opt.stability_tol) return TruncationMatrix{std::move(next), s, m, sp, rho, samples, change};
    prev = std::move(next);
  }
  return std::nullopt;
}

}  // namespace detail

// Without an explicit radius the unit circle is tried first: psi phi^n is analytic on a
// neighbourhood of the closed disk, and sampling there avoids the rho^-m roundoff amplification.
// If the doubling check rejects it (singularities close to the circle), the shrunken default
// radius is used instead.
inline TruncationMatrix build_truncation(const SymbolSpec& s, const MobiusMap& m, const SpaceSpec& sp, int n,
                                         const TruncationOptions& opt = {}) {
  if (n < 1) throw error(errc::invalid_input, "truncation size must be positive");
  if (opt.rho && !(*opt.rho > 0.0 && *opt.rho <= 1.0)) throw error(errc::invalid_input, "sampling radius must lie in (0,1]");
  const std::vector<double> radii = opt.rho ? std::vector<double>{*opt.rho} : std::vector<double>{1.0, default_sampling_radius(n)};
  double change = 0.0;
  for (double rho : radii)
    if (auto t = detail::certified_block(s, m, sp, n, rho, opt, change)) return std::move(*t);
  throw error(errc::coefficient_extraction_unstable,
              "Taylor coefficients moved by " + std::to_string(change) + " under sample doubling");
}

inline std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& A) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  if (es.info() != Eigen::Success) throw error(errc::eigensolver_nonconvergence, "QR iteration did not converge");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max(1.0, ma)) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
  return ev;
}
inline std::vector<cplx> eigenvalues(const TruncationMatrix& t) { return eigenvalues(t.A); }

// Smallest singular value of A - lambda I by dense SVD.
inline double sigma_min(const Eigen::MatrixXcd& A, cplx lambda) {
  const Eigen::MatrixXcd shifted = A - lambda * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted);
  return svd.singularValues().minCoeff();
}

// ---------------------------------------------------------------- pseudospectrum

struct GridSpec {
  double re_min = -1.5, re_max = 1.5, im_min = -1.5, im_max = 1.5;
  int nx = 201, ny = 201;

  cplx point(int ix, int iy) const {
    const double x = nx > 1 ? re_min + (re_max - re_min) * ix / (nx - 1) : 0.5 * (re_min + re_max);
    const double y = ny > 1 ? im_min + (im_max - im_min) * iy / (ny - 1) : 0.5 * (im_min + im_max);
    return {x, y};
  }
  void validate() const {
    if (nx < 1 || ny < 1 || nx > 512 || ny > 512) throw error(errc::invalid_input, "grid must be at most 512x512");
    if (!(re_max >= re_min) || !(im_max >= im_min)) throw error(errc::invalid_input, "empty grid window");
  }
};

// Square window around the origin, a bit larger than `radius`.
inline GridSpec grid_around(double radius, int nx = 201, int ny = 201) {
  const double h = 1.25 * std::max(radius, 0.1);
  return {-h, h, -h, h, nx, ny};
}

struct PseudospectrumField {
  GridSpec grid;
  std::vector<double> sigma_min;  // row-major: index iy * nx + ix

  double at(int ix, int iy) const { return sigma_min[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

struct PseudospectrumOptions {
  unsigned threads = 0;  // 0: SPECWIN_THREADS or hardware concurrency
  std::uint64_t seed = 1;
  int dense_cutoff = 64;  // at or below this size every point gets a full SVD
  int max_iterations = 200;
  double tol = 1e-12;
};

inline unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("SPECWIN_THREADS")) n = static_cast<unsigned>(std::max(1, std::atoi(env)));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace detail {

// sigma_min of the triangular T - lambda I by inverse iteration on (R^* R)^{-1}.
inline double schur_sigma_min(const Eigen::MatrixXcd& T, cplx lambda, Eigen::VectorXcd& x,
                              const PseudospectrumOptions& opt) {
  Eigen::MatrixXcd R = T;
  R.diagonal().array() -= lambda;
  const auto upper = R.triangularView<Eigen::Upper>();
  // Power iteration on (R^* R)^{-1}; the Rayleigh quotient ||R^{-*} x||^2 converges fastest.
  double prev = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXcd y = upper.adjoint().solve(x);
    const double ray = y.squaredNorm();
    if (!std::isfinite(ray)) return 0.0;
    const Eigen::VectorXcd z = upper.solve(y);
    const double nz = z.norm();
    if (!std::isfinite(nz) || nz == 0.0) return 0.0;
    x = z / nz;
    if (std::abs(ray - prev) <= opt.tol * ray) return 1.0 / std::sqrt(ray);
    prev = ray;
  }
  return 1.0 / std::sqrt(prev);
}

}  // namespace detail

inline PseudospectrumField pseudospectrum_grid(const Eigen::MatrixXcd& A, const GridSpec& grid,
                                               const PseudospectrumOptions& opt = {}) {
  grid.validate();
  PseudospectrumField out{grid, std::vector<double>(static_cast<std::size_t>(grid.nx) * grid.ny)};
  const int n = static_cast<int>(A.rows());
  const bool dense = n <= opt.dense_cutoff;
  Eigen::MatrixXcd T;
  if (!dense) {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A, false);
    if (schur.info() != Eigen::Success) throw error(errc::eigensolver_nonconvergence, "Schur form did not converge");
    T = schur.matrixT();
  }
  auto row_task = [&](int iy) {
    std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(iy));
    std::normal_distribution<double> g;
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x(i) = cplx(g(rng), g(rng));
    x.normalize();
    for (int ix = 0; ix < grid.nx; ++ix) {
      const cplx lambda = grid.point(ix, iy);
      out.sigma_min[static_cast<std::size_t>(iy) * grid.nx + ix] =
          dense ? sigma_min(A, lambda) : detail::schur_sigma_min(T, lambda, x, opt);
    }
  };
  const unsigned workers = std::min<unsigned>(worker_count(opt.threads), static_cast<unsigned>(grid.ny));
  if (workers <= 1) {
    for (int iy = 0; iy < grid.ny; ++iy) row_task(iy);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int iy = static_cast<int>(w); iy < grid.ny; iy += static_cast<int>(workers)) row_task(iy);
      });
    for (auto& t : pool) t.join();
  }
  return out;
}
inline PseudospectrumField pseudospectrum_grid(const TruncationMatrix& t, const GridSpec& grid,
                                               const PseudospectrumOptions& opt = {}) {
  return pseudospectrum_grid(t.A, grid, opt);
}

// ---------------------------------------------------------------- powers

// Largest singular value by power iteration on M^* M, warm-started from x.
inline double operator_norm(const Eigen::MatrixXcd& M, Eigen::VectorXcd& x, int max_iterations = 500,
                            double tol = 1e-12) {
  if (M.rows() <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
  }
  double prev = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXcd y = M.adjoint() * (M * x);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (std::abs(ny - prev) <= tol * ny) return std::sqrt(ny);
    prev = ny;
  }
  return std::sqrt(prev);
}

// ||A^n||^{1/n} for n = 1..n_max; powers are rescaled to stay finite.
inline std::vector<double> norm_power_radius(const Eigen::MatrixXcd& A, int n_max) {
  if (n_max < 1) throw error(errc::invalid_input, "n_max must be positive");
  std::vector<double> out;
  out.reserve(n_max);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(A.rows()).normalized();
  double log_scale = 0.0;
  bool vanished = false;
  for (int n = 1; n <= n_max; ++n) {
    if (vanished) {
      out.push_back(0.0);
      continue;
    }
    P = P * A;
    const double norm = operator_norm(P, x);
    if (norm == 0.0) {
      vanished = true;
      out.push_back(0.0);
      continue;
    }
    out.push_back(std::exp((std::log(norm) + log_scale) / n));
    P /= norm;
    log_scale += std::log(norm);
  }
  return out;
}
inline std::vector<double> norm_power_radius(const TruncationMatrix& t, int n_max) {
  return norm_power_radius(t.A, n_max);
}

}  // namespace specwin
