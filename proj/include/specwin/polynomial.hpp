#pragma once

#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "numeric.hpp"

namespace specwin {

// Dense polynomial with ascending complex coefficients.
class Polynomial {
 public:
  Polynomial() : c_{cplx{0.0}} {}
  explicit Polynomial(std::vector<cplx> ascending) : c_(std::move(ascending)) {
    while (c_.size() > 1 && c_.back() == cplx{}) c_.pop_back();
    if (c_.empty()) c_.push_back(cplx{});
  }

  const std::vector<cplx>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == cplx{}; }
  cplx leading() const { return c_.back(); }

  template <class C>
  C operator()(const C& z) const {
    C acc = lift<C>(c_.back());
    for (auto it = c_.rbegin() + 1; it != c_.rend(); ++it) acc = acc * z + lift<C>(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() == 1) return Polynomial{};
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    std::vector<cplx> r(p.c_.size() + q.c_.size() - 1, cplx{});
    for (std::size_t i = 0; i < p.c_.size(); ++i)
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(cplx s, Polynomial p) {
    for (cplx& x : p.c_) x *= s;
    return Polynomial(std::move(p.c_));
  }

  // Multiplicity of the root at 0, read off the coefficients exactly.
  int zero_order_at_origin() const {
    int m = 0;
    while (m < degree() && c_[m] == cplx{}) ++m;
    return m;
  }

  // Roots with multiplicity. The exact zeros at the origin are split off first; the rest come
  // from the companion matrix, each refined by one Newton step.
  std::vector<cplx> roots() const {
    if (is_zero()) throw error(errc::root_finding_failure, "zero polynomial has no finite root set");
    const int m = zero_order_at_origin();
    std::vector<cplx> out(m, cplx{});
    const int n = degree() - m;
    if (n == 0) return out;
    const cplx lead = c_.back();
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c_[m + i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw error(errc::root_finding_failure, "companion eigensolver failed");
    const Polynomial dp = derivative();
    for (int i = 0; i < n; ++i) {
      cplx z = es.eigenvalues()(i);
      const cplx fz = (*this)(z), dfz = dp(z);
      if (dfz != cplx{}) {
        const cplx polished = z - fz / dfz;
        if (std::abs((*this)(polished)) < std::abs(fz)) z = polished;
      }
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw error(errc::root_finding_failure, "non-finite root");
      out.push_back(z);
    }
    return out;
  }

 private:
  std::vector<cplx> c_;
};

}  // namespace specwin
