#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace specwin {

using cplx = std::complex<double>;

// 50 decimal digits; enough to follow backward orbits ~100 hyperbolic steps deep.
using mp_real = boost::multiprecision::cpp_bin_float_50;
using mp_complex = boost::multiprecision::cpp_complex_50;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

template <class Real>
struct complex_of {
  using type = std::complex<Real>;
};
template <>
struct complex_of<mp_real> {
  using type = mp_complex;
};
template <class Real>
using complex_t = typename complex_of<Real>::type;

template <class C>
struct real_of {
  using type = typename C::value_type;
};
template <>
struct real_of<mp_complex> {
  using type = mp_real;
};
template <class C>
using real_t = typename real_of<C>::type;

template <class C>
C lift(const cplx& z) {
  using R = real_t<C>;
  return C(R(z.real()), R(z.imag()));
}

inline cplx lower(const cplx& z) { return z; }
inline cplx lower(const mp_complex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}
inline double lower(double x) { return x; }
inline double lower(const mp_real& x) { return static_cast<double>(x); }

// |z|^2 without the square root, for both std::complex and multiprecision.
template <class C>
real_t<C> abs2(const C& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

inline cplx unit(double radians) { return std::polar(1.0, radians); }

// Integer power by squaring; keeps integer kernel exponents free of log/exp.
template <class T>
T ipow(T base, long n) {
  T result(1);
  if (n < 0) {
    base = T(1) / base;
    n = -n;
  }
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

inline bool is_integer(double x, double tol = 1e-14) {
  return std::abs(x - std::round(x)) <= tol;
}

}  // namespace specwin
