#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>

#include "ctrlcap/numerics/bigfloat.hpp"

namespace ctrlcap::numerics {

/// Minimal complex number over any real backend (double or BigFloat).
/// std::complex is unspecified for non-arithmetic element types.
template <class R>
struct Cx {
  R re{};
  R im{};

  Cx() : re(0), im(0) {}
  Cx(R real) : re(std::move(real)), im(0) {}  // NOLINT(google-explicit-constructor)
  Cx(R real, R imag) : re(std::move(real)), im(std::move(imag)) {}
  Cx(double real) requires(!std::is_same_v<R, double>) : re(real), im(0) {}  // NOLINT
  Cx(int real) : re(real), im(0) {}     // NOLINT(google-explicit-constructor)

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cx& operator*=(const Cx& o) {
    R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Cx& operator*=(const R& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Cx& operator/=(const R& s) {
    re /= s;
    im /= s;
    return *this;
  }
  Cx operator-() const { return {-re, -im}; }

  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
  friend Cx operator*(Cx a, const R& s) { return a *= s; }
  friend Cx operator*(const R& s, Cx a) { return a *= s; }
  friend Cx operator/(Cx a, const R& s) { return a /= s; }
  friend Cx operator/(const Cx& a, const Cx& b) {
    const R d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

template <class R>
Cx<R> conj(const Cx<R>& z) {
  return {z.re, -z.im};
}

/// |z|^2
template <class R>
R norm2(const Cx<R>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class R>
R abs(const Cx<R>& z) {
  using std::hypot;
  return hypot(z.re, z.im);
}

template <class R>
R real(const Cx<R>& z) {
  return z.re;
}

template <class R>
R imag(const Cx<R>& z) {
  return z.im;
}

/// z / |z|, or 1 for z == 0.
template <class R>
Cx<R> phase(const Cx<R>& z) {
  const R a = abs(z);
  if (a == R(0)) return Cx<R>(R(1));
  return z / a;
}

/// acc += a * b
template <class R>
void add_product(Cx<R>& acc, const Cx<R>& a, const Cx<R>& b) {
  add_product(acc.re, a.re, b.re);
  sub_product(acc.re, a.im, b.im);
  add_product(acc.im, a.re, b.im);
  add_product(acc.im, a.im, b.re);
}

/// acc += a * conj(b)
template <class R>
void add_conj_product(Cx<R>& acc, const Cx<R>& a, const Cx<R>& b) {
  add_product(acc.re, a.re, b.re);
  add_product(acc.re, a.im, b.im);
  add_product(acc.im, a.im, b.re);
  sub_product(acc.im, a.re, b.im);
}

/// acc += conj(a) * b
template <class R>
void add_adjoint_product(Cx<R>& acc, const Cx<R>& a, const Cx<R>& b) {
  add_product(acc.re, a.re, b.re);
  add_product(acc.re, a.im, b.im);
  add_product(acc.im, a.re, b.im);
  sub_product(acc.im, a.im, b.re);
}

using cplx = Cx<double>;

inline std::complex<double> to_std(const cplx& z) { return {z.re, z.im}; }
inline cplx from_std(const std::complex<double>& z) { return {z.real(), z.imag()}; }

template <class R>
Cx<R> widen(const cplx& z) {
  return {R(z.re), R(z.im)};
}

template <class R>
cplx narrow(const Cx<R>& z) {
  if constexpr (std::is_same_v<R, double>) {
    return z;
  } else {
    return {z.re.to_double(), z.im.to_double()};
  }
}

}  // namespace ctrlcap::numerics
