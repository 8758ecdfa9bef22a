#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "ctrlcap/numerics/bigfloat.hpp"
#include "ctrlcap/numerics/error.hpp"

namespace ctrlcap::numerics {

inline constexpr int kNativeBits = 53;
inline constexpr int kMinExtendedBits = 64;
inline constexpr int kMaxBits = 4096;

/// Exponents c of the 2^(c-p) tolerance factors used across the library.
/// Kept in one record so tests can pin them.
struct ToleranceConfig {
  int hermitian = 4;        // max|M - M*| <= 2^(c-p) max|M|
  int psd = 8;              // lambda_i >= -2^(c-p) lambda_max
  int residual = 12;        // eig/svd/least-squares residuals, cond2 singularity
  int sigma_ratio_half = 0; // svd switches to the Gram route below 2^(-p/2)
  int diagonalize = 16;     // ||V A V^-1 - D|| <= 2^(c-p) ||A|| cond(V)
  int pinv_cutoff = 16;     // steering pseudoinverse cutoff relative to sigma_max
  int resolve = 20;         // lambda_min resolved iff >= 2^(c-p) lambda_max
  double defect_cond = 1e8; // cond(V) above this flags a near-defective A
  int defect_recheck_bits = 256;
};

inline constexpr ToleranceConfig kTolerance{};

/// True iff `bits` names a supported backend: 53 (binary64) or [64, 4096].
inline bool valid_precision(int bits) {
  return bits == kNativeBits || (bits >= kMinExtendedBits && bits <= kMaxBits);
}

inline void check_precision(int bits) {
  require(valid_precision(bits), ErrorKind::InvalidArgument,
          "precision_bits must be 53 or in [64, 4096], got " + std::to_string(bits));
}

/// The escalation ladder: p doubled (53 -> 106 -> ...), capped at 4096.
inline int next_precision(int bits) { return bits >= kMaxBits ? kMaxBits : std::min(2 * bits, kMaxBits); }

template <class R>
struct RealTraits;

template <>
struct RealTraits<double> {
  static int bits() { return kNativeBits; }
  static double epsilon() { return std::numeric_limits<double>::epsilon(); }
  static double pow2(int e) { return std::ldexp(1.0, e); }
  static double to_double(double x) { return x; }
  static double pi() { return 3.14159265358979323846; }
};

template <>
struct RealTraits<BigFloat> {
  static int bits() { return working_precision(); }
  static BigFloat epsilon() { return ldexp(BigFloat(1), 1 - working_precision()); }
  static BigFloat pow2(int e) { return ldexp(BigFloat(1), e); }
  static double to_double(const BigFloat& x) { return x.to_double(); }
  static BigFloat pi() {
    BigFloat result;
    mpfr_const_pi(result.raw(), MPFR_RNDN);
    return result;
  }
};

/// 2^(c-p) at the active precision of R.
template <class R>
R tolerance(int c) {
  return RealTraits<R>::pow2(c - RealTraits<R>::bits());
}

template <class R>
double to_double(const R& x) {
  return RealTraits<R>::to_double(x);
}

/// Widens any real to a BigFloat at the current working precision.
inline BigFloat to_big(double x) { return BigFloat(x); }
inline BigFloat to_big(const BigFloat& x) {
  BigFloat result;
  mpfr_set(result.raw(), x.raw(), MPFR_RNDN);
  return result;
}

/// Runs `fn` with the scalar backend for `bits`: `fn(double{})` at 53 bits,
/// otherwise `fn(BigFloat{})` inside a PrecisionScope. `fn` is a generic
/// lambda whose return type must not depend on the backend.
template <class Fn>
decltype(auto) with_precision(int bits, Fn&& fn) {
  check_precision(bits);
  if (bits == kNativeBits) return fn(double{});
  PrecisionScope scope(bits);
  return fn(BigFloat{});
}

}  // namespace ctrlcap::numerics
