#pragma once

#include <mpfr.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ctrlcap::numerics {

/// Mantissa width used for every BigFloat constructed on the calling thread.
int working_precision() noexcept;

/// Sets the calling thread's working precision for its lifetime and restores
/// the previous value on exit. Values already constructed keep their width.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int previous_;
};

/// Owning RAII wrapper around an mpfr_t. Arithmetic results are rounded to
/// the thread's working precision; copies keep the source's precision.
class BigFloat {
 public:
  BigFloat();
  BigFloat(double value);  // NOLINT(google-explicit-constructor)
  BigFloat(int value);     // NOLINT(google-explicit-constructor)
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  BigFloat& operator=(double value);
  ~BigFloat();

  /// Parses a decimal (or "inf"/"nan") string at the given precision.
  static BigFloat from_string(std::string_view text, int bits);
  static BigFloat infinity();

  int precision() const noexcept;
  double to_double() const noexcept;
  /// log10|x| without overflow/underflow; -inf for zero.
  double log10_abs() const;
  /// Scientific notation with `digits` significant digits, e.g. "1.0206e-37".
  std::string to_string(int digits = 20) const;

  mpfr_ptr raw() noexcept { return value_; }
  mpfr_srcptr raw() const noexcept { return value_; }

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);
  BigFloat operator-() const;

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);

  friend bool operator==(const BigFloat& a, const BigFloat& b);
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);

  friend BigFloat sqrt(const BigFloat& x);
  friend BigFloat abs(const BigFloat& x);
  friend BigFloat exp(const BigFloat& x);
  friend BigFloat log(const BigFloat& x);
  friend BigFloat hypot(const BigFloat& a, const BigFloat& b);
  friend BigFloat ldexp(const BigFloat& x, int exponent);
  friend BigFloat pow(const BigFloat& x, int exponent);
  friend BigFloat cos(const BigFloat& x);
  friend BigFloat sin(const BigFloat& x);
  friend bool isfinite(const BigFloat& x);
  friend bool isnan(const BigFloat& x);

  /// acc += a * b without allocating a temporary.
  friend void add_product(BigFloat& acc, const BigFloat& a, const BigFloat& b);
  /// acc -= a * b without allocating a temporary.
  friend void sub_product(BigFloat& acc, const BigFloat& a, const BigFloat& b);

 private:
  mpfr_t value_;
};

std::ostream& operator<<(std::ostream& out, const BigFloat& x);

inline void add_product(double& acc, double a, double b) { acc += a * b; }
inline void sub_product(double& acc, double a, double b) { acc -= a * b; }

}  // namespace ctrlcap::numerics
