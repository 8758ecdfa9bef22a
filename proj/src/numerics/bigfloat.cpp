#include "ctrlcap/numerics/bigfloat.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ctrlcap/numerics/error.hpp"

namespace ctrlcap::numerics {
namespace {

thread_local int g_working_bits = 128;

// Scratch register for add_product; resized lazily to the working precision.
struct Scratch {
  Scratch() { mpfr_init2(value, 128); }
  ~Scratch() { mpfr_clear(value); }
  mpfr_ptr get() {
    if (mpfr_get_prec(value) != g_working_bits) mpfr_set_prec(value, g_working_bits);
    return value;
  }
  mpfr_t value;
};

thread_local Scratch g_scratch;

}  // namespace

int working_precision() noexcept { return g_working_bits; }

PrecisionScope::PrecisionScope(int bits) : previous_(g_working_bits) {
  require(bits >= MPFR_PREC_MIN && bits <= 1 << 16, ErrorKind::InvalidArgument,
          "precision out of range: " + std::to_string(bits));
  g_working_bits = bits;
}

PrecisionScope::~PrecisionScope() { g_working_bits = previous_; }

BigFloat::BigFloat() {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value) {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(int value) {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat& BigFloat::operator=(double value) {
  mpfr_set_d(value_, value, MPFR_RNDN);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat BigFloat::from_string(std::string_view text, int bits) {
  PrecisionScope scope(bits);
  BigFloat result;
  std::string buffer(text);
  if (mpfr_set_str(result.value_, buffer.c_str(), 10, MPFR_RNDN) != 0) {
    // mpfr_set_str returns nonzero for inexact parses too; only reject
    // strings that did not parse at all.
    char* end = nullptr;
    mpfr_strtofr(result.value_, buffer.c_str(), &end, 10, MPFR_RNDN);
    require(end != nullptr && *end == '\0' && end != buffer.c_str(), ErrorKind::ParseError,
            "not a decimal number: " + buffer);
  }
  return result;
}

BigFloat BigFloat::infinity() {
  BigFloat result;
  mpfr_set_inf(result.value_, 1);
  return result;
}

int BigFloat::precision() const noexcept { return static_cast<int>(mpfr_get_prec(value_)); }

double BigFloat::to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }

double BigFloat::log10_abs() const {
  if (mpfr_zero_p(value_)) return -HUGE_VAL;
  if (mpfr_inf_p(value_)) return HUGE_VAL;
  mpfr_t tmp;
  mpfr_init2(tmp, 64);
  mpfr_abs(tmp, value_, MPFR_RNDN);
  mpfr_log10(tmp, tmp, MPFR_RNDN);
  const double result = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return result;
}

std::string BigFloat::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (digits < 1) digits = 1;
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Re", digits - 1, value_);
  std::string result(buffer);
  mpfr_free_str(buffer);
  return result;
}

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::operator-() const {
  BigFloat result;
  mpfr_neg(result.value_, value_, MPFR_RNDN);
  return result;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat result;
  mpfr_add(result.value_, a.value_, b.value_, MPFR_RNDN);
  return result;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat result;
  mpfr_sub(result.value_, a.value_, b.value_, MPFR_RNDN);
  return result;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat result;
  mpfr_mul(result.value_, a.value_, b.value_, MPFR_RNDN);
  return result;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat result;
  mpfr_div(result.value_, a.value_, b.value_, MPFR_RNDN);
  return result;
}

bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigFloat sqrt(const BigFloat& x) {
  BigFloat result;
  mpfr_sqrt(result.value_, x.value_, MPFR_RNDN);
  return result;
}

BigFloat abs(const BigFloat& x) {
  BigFloat result;
  mpfr_abs(result.value_, x.value_, MPFR_RNDN);
  return result;
}

BigFloat exp(const BigFloat& x) {
  BigFloat result;
  mpfr_exp(result.value_, x.value_, MPFR_RNDN);
  return result;
}

BigFloat log(const BigFloat& x) {
  BigFloat result;
  mpfr_log(result.value_, x.value_, MPFR_RNDN);
  return result;
}

BigFloat hypot(const BigFloat& a, const BigFloat& b) {
  BigFloat result;
  mpfr_hypot(result.value_, a.value_, b.value_, MPFR_RNDN);
  return result;
}

BigFloat ldexp(const BigFloat& x, int exponent) {
  BigFloat result;
  mpfr_mul_2si(result.value_, x.value_, exponent, MPFR_RNDN);
  return result;
}

BigFloat pow(const BigFloat& x, int exponent) {
  BigFloat result;
  mpfr_pow_si(result.value_, x.value_, exponent, MPFR_RNDN);
  return result;
}

BigFloat cos(const BigFloat& x) {
  BigFloat result;
  mpfr_cos(result.value_, x.value_, MPFR_RNDN);
  return result;
}

BigFloat sin(const BigFloat& x) {
  BigFloat result;
  mpfr_sin(result.value_, x.value_, MPFR_RNDN);
  return result;
}

bool isfinite(const BigFloat& x) { return mpfr_number_p(x.value_) != 0; }

bool isnan(const BigFloat& x) { return mpfr_nan_p(x.value_) != 0; }

void add_product(BigFloat& acc, const BigFloat& a, const BigFloat& b) {
  mpfr_ptr tmp = g_scratch.get();
  mpfr_mul(tmp, a.value_, b.value_, MPFR_RNDN);
  mpfr_add(acc.value_, acc.value_, tmp, MPFR_RNDN);
}

void sub_product(BigFloat& acc, const BigFloat& a, const BigFloat& b) {
  mpfr_ptr tmp = g_scratch.get();
  mpfr_mul(tmp, a.value_, b.value_, MPFR_RNDN);
  mpfr_sub(acc.value_, acc.value_, tmp, MPFR_RNDN);
}

std::ostream& operator<<(std::ostream& out, const BigFloat& x) { return out << x.to_string(17); }

}  // namespace ctrlcap::numerics
