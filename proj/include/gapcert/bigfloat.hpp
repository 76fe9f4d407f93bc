#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace gapcert {

/// Binary floating point number with an MPFR significand and an unbounded
/// (GMP integer) exponent.
///
/// The value is `m * 2^e` with `m` in [1/2, 1) or zero. Arithmetic on the
/// significand rounds to nearest at the object's precision; the exponent is
/// exact. This is the storage type behind `LogValue`: the certificate's
/// constants need log-magnitudes like 2^(10^38), far outside MPFR's own
/// exponent range.
class BigFloat {
 public:
  static constexpr unsigned default_precision = 192;

  explicit BigFloat(unsigned precision = default_precision);
  BigFloat(double value, unsigned precision);
  BigFloat(long value, unsigned precision);
  BigFloat(int value, unsigned precision) : BigFloat(static_cast<long>(value), precision) {}
  BigFloat(const mpz_class& value, unsigned precision);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  /// Imports an ordinary MPFR number (must be finite).
  static BigFloat from_mpfr(mpfr_srcptr value, unsigned precision);

  static BigFloat pi(unsigned precision);
  static BigFloat ln2(unsigned precision);

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(mant_)); }
  int sign() const { return mpfr_sgn(mant_); }
  bool is_zero() const { return mpfr_zero_p(mant_) != 0; }

  /// Binary exponent `e` of the normalized form (zero for zero).
  const mpz_class& exponent() const { return exp_; }

  /// True when the value fits MPFR's default exponent range.
  bool fits_mpfr() const;
  /// Writes the value into `out` (already initialised). Throws precision_exhausted
  /// when the exponent does not fit.
  void to_mpfr(mpfr_ptr out) const;

  /// Nearest double; saturates to +-inf or +-0 outside the double range.
  double to_double() const;

  BigFloat operator-() const;
  BigFloat abs() const;

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  BigFloat& operator+=(const BigFloat& b) { return *this = *this + b; }
  BigFloat& operator-=(const BigFloat& b) { return *this = *this - b; }
  BigFloat& operator*=(const BigFloat& b) { return *this = *this * b; }
  BigFloat& operator/=(const BigFloat& b) { return *this = *this / b; }

  friend std::strong_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  /// Multiplies by 2^k exactly.
  BigFloat ldexp(const mpz_class& k) const;

  /// Largest integer not above the value. Requires enough precision to
  /// resolve the integer part (exponent <= precision).
  mpz_class floor_integer() const;

  /// Bit-for-bit identity (same precision, significand and exponent).
  bool identical(const BigFloat& other) const;

  /// Decimal scientific rendering "d.ddd...e+E" with an arbitrary-size exponent.
  std::string to_decimal(int digits) const;

 private:
  void normalize();

  mpfr_t mant_;
  mpz_class exp_;
};

BigFloat log2(const BigFloat& x);   // x > 0
BigFloat exp2(const BigFloat& x);   // throws precision_exhausted if |x| is unresolvable
BigFloat ln(const BigFloat& x);     // x > 0
BigFloat log10(const BigFloat& x);  // x > 0
BigFloat sqrt(const BigFloat& x);   // x >= 0, in MPFR range
BigFloat min(const BigFloat& a, const BigFloat& b);
BigFloat max(const BigFloat& a, const BigFloat& b);

}  // namespace gapcert
