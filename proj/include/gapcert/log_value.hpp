#pragma once

#include <string>

#include "gapcert/bigfloat.hpp"

namespace gapcert {

/// Signed number stored as `sign * 2^l` with `l` an extended-range BigFloat.
///
/// Products, quotients and real powers are exact up to the rounding of `l`.
/// Sums go through log-sum-exp; terms more than `precision + 8` binary orders
/// below the larger one are dropped, which bounds the relative error of a sum
/// by 2^-(precision) for the default 192-bit setting.
class LogValue {
 public:
  explicit LogValue(unsigned precision = BigFloat::default_precision);

  static LogValue from_double(double x, unsigned precision);
  static LogValue from_big(const BigFloat& x);
  /// 2^l2 with the given sign (+1 or -1).
  static LogValue from_log2(const BigFloat& l2, int sign = 1);

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  unsigned precision() const { return log2_.precision(); }
  /// log2 |x|; undefined (returns 0) for zero.
  const BigFloat& log2_abs() const { return log2_; }
  BigFloat ln_abs() const;
  BigFloat log10_abs() const;

  /// Converts back to a BigFloat; throws precision_exhausted if |x| needs an
  /// exponent that cannot be resolved.
  BigFloat to_big() const;
  /// Saturating conversion.
  double to_double() const;

  LogValue operator-() const;
  LogValue abs() const;
  friend LogValue operator*(const LogValue& a, const LogValue& b);
  friend LogValue operator/(const LogValue& a, const LogValue& b);
  friend LogValue operator+(const LogValue& a, const LogValue& b);
  friend LogValue operator-(const LogValue& a, const LogValue& b);

  /// |x|^e * sign; requires x > 0 unless e is zero.
  LogValue pow(const BigFloat& e) const;
  LogValue pow(double e) const { return pow(BigFloat(e, precision())); }

  friend bool operator<(const LogValue& a, const LogValue& b);
  friend bool operator>(const LogValue& a, const LogValue& b) { return b < a; }
  friend bool operator<=(const LogValue& a, const LogValue& b) { return !(b < a); }
  friend bool operator>=(const LogValue& a, const LogValue& b) { return !(a < b); }
  bool identical(const LogValue& other) const;

  /// "log10(x) = -M" style text; see render_log10().
  std::string render() const;
  /// log10 |x| as decimal text with `digits` significant digits.
  std::string log10_string(int digits = 20) const;

 private:
  int sign_ = 0;
  BigFloat log2_;
};

LogValue min(const LogValue& a, const LogValue& b);
LogValue max(const LogValue& a, const LogValue& b);

/// Human rendering of a log10 magnitude: "log10(x) = -M" when M fits a double,
/// else "log10(x) ~ -10^(E)" with E the log10 of |log10 x|.
std::string render_log10(const BigFloat& log10_value, const std::string& name = "x");

}  // namespace gapcert
