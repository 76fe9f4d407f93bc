#include "gapcert/log_value.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

// log2(1 + s * 2^delta) for delta <= 0, s = +-1.
BigFloat log2_one_plus(const BigFloat& delta, int s) {
  const unsigned prec = delta.precision();
  const BigFloat cutoff(-static_cast<long>(prec) - 8, prec);
  if (delta < cutoff) return BigFloat(prec);
  const BigFloat one(1L, prec);
  const BigFloat t = exp2(delta);
  const BigFloat arg = s > 0 ? one + t : one - t;
  if (arg.is_zero()) {
    throw Error(ErrorKind::precision_exhausted, "exact cancellation in log-domain subtraction");
  }
  return log2(arg);
}

}  // namespace

LogValue::LogValue(unsigned precision) : log2_(precision) {}

LogValue LogValue::from_double(double x, unsigned precision) {
  return from_big(BigFloat(x, precision));
}

LogValue LogValue::from_big(const BigFloat& x) {
  LogValue out(x.precision());
  if (x.is_zero()) return out;
  out.sign_ = x.sign();
  out.log2_ = log2(x.abs());
  return out;
}

LogValue LogValue::from_log2(const BigFloat& l2, int sign) {
  LogValue out(l2.precision());
  out.sign_ = sign >= 0 ? 1 : -1;
  out.log2_ = l2;
  return out;
}

BigFloat LogValue::ln_abs() const { return log2_ * BigFloat::ln2(precision()); }

BigFloat LogValue::log10_abs() const {
  // log10(2) = 1 / log2(10)
  const unsigned prec = precision();
  return log2_ / log2(BigFloat(10L, prec));
}

BigFloat LogValue::to_big() const {
  if (sign_ == 0) return BigFloat(precision());
  const BigFloat mag = exp2(log2_);
  return sign_ > 0 ? mag : -mag;
}

double LogValue::to_double() const {
  if (sign_ == 0) return 0.0;
  const BigFloat lim(1100L, precision());
  if (log2_ > lim) return sign_ * std::numeric_limits<double>::infinity();
  if (log2_ < -lim) return sign_ > 0 ? 0.0 : -0.0;
  return to_big().to_double();
}

LogValue LogValue::operator-() const {
  LogValue out(*this);
  out.sign_ = -sign_;
  return out;
}

LogValue LogValue::abs() const {
  LogValue out(*this);
  if (out.sign_ != 0) out.sign_ = 1;
  return out;
}

LogValue operator*(const LogValue& a, const LogValue& b) {
  LogValue out(std::max(a.precision(), b.precision()));
  if (a.is_zero() || b.is_zero()) return out;
  out.sign_ = a.sign_ * b.sign_;
  out.log2_ = a.log2_ + b.log2_;
  return out;
}

LogValue operator/(const LogValue& a, const LogValue& b) {
  if (b.is_zero()) {
    throw Error(ErrorKind::precision_exhausted, "log-domain division by zero");
  }
  LogValue out(std::max(a.precision(), b.precision()));
  if (a.is_zero()) return out;
  out.sign_ = a.sign_ * b.sign_;
  out.log2_ = a.log2_ - b.log2_;
  return out;
}

LogValue operator+(const LogValue& a, const LogValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const bool a_major = a.log2_ >= b.log2_;
  const LogValue& hi = a_major ? a : b;
  const LogValue& lo = a_major ? b : a;
  const BigFloat delta = lo.log2_ - hi.log2_;
  if (hi.sign_ != lo.sign_ && delta.is_zero()) return LogValue(hi.precision());
  LogValue out(hi);
  out.log2_ = hi.log2_ + log2_one_plus(delta, hi.sign_ * lo.sign_);
  return out;
}

LogValue operator-(const LogValue& a, const LogValue& b) { return a + (-b); }

LogValue LogValue::pow(const BigFloat& e) const {
  if (e.is_zero()) return from_double(1.0, precision());
  if (sign_ <= 0) {
    throw Error(ErrorKind::precision_exhausted, "real power of a nonpositive log-domain value");
  }
  LogValue out(*this);
  out.log2_ = log2_ * e;
  return out;
}

bool operator<(const LogValue& a, const LogValue& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
  if (a.sign_ == 0) return false;
  return a.sign_ > 0 ? a.log2_ < b.log2_ : b.log2_ < a.log2_;
}

bool LogValue::identical(const LogValue& other) const {
  return sign_ == other.sign_ && log2_.identical(other.log2_);
}

std::string LogValue::log10_string(int digits) const {
  if (sign_ == 0) return "-inf";
  const BigFloat l = log10_abs();
  if (l.is_zero()) return "0";
  return l.to_decimal(digits);
}

std::string LogValue::render() const {
  if (sign_ == 0) return "x = 0";
  std::string s = render_log10(log10_abs());
  if (sign_ < 0) s = "-(" + s + ")";
  return s;
}

LogValue min(const LogValue& a, const LogValue& b) { return b < a ? b : a; }
LogValue max(const LogValue& a, const LogValue& b) { return a < b ? b : a; }

std::string render_log10(const BigFloat& log10_value, const std::string& name) {
  const std::string head = "log10(" + name + ")";
  const BigFloat mag = log10_value.abs();
  const BigFloat huge(1e300, log10_value.precision());
  if (mag < huge) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", log10_value.to_double());
    return head + " = " + buf;
  }
  const std::string e = log10(mag).to_decimal(10);
  return head + " ≈ " + (log10_value.sign() < 0 ? "-" : "") + "10^(" + e + ")";
}

}  // namespace gapcert
