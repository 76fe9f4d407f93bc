#include "gapcert/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

// Exponents up to this magnitude can be handed to MPFR's default range.
constexpr long kMpfrSafeExponent = (1L << 29);

unsigned max_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

// RAII scratch value.
struct Scratch {
  explicit Scratch(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  mpfr_t v;
};

}  // namespace

BigFloat::BigFloat(unsigned precision) {
  mpfr_init2(mant_, precision);
  mpfr_set_zero(mant_, 1);
}

BigFloat::BigFloat(double value, unsigned precision) : BigFloat(precision) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::invalid_input, "non-finite double converted to BigFloat");
  }
  mpfr_set_d(mant_, value, MPFR_RNDN);
  normalize();
}

BigFloat::BigFloat(long value, unsigned precision) : BigFloat(precision) {
  mpfr_set_si(mant_, value, MPFR_RNDN);
  normalize();
}

BigFloat::BigFloat(const mpz_class& value, unsigned precision) : BigFloat(precision) {
  mpfr_set_z(mant_, value.get_mpz_t(), MPFR_RNDN);
  normalize();
}

BigFloat::BigFloat(const BigFloat& other) : exp_(other.exp_) {
  mpfr_init2(mant_, mpfr_get_prec(other.mant_));
  mpfr_set(mant_, other.mant_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept : exp_(std::move(other.exp_)) {
  mpfr_init2(mant_, MPFR_PREC_MIN);
  mpfr_swap(mant_, other.mant_);
  other.exp_ = 0;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(mant_, mpfr_get_prec(other.mant_));
    mpfr_set(mant_, other.mant_, MPFR_RNDN);
    exp_ = other.exp_;
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) {
    mpfr_swap(mant_, other.mant_);
    exp_.swap(other.exp_);
  }
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(mant_); }

void BigFloat::normalize() {
  if (mpfr_nan_p(mant_) || mpfr_inf_p(mant_)) {
    throw Error(ErrorKind::precision_exhausted, "non-finite intermediate in extended-exponent arithmetic");
  }
  if (mpfr_zero_p(mant_)) {
    mpfr_set_zero(mant_, 1);
    exp_ = 0;
    return;
  }
  const mpfr_exp_t e = mpfr_get_exp(mant_);
  mpfr_set_exp(mant_, 0);
  exp_ += static_cast<long>(e);
}

BigFloat BigFloat::from_mpfr(mpfr_srcptr value, unsigned precision) {
  BigFloat out(precision);
  mpfr_set(out.mant_, value, MPFR_RNDN);
  out.normalize();
  return out;
}

BigFloat BigFloat::pi(unsigned precision) {
  BigFloat out(precision);
  mpfr_const_pi(out.mant_, MPFR_RNDN);
  out.normalize();
  return out;
}

BigFloat BigFloat::ln2(unsigned precision) {
  BigFloat out(precision);
  mpfr_const_log2(out.mant_, MPFR_RNDN);
  out.normalize();
  return out;
}

bool BigFloat::fits_mpfr() const {
  return is_zero() || (exp_ < kMpfrSafeExponent && exp_ > -kMpfrSafeExponent);
}

void BigFloat::to_mpfr(mpfr_ptr out) const {
  if (!fits_mpfr()) {
    throw Error(ErrorKind::precision_exhausted, "value outside MPFR exponent range");
  }
  mpfr_set(out, mant_, MPFR_RNDN);
  if (!is_zero()) mpfr_mul_2si(out, out, exp_.get_si(), MPFR_RNDN);
}

double BigFloat::to_double() const {
  if (is_zero()) return 0.0;
  const double m = mpfr_get_d(mant_, MPFR_RNDN);
  if (exp_ > 1100) return m > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  if (exp_ < -1200) return m > 0 ? 0.0 : -0.0;
  return std::ldexp(m, static_cast<int>(exp_.get_si()));
}

BigFloat BigFloat::operator-() const {
  BigFloat out(*this);
  mpfr_neg(out.mant_, out.mant_, MPFR_RNDN);
  return out;
}

BigFloat BigFloat::abs() const {
  BigFloat out(*this);
  mpfr_abs(out.mant_, out.mant_, MPFR_RNDN);
  return out;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  const unsigned prec = max_prec(a, b);
  if (a.is_zero() || b.is_zero()) {
    const BigFloat& nz = a.is_zero() ? b : a;
    BigFloat out(prec);
    mpfr_set(out.mant_, nz.mant_, MPFR_RNDN);
    out.exp_ = nz.exp_;
    return out;
  }
  const bool a_major = a.exp_ >= b.exp_;
  const BigFloat& hi = a_major ? a : b;
  const BigFloat& lo = a_major ? b : a;
  const mpz_class gap = hi.exp_ - lo.exp_;
  BigFloat out(prec);
  if (gap > static_cast<long>(prec) + 4) {
    mpfr_set(out.mant_, hi.mant_, MPFR_RNDN);
    out.exp_ = hi.exp_;
    return out;
  }
  Scratch shifted(mpfr_get_prec(lo.mant_));
  mpfr_mul_2si(shifted.v, lo.mant_, -gap.get_si(), MPFR_RNDN);
  mpfr_add(out.mant_, hi.mant_, shifted.v, MPFR_RNDN);
  out.exp_ = hi.exp_;
  out.normalize();
  return out;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) { return a + (-b); }

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat out(max_prec(a, b));
  if (a.is_zero() || b.is_zero()) return out;
  mpfr_mul(out.mant_, a.mant_, b.mant_, MPFR_RNDN);
  out.exp_ = a.exp_ + b.exp_;
  out.normalize();
  return out;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  if (b.is_zero()) {
    throw Error(ErrorKind::precision_exhausted, "division by zero in extended-exponent arithmetic");
  }
  BigFloat out(max_prec(a, b));
  if (a.is_zero()) return out;
  mpfr_div(out.mant_, a.mant_, b.mant_, MPFR_RNDN);
  out.exp_ = a.exp_ - b.exp_;
  out.normalize();
  return out;
}

std::strong_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  // Same nonzero sign: larger exponent means larger magnitude.
  int mag = 0;
  if (a.exp_ != b.exp_) {
    mag = a.exp_ > b.exp_ ? 1 : -1;
  } else {
    mag = mpfr_cmpabs(a.mant_, b.mant_);
    mag = (mag > 0) - (mag < 0);
  }
  const int cmp = sa > 0 ? mag : -mag;
  return cmp <=> 0;
}

BigFloat BigFloat::ldexp(const mpz_class& k) const {
  BigFloat out(*this);
  if (!out.is_zero()) out.exp_ += k;
  return out;
}

mpz_class BigFloat::floor_integer() const {
  if (is_zero()) return 0;
  const long prec = static_cast<long>(precision());
  if (exp_ <= 0) return sign() > 0 ? 0 : -1;
  const long shift = exp_ > prec ? prec : exp_.get_si();
  Scratch t(mpfr_get_prec(mant_));
  mpfr_mul_2si(t.v, mant_, shift, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t.v, MPFR_RNDD);
  if (exp_ > prec) {
    const mpz_class extra = exp_ - prec;
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), extra.get_ui());
  }
  return z;
}

bool BigFloat::identical(const BigFloat& other) const {
  return precision() == other.precision() && exp_ == other.exp_ &&
         mpfr_equal_p(mant_, other.mant_) && sign() == other.sign();
}

std::string BigFloat::to_decimal(int digits) const {
  if (is_zero()) return "0";
  // The integer part of log10 eats into the significand, so widen the
  // working precision by the size of the binary exponent.
  const unsigned prec = precision() + static_cast<unsigned>(mpz_sizeinbase(exp_.get_mpz_t(), 2)) + 16;
  Scratch wide(prec);
  ldexp(-exp_).abs().to_mpfr(wide.v);
  const BigFloat l10 = log10(BigFloat::from_mpfr(wide.v, prec).ldexp(exp_));
  const mpz_class k = l10.floor_integer();
  const BigFloat frac = l10 - BigFloat(k, prec);
  Scratch f(prec), m(prec), ten(prec);
  frac.to_mpfr(f.v);
  mpfr_set_ui(ten.v, 10, MPFR_RNDN);
  mpfr_pow(m.v, ten.v, f.v, MPFR_RNDN);  // in [1, 10)
  mpfr_exp_t e10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw(
      mpfr_get_str(nullptr, &e10, 10, static_cast<size_t>(digits), m.v, MPFR_RNDN), mpfr_free_str);
  const std::string ds(raw.get());
  const mpz_class exponent = k + static_cast<long>(e10) - 1;
  std::string out = sign() < 0 ? "-" : "";
  out += ds.substr(0, 1);
  if (ds.size() > 1) out += "." + ds.substr(1);
  out += exponent >= 0 ? "e+" : "e";
  out += exponent.get_str();
  return out;
}

BigFloat log2(const BigFloat& x) {
  if (x.sign() <= 0) {
    throw Error(ErrorKind::precision_exhausted, "log2 of a nonpositive value");
  }
  const unsigned prec = x.precision();
  // log2(m * 2^e) = log2(m) + e with m in [1/2, 1).
  Scratch mant(prec), lm(prec);
  x.ldexp(-x.exponent()).to_mpfr(mant.v);
  mpfr_log2(lm.v, mant.v, MPFR_RNDN);
  const BigFloat frac = BigFloat::from_mpfr(lm.v, prec);
  const BigFloat e(x.exponent(), prec);
  return e + frac;
}

BigFloat exp2(const BigFloat& x) {
  const unsigned prec = x.precision();
  if (x.is_zero()) return BigFloat(1L, prec);
  // Fewer than a handful of fractional bits means the result has no
  // meaningful significand left.
  if (x.exponent() > static_cast<long>(prec) - 8) {
    throw Error(ErrorKind::precision_exhausted,
                "exponent too large to resolve at precision " + std::to_string(prec));
  }
  const mpz_class k = x.floor_integer();
  const BigFloat frac = x - BigFloat(k, prec);
  Scratch f(prec), r(prec);
  frac.to_mpfr(f.v);
  mpfr_exp2(r.v, f.v, MPFR_RNDN);
  return BigFloat::from_mpfr(r.v, prec).ldexp(k);
}

BigFloat ln(const BigFloat& x) { return log2(x) * BigFloat::ln2(x.precision()); }

BigFloat log10(const BigFloat& x) {
  const unsigned prec = x.precision();
  Scratch two(prec), l(prec);
  mpfr_set_ui(two.v, 2, MPFR_RNDN);
  mpfr_log10(l.v, two.v, MPFR_RNDN);
  return log2(x) * BigFloat::from_mpfr(l.v, prec);
}

BigFloat sqrt(const BigFloat& x) {
  if (x.sign() < 0) {
    throw Error(ErrorKind::precision_exhausted, "square root of a negative value");
  }
  if (x.is_zero()) return x;
  const unsigned prec = x.precision();
  // sqrt(m 2^e): make the exponent even first.
  mpz_class e = x.exponent();
  const bool odd = mpz_odd_p(e.get_mpz_t()) != 0;
  if (odd) e += 1;
  Scratch m(prec), r(prec);
  x.ldexp(-e).to_mpfr(m.v);
  mpfr_sqrt(r.v, m.v, MPFR_RNDN);
  mpz_class half = e / 2;
  return BigFloat::from_mpfr(r.v, prec).ldexp(half);
}

BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }
BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

}  // namespace gapcert
