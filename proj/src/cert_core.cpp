#include "gapcert/cert_core.hpp"

#include <cmath>

#include "gapcert/errors.hpp"
#include "chain_common.hpp"

namespace gapcert {

void CertificateInputs::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::invalid_input, what); };
  auto finite = [](double x) { return std::isfinite(x); };
  if (n < 2) fail("dimension n must be at least 2");
  if (!finite(q) || !(q > n)) fail("exponent q must exceed the dimension n");
  if (!finite(nu) || !(nu > 0)) fail("ellipticity constant nu must be positive");
  if (!finite(mu) || !(mu > nu)) fail("ellipticity constant mu must exceed nu");
  if (!finite(d) || !(d > 0)) fail("separation distance d must be positive");
  if (!finite(L) || !(L > 0)) fail("cylinder length L must be positive");
  if (!finite(r0) || !(r0 > 0) || r0 > d) fail("cylinder radius r0 must lie in (0, d]");
  if (!finite(sup_local_V) || sup_local_V < 0) fail("sup_local_V must be nonnegative");
  if (!finite(sup_local_Vminus) || sup_local_Vminus < 0) fail("sup_local_Vminus must be nonnegative");
  if (!finite(norm_Vminus_Omega0) || norm_Vminus_Omega0 < 0) fail("norm_Vminus_Omega0 must be nonnegative");
  if (!finite(vol_Omega0_d4) || !(vol_Omega0_d4 > 0)) fail("vol_Omega0_d4 must be positive");
}

BigFloat unit_ball_volume(int n, unsigned precision) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "unit ball volume needs n >= 1");
  // pi^(n/2) / Gamma(n/2 + 1)
  mpfr_t half_n, pw, g, pi;
  mpfr_inits2(precision, half_n, pw, g, pi, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_si(half_n, n, MPFR_RNDN);
  mpfr_div_2ui(half_n, half_n, 1, MPFR_RNDN);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_pow(pw, pi, half_n, MPFR_RNDN);
  mpfr_add_ui(g, half_n, 1, MPFR_RNDN);
  mpfr_gamma(g, g, MPFR_RNDN);
  mpfr_div(pw, pw, g, MPFR_RNDN);
  BigFloat out = BigFloat::from_mpfr(pw, precision);
  mpfr_clears(half_n, pw, g, pi, static_cast<mpfr_ptr>(nullptr));
  return out;
}

BigFloat unit_sphere_area(int n, unsigned precision) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "unit sphere area needs n >= 2");
  // theta_n = n * Theta_n
  return BigFloat(static_cast<long>(n), precision) * unit_ball_volume(n, precision);
}

std::pair<BigFloat, BigFloat> sobolev_pair(int n, double q, unsigned precision) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "dimension n must be at least 2");
  if (!(q > n)) throw Error(ErrorKind::invalid_input, "exponent q must exceed the dimension n");
  const BigFloat bq(q, precision);
  const BigFloat qhat = bq / (bq - BigFloat(2L, precision));
  const BigFloat p = n == 2 ? qhat + BigFloat(1L, precision)
                            : BigFloat(static_cast<long>(n), precision) /
                                  BigFloat(static_cast<long>(n - 2), precision);
  return {p, qhat};
}

DerivedExponents derived_exponents(int n, double q, unsigned precision) {
  auto [p, qhat] = sobolev_pair(n, q, precision);
  return DerivedExponents{unit_ball_volume(n, precision), unit_sphere_area(n, precision),
                          unit_ball_volume(n - 1, precision), p, qhat};
}

std::string_view to_string(C1Branch b) {
  switch (b) {
    case C1Branch::first: return "first";
    case C1Branch::d_over_8: return "d/8";
    case C1Branch::r0: return "r0";
  }
  return "first";
}

namespace detail {

ChainContext::ChainContext(const CertificateInputs& in_, unsigned precision)
    : in(in_), prec(precision), ex(derived_exponents(in_.n, in_.q, precision)) {
  in.validate();
  n = num(in.n);
  q = num(in.q);
  mu = num(in.mu);
  nu = num(in.nu);
  d = num(in.d);
  Th = LogValue::from_big(ex.theta_big);
  th = LogValue::from_big(ex.theta_small);
  p = LogValue::from_big(ex.p);
  qh = LogValue::from_big(ex.qhat);
  one = num(1.0);
}

LogValue ChainContext::num(double x) const { return LogValue::from_double(x, prec); }

BigFloat ChainContext::big(double x) const { return BigFloat(x, prec); }

LogValue ChainContext::two_pow(const BigFloat& e) const { return LogValue::from_log2(e); }

LogValue ChainContext::pow(const LogValue& base, const LogValue& e) const {
  if (base.is_zero()) {
    if (e.sign() > 0) return LogValue(prec);
    throw Error(ErrorKind::precision_exhausted, "nonpositive power of zero");
  }
  return base.pow(e.to_big());
}

LogValue ChainContext::bracket() const {
  // 8 nu / d^2 (dropped when the whole boundary is Dirichlet) plus the
  // V- contribution.
  const LogValue qn = q - n;
  LogValue local = pow(num(3.0), n * q / qn) * pow(num(2.0) * (p + one) / nu, n / qn) *
                   pow(num(in.sup_local_Vminus), q / qn);
  if (in.dirichlet_everywhere) return local;
  return num(8.0) * nu / (d * d) + local;
}

LogValue ChainContext::vhat() const {
  const LogValue E = in.variant == VhatVariant::literal ? n * q / num(2.0) : num(2.0) * n / q;
  LogValue v = num(in.sup_local_V) + pow(Th, num(2.0) / q) * pow(d / num(2.0), E) * bracket();
  if (v.is_zero()) {
    throw Error(ErrorKind::inconsistent_input,
                "potential strength vanishes although the hypotheses require it to be nonzero");
  }
  return v;
}

// Shared log_{p/qhat}(2 p^3 / (z qhat^2)) squared.
LogValue ChainContext::log_ratio_sq(const LogValue& z) const {
  const LogValue arg = num(2.0) * p * p * p / (z * qh * qh);
  const BigFloat l = arg.ln_abs() / (p / qh).ln_abs();
  return LogValue::from_big(l * l);
}

// Common Harnack product; `z` plays C10 (= c7), `a8` and `a9` the two
// grouped constants.
LogValue ChainContext::harnack_product(const LogValue& z, const LogValue& a8, const LogValue& a9) const {
  const LogValue pq = p - qh;
  const LogValue two = num(2.0);
  const BigFloat e2 = (p * qh / pq + (p * qh + qh * qh) / (pq * pq) -
                       two * (n - one) / z).to_big();
  LogValue out = two_pow(e2);
  out = out * pow(p / qh, p * p * qh / (z * pq * pq));
  out = out * pow(one + two * p * p / (qh * qh), qh / (two * pq));
  const LogValue tdn = Th * pow(d, n);
  out = out * max(pow(tdn, two / z), pow(tdn, (p + qh) / (z * qh)));
  out = out * max(pow(a8, qh / (two * pq)), pow(a8, qh * qh / (two * p * pq)));
  out = out * max(pow(a9, p * qh / (z * pq)), pow(a9, p * p / (z * pq)));
  return out;
}

}  // namespace detail

LogValue semibound_constant(const CertificateInputs& in, unsigned precision) {
  return detail::ChainContext(in, precision).bracket();
}

LogValue potential_strength(const CertificateInputs& in, unsigned precision) {
  return detail::ChainContext(in, precision).vhat();
}

ConstantChain constant_chain(const CertificateInputs& in, unsigned precision) {
  const detail::ChainContext cx(in, precision);
  const auto& n = cx.n;
  const auto& q = cx.q;
  const auto& mu = cx.mu;
  const auto& nu = cx.nu;
  const auto& d = cx.d;
  const auto& Th = cx.Th;
  const auto& th = cx.th;
  const auto& p = cx.p;
  const auto& qh = cx.qh;
  const auto& one = cx.one;
  const LogValue two = cx.num(2.0);
  const LogValue four = cx.num(4.0);
  const double nd = in.n;

  ConstantChain ch;
  ch.C1 = cx.bracket();
  ch.Vhat = cx.vhat();
  const LogValue qn = q - n;

  const LogValue r1_first =
      cx.pow(Th, -one / n) *
      cx.pow(nu / (cx.num(12.0) * (p + one) * (p + one) * ch.Vhat), q / (two * qn));
  ch.r1 = min(r1_first, d / four);

  ch.c6 = cx.num(9.0) * cx.two_pow(cx.big(2 * nd + 9)) * cx.pow(Th, (one - q) / q) / n *
          (th + one) * mu / nu;
  ch.c5 = max(cx.two_pow(cx.big(2 * nd + 1)) / Th,
              cx.pow(four, q * q * n * n / (qn * qn)) * cx.pow(ch.c6, q * n / qn));
  ch.c4 = cx.num(3.0) + cx.num(81.0) * cx.two_pow(cx.big(nd + 9)) * (th + one) * (th + one) /
                            (n * n) * mu * mu / (nu * nu) *
                            cx.pow(ch.c5, two * (n - one) / n);

  // alpha = min{-log_4(1 - 2^-c4), 1 - n/q}
  const BigFloat c4 = ch.c4.to_big();
  LogValue alpha_first(precision);
  const LogValue ln4 = LogValue::from_big(BigFloat::ln2(precision) * BigFloat(2L, precision));
  if (c4 > BigFloat(64L, precision)) {
    // -ln(1-x) = x (1 + x/2 + ...), x = 2^-c4; the tail is below 2^-c4 relative.
    const LogValue x = cx.two_pow(-c4);
    alpha_first = x * (one + x / two) / ln4;
  } else {
    mpfr_t xm, lm;
    mpfr_inits2(precision, xm, lm, static_cast<mpfr_ptr>(nullptr));
    (-c4).to_mpfr(xm);
    mpfr_exp2(xm, xm, MPFR_RNDN);
    mpfr_neg(xm, xm, MPFR_RNDN);
    mpfr_log1p(lm, xm, MPFR_RNDN);
    mpfr_neg(lm, lm, MPFR_RNDN);
    alpha_first = LogValue::from_big(BigFloat::from_mpfr(lm, precision)) / ln4;
    mpfr_clears(xm, lm, static_cast<mpfr_ptr>(nullptr));
  }
  ch.alpha = min(alpha_first, one - n / q);

  ch.c3 = cx.pow(four, ch.alpha) *
          max(two, cx.two_pow(c4 + BigFloat(2L, precision)) * nu /
                       (cx.num(9.0) * cx.pow(cx.num(6.0), cx.num(0.5)) * mu * (p + one) *
                        cx.pow(Th, one / n)));

  const LogValue X = cx.two_pow(cx.big(nd + 4)) * mu * Th +
                     cx.two_pow((n * (one + two / q) - cx.num(3.0)).to_big()) * ch.Vhat *
                         cx.pow(Th, one / qh) * cx.pow(d, two * (one - n / q));
  const LogValue e = LogValue::from_log2(BigFloat(1L, precision) / BigFloat::ln2(precision));
  ch.c7 = cx.pow(Th, cx.num(0.5)) * cx.pow(nu, cx.num(0.5)) /
          (cx.two_pow(cx.big(nd + 1)) * e) * cx.pow(X, cx.num(-0.5));

  const LogValue K = cx.pow(Th, two / q) * cx.pow(d, two * n / q - two) / cx.pow(four, two * n / q);
  const LogValue b11 = cx.two_pow(cx.big(11.0));
  const LogValue pp1 = p + one;
  ch.c8 = cx.pow(pp1, four) / p * (b11 * (one + four * mu / nu) * K + four * ch.Vhat / nu) *
          (b11 * (one + mu / nu) * K + ch.Vhat / nu);

  const LogValue pq = p - qh;
  ch.c9 = four * pp1 * pp1 * p * qh * ch.Vhat / (pq * pq * nu) * (one + ch.c7 / qh) +
          cx.two_pow((cx.num(11.0) - four * n / q).to_big()) * pp1 * pp1 * qh *
              cx.pow(Th, two / q) * cx.pow(d, two * n / q - two) *
              (one / p + four * p / (pq * pq) * mu / nu) * cx.log_ratio_sq(ch.c7);

  ch.c2 = cx.harnack_product(ch.c7, ch.c8, ch.c9);

  // c1 = min{ r1 (3 c3 c2^(8L/d))^(-1/alpha), d/8, r0 }
  const LogValue pw = cx.num(8.0 * in.L / in.d);
  const LogValue c2pw = cx.pow(ch.c2, pw);
  const LogValue first = ch.r1 * cx.pow(cx.num(3.0) * ch.c3 * c2pw, -(one / ch.alpha));
  const LogValue d8 = d / cx.num(8.0);
  const LogValue r0 = cx.num(in.r0);
  ch.c1 = first;
  ch.c1_branch = C1Branch::first;
  if (d8 < ch.c1) {
    ch.c1 = d8;
    ch.c1_branch = C1Branch::d_over_8;
  }
  if (r0 < ch.c1) {
    ch.c1 = r0;
    ch.c1_branch = C1Branch::r0;
  }

  const LogValue den_v = cx.pow(pp1 / nu, n / qn) * cx.pow(cx.num(in.norm_Vminus_Omega0), q / qn) +
                         four * mu / (ch.r1 * ch.r1);
  const LogValue vol = cx.num(in.vol_Omega0_d4);
  ch.bound = LogValue::from_big(cx.ex.theta_big_nm1) * cx.pow(ch.c1, n - one) * nu /
             (cx.num(9.0) * cx.num(in.L) * vol * den_v * c2pw);

  ch.C18 = (ch.C1 + four * mu / (ch.r1 * ch.r1)) * vol;
  ch.c11 = cx.num(8.0) / d * (one + (n - one) / ch.alpha) * LogValue::from_big(ch.c2.ln_abs());

  if (ch.bound.sign() <= 0) {
    throw Error(ErrorKind::precision_exhausted, "gap bound lost its sign");
  }
  return ch;
}

LogValue gap_bound(const CertificateInputs& in, unsigned precision) {
  return constant_chain(in, precision).bound;
}

std::vector<std::pair<std::string, const LogValue*>> ConstantChain::entries() const {
  return {{"C1", &C1},   {"Vhat", &Vhat}, {"r1", &r1}, {"alpha", &alpha}, {"c1", &c1},
          {"c2", &c2},   {"c3", &c3},     {"c4", &c4}, {"c5", &c5},       {"c6", &c6},
          {"c7", &c7},   {"c8", &c8},     {"c9", &c9}, {"C18", &C18},     {"c11", &c11},
          {"bound", &bound}};
}

double relative_log_difference(const LogValue& a, const LogValue& b) {
  if (a.sign() != b.sign()) return 1.0;
  if (a.is_zero()) return 0.0;
  const BigFloat diff = (a.log2_abs() - b.log2_abs()).abs();
  const BigFloat scale = max(max(a.log2_abs().abs(), b.log2_abs().abs()), BigFloat(1L, a.precision()));
  return (diff / scale).to_double();
}

}  // namespace gapcert
