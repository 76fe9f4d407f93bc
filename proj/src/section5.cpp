#include <cmath>

#include "chain_common.hpp"

namespace gapcert {

Section5Constants section5_chain(const CertificateInputs& in, unsigned precision) {
  const detail::ChainContext cx(in, precision);
  const auto& n = cx.n;
  const auto& q = cx.q;
  const auto& mu = cx.mu;
  const auto& nu = cx.nu;
  const auto& d = cx.d;
  const auto& Th = cx.Th;
  const auto& p = cx.p;
  const auto& qh = cx.qh;
  const auto& one = cx.one;
  const LogValue two = cx.num(2.0);
  const LogValue four = cx.num(4.0);
  const double nd = in.n;

  Section5Constants s;
  s.p = cx.ex.p;
  s.qhat = cx.ex.qhat;
  const LogValue Vhat = cx.vhat();
  const LogValue pp1 = p + one;
  const LogValue K = cx.pow(Th, two / q) * cx.pow(d, two * n / q - two) / cx.pow(four, two * n / q);
  const LogValue b11 = cx.two_pow(cx.big(11.0));

  s.C5 = pp1 * pp1 * (b11 * (one + four * mu / nu) * K + four * Vhat / nu);
  s.C7 = pp1 * pp1 * (b11 * (one + mu / nu) * K + Vhat / nu);

  const LogValue X = cx.two_pow(cx.big(nd + 4)) * mu * Th +
                     cx.two_pow((n * (one + two / q) - cx.num(3.0)).to_big()) * Vhat *
                         cx.pow(Th, one / qh) * cx.pow(d, two * (one - n / q));
  s.C9 = cx.pow(Th, cx.num(0.5)) * cx.pow(nu, cx.num(-0.5)) * cx.pow(X, cx.num(0.5));
  const LogValue e = LogValue::from_log2(BigFloat(1L, precision) / BigFloat::ln2(precision));
  s.C10 = Th / (cx.two_pow(cx.big(nd + 1)) * e * s.C9);
  s.C11 = cx.two_pow(cx.big(nd + 1)) * Th;

  const LogValue pq = p - qh;
  s.C12 = four * pp1 * pp1 * p * p / (pq * pq) * Vhat / nu * (one + s.C10 / qh) +
          cx.two_pow((cx.num(11.0) - four * n / q).to_big()) * pp1 * pp1 * cx.pow(Th, two / q) *
              cx.pow(d, two * n / q - two) * (one + four * p * p / (pq * pq) * mu / nu) *
              cx.log_ratio_sq(s.C10);

  s.C13 = cx.harnack_product(s.C10, s.C5 * s.C7 / p, s.C12 * qh / p);
  s.C2 = cx.pow(s.C13, cx.num(4.0 * in.L / in.d));
  return s;
}

LogValue Section5Constants::as_c8() const {
  return C5 * C7 / LogValue::from_big(p);
}

LogValue Section5Constants::as_c9() const {
  return C12 * LogValue::from_big(qhat) / LogValue::from_big(p);
}

std::vector<std::pair<std::string, const LogValue*>> Section5Constants::entries() const {
  return {{"C5", &C5},   {"C7", &C7},   {"C9", &C9},   {"C10", &C10},
          {"C11", &C11}, {"C12", &C12}, {"C13", &C13}, {"C2", &C2}};
}

}  // namespace gapcert
