#pragma once

#include "gapcert/cert_core.hpp"

namespace gapcert::detail {

// Inputs lifted into log-domain values plus the formula pieces shared by the
// closed-form chain and the Harnack-constant path.
struct ChainContext {
  ChainContext(const CertificateInputs& in, unsigned precision);

  LogValue num(double x) const;
  BigFloat big(double x) const;
  LogValue two_pow(const BigFloat& e) const;
  LogValue pow(const LogValue& base, const LogValue& e) const;

  LogValue bracket() const;
  LogValue vhat() const;
  LogValue log_ratio_sq(const LogValue& z) const;
  LogValue harnack_product(const LogValue& z, const LogValue& a8, const LogValue& a9) const;

  CertificateInputs in;
  unsigned prec;
  DerivedExponents ex;
  LogValue n, q, mu, nu, d, Th, th, p, qh, one;
};

}  // namespace gapcert::detail
