#pragma once

#include <cmath>
#include <string>

#include <gmpxx.h>

#include "gapcert/cert_core.hpp"

namespace gapcert::test {

/// Reference certificate inputs shared by the cert-core tests.
inline CertificateInputs p0_inputs() {
  CertificateInputs in;
  in.n = 2;
  in.q = 4;
  in.mu = 2;
  in.nu = 1;
  in.d = 1;
  in.L = 4;
  in.r0 = 0.125;
  in.sup_local_V = 1;
  in.sup_local_Vminus = 1;
  in.norm_Vminus_Omega0 = 1;
  in.vol_Omega0_d4 = 10;
  in.dirichlet_everywhere = false;
  in.variant = VhatVariant::literal;
  return in;
}

/// Compares two decimal strings "m e E" where E may exceed any machine
/// integer. Mantissas are compared in GMP arithmetic to relative `rel`.
inline bool decimal_close(const std::string& a, const std::string& b, double rel) {
  // value = sign * 0.D * 10^E with D free of leading zeros
  struct Dec {
    int sign = 1;
    std::string digits;
    mpz_class exp;
  };
  auto parse = [](const std::string& s) {
    Dec d;
    const auto p = s.find_first_of("eE");
    std::string mant = s.substr(0, p);
    d.exp = p == std::string::npos ? mpz_class(0) : mpz_class(s.substr(p + 1)[0] == '+' ? s.substr(p + 2) : s.substr(p + 1));
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      d.sign = mant[0] == '-' ? -1 : 1;
      mant = mant.substr(1);
    }
    const auto dot = mant.find('.');
    long int_digits = dot == std::string::npos ? static_cast<long>(mant.size()) : static_cast<long>(dot);
    if (dot != std::string::npos) mant.erase(dot, 1);
    std::size_t lead = 0;
    while (lead < mant.size() && mant[lead] == '0') ++lead;
    d.digits = mant.substr(lead);
    d.exp += int_digits - static_cast<long>(lead);
    return d;
  };
  const Dec x = parse(a), y = parse(b);
  if (x.digits.empty() || y.digits.empty()) return x.digits.empty() && y.digits.empty();
  if (x.sign != y.sign) return false;
  const mpz_class shift = x.exp - y.exp;
  if (abs(shift) > 1) return false;
  auto frac = [](const std::string& digits) {
    mpf_class v(0, 512);
    v = mpf_class(mpz_class(digits), 512);
    mpf_class ten(10, 512);
    for (std::size_t i = 0; i < digits.size(); ++i) v /= ten;
    return v;
  };
  mpf_class u = frac(x.digits), w = frac(y.digits);
  if (shift == 1) u *= 10;
  if (shift == -1) w *= 10;
  const mpf_class diff = abs(u - w), scale = u > w ? u : w;
  return diff <= mpf_class(rel, 512) * scale;
}

}  // namespace gapcert::test
