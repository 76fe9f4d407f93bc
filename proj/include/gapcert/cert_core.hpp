#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gapcert/bigfloat.hpp"
#include "gapcert/log_value.hpp"

namespace gapcert {

/// Exponent of (d/2) in the potential-strength parameter. `literal` follows
/// the printed nq/2; `dimensional` uses 2n/q, matching the |B_{d/2}|^{2/q}
/// scaling of the semiboundedness constant.
enum class VhatVariant { literal, dimensional };

/// Scalar inputs of the gap certificate. Lengths and norms are already
/// measured; this struct never touches a grid.
struct CertificateInputs {
  int n = 2;
  double q = 4.0;
  double mu = 2.0;
  double nu = 1.0;
  double d = 1.0;
  double L = 1.0;
  double r0 = 0.125;
  double sup_local_V = 0.0;        // sup_a ||V||_{q/2, B_{d/4}(a)}, a in the d/4-neighbourhood of Omega-hat
  double sup_local_Vminus = 0.0;   // sup_a ||V-||_{q/2, B_{d/2}(a)}, a in Omega0
  double norm_Vminus_Omega0 = 0.0; // ||V-||_{q/2, Omega0}
  double vol_Omega0_d4 = 1.0;      // |Omega0 inflated by d/4|
  bool dirichlet_everywhere = false;
  VhatVariant variant = VhatVariant::literal;

  /// Throws invalid_input on violated invariants.
  void validate() const;
};

struct DerivedExponents {
  BigFloat theta_big;      // unit ball volume
  BigFloat theta_small;    // unit sphere area
  BigFloat theta_big_nm1;  // unit ball volume in dimension n-1
  BigFloat p;
  BigFloat qhat;
};

BigFloat unit_ball_volume(int n, unsigned precision = BigFloat::default_precision);
BigFloat unit_sphere_area(int n, unsigned precision = BigFloat::default_precision);
/// (p, qhat); throws invalid_input unless q > n >= 2.
std::pair<BigFloat, BigFloat> sobolev_pair(int n, double q, unsigned precision = BigFloat::default_precision);
DerivedExponents derived_exponents(int n, double q, unsigned precision = BigFloat::default_precision);

LogValue semibound_constant(const CertificateInputs& in, unsigned precision = BigFloat::default_precision);
LogValue potential_strength(const CertificateInputs& in, unsigned precision = BigFloat::default_precision);

/// Which term attains the minimum defining c1.
enum class C1Branch { first, d_over_8, r0 };
std::string_view to_string(C1Branch b);

struct ConstantChain {
  LogValue C1, Vhat, r1, alpha;
  LogValue c1, c2, c3, c4, c5, c6, c7, c8, c9;
  LogValue bound, C18, c11;
  C1Branch c1_branch = C1Branch::first;

  /// Flat (name, value) view in a fixed order, used for serialization.
  std::vector<std::pair<std::string, const LogValue*>> entries() const;
};

ConstantChain constant_chain(const CertificateInputs& in, unsigned precision = BigFloat::default_precision);
LogValue gap_bound(const CertificateInputs& in, unsigned precision = BigFloat::default_precision);

/// Harnack-section constants, evaluated from their own displays.
struct Section5Constants {
  LogValue C5, C7, C9, C10, C11, C12, C13, C2;
  BigFloat p, qhat;

  // The same quantities under the closed-form chain's names.
  LogValue as_c2() const { return C13; }
  LogValue as_c7() const { return C10; }
  LogValue as_c8() const;
  LogValue as_c9() const;

  std::vector<std::pair<std::string, const LogValue*>> entries() const;
};

Section5Constants section5_chain(const CertificateInputs& in, unsigned precision = BigFloat::default_precision);

/// |log2 a - log2 b| / max(|log2 a|, |log2 b|, 1): the relative log-domain
/// discrepancy used by the cross-checks.
double relative_log_difference(const LogValue& a, const LogValue& b);

}  // namespace gapcert
