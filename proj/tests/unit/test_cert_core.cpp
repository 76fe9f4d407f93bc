#include <cmath>
#include <map>
#include <random>

#include <doctest.h>

#include "../oracle_values.hpp"
#include "../support.hpp"
#include "gapcert/cert_core.hpp"
#include "gapcert/errors.hpp"

using namespace gapcert;
using gapcert::test::decimal_close;
using gapcert::test::p0_inputs;

namespace {

double as_double(const BigFloat& x) { return x.to_double(); }

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::config_error;
}

}  // namespace

TEST_CASE("unit ball volumes and sphere areas") {
  CHECK(as_double(unit_ball_volume(1)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(as_double(unit_ball_volume(2)) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(as_double(unit_ball_volume(3)) == doctest::Approx(4 * M_PI / 3).epsilon(1e-15));
  CHECK(as_double(unit_sphere_area(2)) == doctest::Approx(2 * M_PI).epsilon(1e-15));
  CHECK(as_double(unit_sphere_area(3)) == doctest::Approx(4 * M_PI).epsilon(1e-15));
  CHECK(as_double(unit_sphere_area(4)) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-15));
  CHECK(kind_of([] { unit_ball_volume(0); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { unit_sphere_area(1); }) == ErrorKind::invalid_input);
}

TEST_CASE("sobolev pair") {
  auto pq = [](int n, double q) {
    auto [p, qh] = sobolev_pair(n, q);
    return std::pair{p.to_double(), qh.to_double()};
  };
  CHECK(pq(3, 4) == std::pair{3.0, 2.0});
  CHECK(pq(2, 4) == std::pair{3.0, 2.0});
  auto [p, qh] = pq(4, 8);
  CHECK(p == doctest::Approx(2.0));
  CHECK(qh == doctest::Approx(4.0 / 3));
  CHECK(kind_of([] { sobolev_pair(3, 3); }) == ErrorKind::invalid_input);
}

TEST_CASE("semiboundedness constant") {
  CertificateInputs in = p0_inputs();
  in.sup_local_Vminus = 0;
  in.dirichlet_everywhere = true;
  CHECK(semibound_constant(in).is_zero());

  in.dirichlet_everywhere = false;
  in.d = 2;
  CHECK(semibound_constant(in).to_double() == doctest::Approx(2.0).epsilon(1e-15));

  in = p0_inputs();
  CHECK(decimal_close(semibound_constant(in).log10_string(25), test::oracle::p0_chain[0].log10, 1e-20));
}

TEST_CASE("potential strength") {
  CertificateInputs in = p0_inputs();
  in.sup_local_V = in.sup_local_Vminus = in.norm_Vminus_Omega0 = 0;
  in.d = 2;
  for (auto v : {VhatVariant::literal, VhatVariant::dimensional}) {
    in.variant = v;
    CHECK(potential_strength(in).to_double() == doctest::Approx(2 * std::sqrt(M_PI)).epsilon(1e-14));
  }
  in.dirichlet_everywhere = true;
  CHECK(kind_of([&] { potential_strength(in); }) == ErrorKind::inconsistent_input);

  CHECK(decimal_close(potential_strength(p0_inputs()).log10_string(25), test::oracle::p0_chain[1].log10, 1e-20));
}

TEST_CASE("reference chain matches the transcription oracle") {
  const ConstantChain ch = constant_chain(p0_inputs());
  std::map<std::string, const LogValue*> got;
  for (const auto& [name, v] : ch.entries()) got[name] = v;
  for (const auto& e : test::oracle::p0_chain) {
    INFO(e.name);
    REQUIRE(got.count(e.name));
    // c1 and the bound carry a ~2^126 integer part in log2; 192 bits leave
    // about 66 fractional bits, i.e. ~1e-19 relative.
    CHECK(decimal_close(got[e.name]->log10_string(25), e.log10, 1e-18));
  }
  CHECK(ch.c1_branch == C1Branch::first);

  const Section5Constants s5 = section5_chain(p0_inputs());
  std::map<std::string, const LogValue*> g5;
  for (const auto& [name, v] : s5.entries()) g5[name] = v;
  for (const auto& e : test::oracle::p0_section5) {
    INFO(e.name);
    CHECK(decimal_close(g5[e.name]->log10_string(25), e.log10, 1e-20));
  }
}

TEST_CASE("wider significand reproduces the oracle's printed digits") {
  CHECK(gap_bound(p0_inputs(), 256).log10_string(20) == test::oracle::p0_bound_20);
}

TEST_CASE("harnack-path identities") {
  CertificateInputs in = p0_inputs();
  const Section5Constants s5 = section5_chain(in);
  CHECK(s5.C11.to_double() == doctest::Approx(8 * M_PI).epsilon(1e-15));
  in.L = in.d;
  const Section5Constants s = section5_chain(in);
  const BigFloat four(4L, s.C13.precision());
  CHECK(relative_log_difference(s.C2, s.C13.pow(four)) < 1e-50);

  const ConstantChain ch = constant_chain(p0_inputs());
  CHECK(relative_log_difference(ch.c2, s5.as_c2()) < 1e-10);
  CHECK(relative_log_difference(ch.c7, s5.as_c7()) < 1e-10);
  CHECK(relative_log_difference(ch.c8, s5.as_c8()) < 1e-10);
  CHECK(relative_log_difference(ch.c9, s5.as_c9()) < 1e-10);
}

TEST_CASE("cross-path agreement on random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    CertificateInputs in;
    in.n = 2;
    in.q = 3.5 + 6 * U(rng);
    in.nu = 0.1 + 5 * U(rng);
    in.mu = in.nu * (1.1 + 10 * U(rng));
    in.d = 0.5 + 4 * U(rng);
    in.L = in.d * (1 + 5 * U(rng));
    in.r0 = in.d * (0.05 + 0.9 * U(rng));
    in.sup_local_V = 0.1 + 10 * U(rng);
    in.sup_local_Vminus = 10 * U(rng);
    in.norm_Vminus_Omega0 = 10 * U(rng);
    in.vol_Omega0_d4 = 0.5 + 20 * U(rng);
    in.dirichlet_everywhere = U(rng) < 0.5;
    const ConstantChain ch = constant_chain(in, 512);
    const Section5Constants s5 = section5_chain(in, 512);
    CHECK(relative_log_difference(ch.c2, s5.as_c2()) < 1e-10);
    CHECK(relative_log_difference(ch.c7, s5.as_c7()) < 1e-10);
    CHECK(relative_log_difference(ch.c8, s5.as_c8()) < 1e-10);
    CHECK(relative_log_difference(ch.c9, s5.as_c9()) < 1e-10);
  }
}

TEST_CASE("scale invariance of the bound") {
  for (auto v : {VhatVariant::literal, VhatVariant::dimensional}) {
    CertificateInputs in = p0_inputs();
    in.variant = v;
    const LogValue b = gap_bound(in);
    for (double k : {1e-3, 1e2, 1e5}) {
      CertificateInputs s = in;
      for (double* x : {&s.mu, &s.nu, &s.sup_local_V, &s.sup_local_Vminus, &s.norm_Vminus_Omega0}) *x *= k;
      CHECK(relative_log_difference(gap_bound(s), b) <= 1e-9);
    }
  }
}

TEST_CASE("bound is monotone in the unfavourable inputs") {
  const LogValue b = gap_bound(p0_inputs());
  CHECK(b.sign() > 0);
  for (int which = 0; which < 5; ++which) {
    CertificateInputs in = p0_inputs();
    double* fields[] = {&in.L, &in.sup_local_V, &in.sup_local_Vminus, &in.norm_Vminus_Omega0, &in.vol_Omega0_d4};
    *fields[which] *= 2;
    INFO(which);
    // log2 of the bound is of order 10^(10^37) here; a factor 2 in the V- norm
    // or the volume lies far below any significand and cannot be resolved.
    if (which < 3) CHECK(gap_bound(in) < b);
    else CHECK(gap_bound(in) <= b);
  }
}

TEST_CASE("ranges of the chain") {
  const CertificateInputs in = p0_inputs();
  const ConstantChain ch = constant_chain(in);
  const unsigned prec = ch.alpha.precision();
  CHECK(ch.c2 >= LogValue::from_double(1, prec));
  CHECK(ch.alpha.sign() > 0);
  CHECK(ch.alpha <= LogValue::from_double(1 - in.n / in.q, prec));
  CHECK(ch.r1 <= LogValue::from_double(in.d / 4, prec));
  CHECK(ch.c1 <= LogValue::from_double(std::min(in.d / 8, in.r0), prec));
  CHECK(ch.c11.sign() > 0);
}

TEST_CASE("alpha follows the series branch for large c4") {
  const ConstantChain ch = constant_chain(p0_inputs());
  REQUIRE(ch.c4 > LogValue::from_double(100, 192));
  // log2(alpha) = -c4 - log2(ln 4) up to 2^-c4.
  const BigFloat c4 = ch.c4.to_big();
  const BigFloat expected = -c4 - log2(ln(BigFloat(4L, 192)));
  const BigFloat err = (ch.alpha.log2_abs() - expected).abs();
  CHECK(err.to_double() <= 1e-40 * c4.to_double());
}

TEST_CASE("dirichlet toggle never lowers the bound") {
  CertificateInputs in = p0_inputs();
  const LogValue mixed = gap_bound(in);
  in.dirichlet_everywhere = true;
  CHECK(gap_bound(in) >= mixed);
}

TEST_CASE("determinism") {
  const ConstantChain a = constant_chain(p0_inputs());
  const ConstantChain b = constant_chain(p0_inputs());
  const auto ea = a.entries(), eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(ea[i].second->identical(*eb[i].second));
}

TEST_CASE("input validation") {
  auto bad = [](auto mutate) {
    CertificateInputs in = p0_inputs();
    mutate(in);
    return kind_of([&] { in.validate(); });
  };
  CHECK(bad([](CertificateInputs& in) { in.nu = in.mu; }) == ErrorKind::invalid_input);
  CHECK(bad([](CertificateInputs& in) { in.q = 2; }) == ErrorKind::invalid_input);
  CHECK(bad([](CertificateInputs& in) { in.n = 1; }) == ErrorKind::invalid_input);
  CHECK(bad([](CertificateInputs& in) { in.r0 = 2 * in.d; }) == ErrorKind::invalid_input);
  CHECK(bad([](CertificateInputs& in) { in.vol_Omega0_d4 = 0; }) == ErrorKind::invalid_input);
  CHECK(bad([](CertificateInputs& in) { in.sup_local_V = -1; }) == ErrorKind::invalid_input);
}

TEST_CASE("unresolvable exponents raise precision_exhausted") {
  CertificateInputs in = p0_inputs();
  in.n = 3;
  in.q = 9;
  in.mu = 3;
  CHECK(kind_of([&] { constant_chain(in, 192); }) == ErrorKind::precision_exhausted);
  CHECK(gap_bound(in, 512).sign() > 0);
}
