#include <cmath>

#include <doctest.h>

#include "gapcert/bigfloat.hpp"
#include "gapcert/log_value.hpp"

using namespace gapcert;

TEST_CASE("bigfloat basics") {
  const BigFloat a(3.0, 192), b(0.5, 192);
  CHECK((a + b).to_double() == 3.5);
  CHECK((a * b).to_double() == 1.5);
  CHECK((a / b).to_double() == 6.0);
  CHECK((a - b).to_double() == 2.5);
  CHECK(a.ldexp(mpz_class(10)).to_double() == 3072.0);
  CHECK(BigFloat(2.75, 192).floor_integer() == 2);
  CHECK(BigFloat(-2.25, 192).floor_integer() == -3);
  CHECK(BigFloat(1234.5, 192).to_decimal(5) == "1.2345e+3");
}

TEST_CASE("exponents beyond the MPFR range") {
  const BigFloat huge = BigFloat(1.0, 192).ldexp(mpz_class("1000000000000000000000000"));
  CHECK(!huge.fits_mpfr());
  const BigFloat l = log2(huge);
  CHECK(l.to_double() == doctest::Approx(1e24));
  CHECK((huge / huge).to_double() == 1.0);
}

TEST_CASE("exp2 and log2 are inverse") {
  for (double x : {-700.25, -1.5, 0.0, 0.3, 42.0}) {
    const BigFloat v(x, 192);
    CHECK((log2(exp2(v)) - v).abs().to_double() < 1e-50);
  }
}

TEST_CASE("log-domain arithmetic") {
  const LogValue a = LogValue::from_double(3.0, 192), b = LogValue::from_double(5.0, 192);
  CHECK((a + b).to_double() == doctest::Approx(8.0).epsilon(1e-15));
  CHECK((a - b).to_double() == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK((a * b).to_double() == doctest::Approx(15.0).epsilon(1e-15));
  CHECK((a / b).to_double() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(a.pow(2.0).to_double() == doctest::Approx(9.0).epsilon(1e-15));
  CHECK((a - a).is_zero());
  CHECK(a < b);
  CHECK(-b < -a);
}

TEST_CASE("sums drop negligible terms within the stated error") {
  const LogValue big = LogValue::from_log2(BigFloat(300.0, 192));
  const LogValue tiny = LogValue::from_log2(BigFloat(-300.0, 192));
  const LogValue s = big + tiny;
  const double rel = ((s - big) / big).to_double();
  CHECK(std::abs(rel) <= std::ldexp(1.0, -100));
}

TEST_CASE("rendering of log10 magnitudes") {
  CHECK(render_log10(BigFloat(-12.5, 192), "x") == "log10(x) = -12.5");
  const BigFloat deep = -BigFloat(1.0, 192).ldexp(mpz_class(2000));
  const std::string r = render_log10(deep, "alpha");
  CHECK(r.rfind("log10(alpha) ≈ -10^(", 0) == 0);
  CHECK(r.find("6.020599913e+2") != std::string::npos);
}
