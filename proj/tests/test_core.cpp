#include <doctest.h>

#include <hardy/core.hpp>
#include <hardy/error.hpp>

#include <cmath>
#include <limits>

#include "support.hpp"

using namespace hardy;

namespace {

ErrorCode code_of(double p, double a, double l) {
  try {
    validate_params(p, a, l);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted");
  return ErrorCode::Config;
}

}  // namespace

TEST_CASE("sharp constant values") {
  CHECK(sharp_constant(validate_params(2, 0, 0)).value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(sharp_constant(validate_params(3, 0, 0)).value - 8.0 / 27.0) < 1e-15);
  CHECK(std::abs(sharp_constant(validate_params(3, -1, 5)).value - 125.0 / 27.0) < 1e-13);
  CHECK(std::abs(sharp_constant(validate_params(1.5, 0, 0)).value - std::pow(1.0 / 3.0, 1.5)) <
        1e-15);
}

TEST_CASE("rejected parameters") {
  CHECK(code_of(2, 0.5, 0) == ErrorCode::CriticalExponent);
  CHECK(code_of(2, 0.75, 0) == ErrorCode::CriticalExponent);
  CHECK(code_of(1, 0, 0) == ErrorCode::BadExponent);
  CHECK(code_of(0.5, -3, 0) == ErrorCode::BadExponent);
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of(nan, 0, 0) == ErrorCode::NonFinite);
  CHECK(code_of(2, inf, 0) == ErrorCode::NonFinite);
  CHECK(code_of(2, 0, -inf) == ErrorCode::NonFinite);
}

TEST_CASE("critical line is rejected with no slack") {
  test::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    double p = g.uniform(1.0001, 8.0);
    double crit = 1.0 - 1.0 / p;
    CHECK(code_of(p, crit, 0) == ErrorCode::CriticalExponent);
    CHECK(code_of(p, std::nextafter(crit, 10.0), 0) == ErrorCode::CriticalExponent);
    auto pr = validate_params(p, std::nextafter(crit, -10.0), g.uniform(-100, 100));
    CHECK(sharp_constant(pr).value >= 0.0);
    double a = g.uniform(-5, crit);
    if (a < crit) CHECK(sharp_constant(validate_params(p, a, 0)).value > 0.0);
  }
}

TEST_CASE("sharp constant decreases strictly in alpha") {
  for (double p : {1.25, 1.5, 2.0, 3.0, 6.0}) {
    double crit = 1.0 - 1.0 / p;
    double prev = INFINITY;
    for (int k = 0; k < 50; ++k) {
      double a = -2.0 + (crit + 2.0) * k / 50.0;
      double v = sharp_constant(validate_params(p, a, 0)).value;
      CHECK(v < prev);
      prev = v;
    }
    CHECK(sharp_constant(validate_params(p, crit - 1e-12, 0)).value < 1e-11);
  }
}

TEST_CASE("near-critical values keep relative accuracy") {
  for (double gap : {1e-9, 1e-12, 1e-14}) {
    auto pr = validate_params(2, 0.5 - gap, 0);
    double g = pr.subcritical_gap();
    CHECK(test::rel_err(sharp_constant(pr).value, g * g) < 1e-12);
  }
}

TEST_CASE("lambda never affects admissibility") {
  auto pr = validate_params(2, 0, 0);
  CHECK(pr.with_lambda(1e300).lambda() == 1e300);
  CHECK(sharp_constant(pr.with_lambda(-7)).value == sharp_constant(pr).value);
}

TEST_CASE("exit status by error class") {
  CHECK(exit_status(ErrorCode::CriticalExponent) == 1);
  CHECK(exit_status(ErrorCode::Config) == 1);
  CHECK(exit_status(ErrorCode::BadMeshSpec) == 1);
  CHECK(exit_status(ErrorCode::QuadratureFailure) == 2);
  CHECK(exit_status(ErrorCode::ScanExhausted) == 2);
  CHECK(std::string(to_string(ErrorCode::BadEta)) == "BadEta");
}
