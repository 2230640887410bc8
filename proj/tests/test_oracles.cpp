#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmol/oracles.hpp"

using namespace pmol;
using std::numbers::pi;

TEST_CASE("envelope S examples and bounds") {
  CHECK(envelope_S({1.5, 0.2, 0, 0, 0}, 3.7, 1.1) == 1);
  CHECK(envelope_S({0, 0, 3, 2, 5}, 0, 0) == 1);
  CHECK(envelope_S({2, 0, 1, 1, 7}, 3, 0) == doctest::Approx(4.0 / 7));
  for (double s : {0.0, 1.0, 4.0})
    for (double r = 0; r < 200; r += 7.3)
      for (double phi = -4; phi < 4; phi += 0.31) {
        const EnvelopeParams p{s, 0.4, 2, 1.5, 3};
        const double v = envelope_S(p, r, phi);
        REQUIRE(v <= 1);
        REQUIRE(v >= 0);
        CHECK(envelope_S(p, r, phi + 2 * pi) == doctest::Approx(v).epsilon(1e-12));
        CHECK(envelope_S(p, r, -2 * p.theta - phi) == doctest::Approx(v).epsilon(1e-12));
      }
}

TEST_CASE("grafakos check") {
  for (double N : {1.5, 2.0, 3.0}) {
    const OracleResult r = grafakos_check(1, 1, 0, N);
    CHECK(r.lhs == doctest::Approx(2 / (2 * N - 1)).epsilon(1e-9));
    CHECK(r.ratio == doctest::Approx(2 / (2 * N - 1)).epsilon(1e-9));
    CHECK(r.drift < 1e-8);
  }
  for (double y : {-3.0, 0.5, 6.0}) {
    const OracleResult a = grafakos_check(2, 9, y, 2), b = grafakos_check(9, 2, -y, 2);
    CHECK(a.lhs == doctest::Approx(b.lhs).epsilon(1e-9));
  }
  CHECK_THROWS_AS(grafakos_check(1, 1, 0, 1), ParameterError);
  CHECK_THROWS_AS(grafakos_check(0, 1, 0, 2), ParameterError);
}

TEST_CASE("bumps check") {
  double prev = 1e300;
  for (double a = 1; a <= 64; a *= 2) {
    const OracleResult r = bumps_check(a, 4, 0.3, 2);
    CHECK(r.lhs <= prev);
    prev = r.lhs;
  }
  const OracleResult edge = bumps_check(1, 1, pi / 2, 2);
  CHECK(std::isfinite(edge.ratio));
  CHECK(edge.ratio > 0);
  CHECK_THROWS_AS(bumps_check(1, 1, 2, 2), ParameterError);
}

TEST_CASE("polar estimate") {
  for (double s : {0.0, 3.0, 6.0}) {
    const OracleResult r = polar_estimate_check({s, 0.3, 4, 3, 2}, 0);
    CHECK(r.ratio <= 1 + 1e-12);
  }
  const OracleResult top = polar_estimate_check({4, 0, 4, 3, 2}, 2);
  CHECK(std::isfinite(top.ratio));
  CHECK_THROWS_AS(polar_estimate_check({4, 0, 4, 3, 2}, 3), ParameterError);
}

TEST_CASE("frequency-angle decay check") {
  const OracleResult r = freqangdec_check(3, 3, 0.2, 0.2, 2, 2, 4, 3, 2);
  CHECK(r.rhs == doctest::Approx(1));
  CHECK(r.ratio == doctest::Approx(r.lhs));
  CHECK(r.in_hypothesis);
  // arguments may come in either order
  const OracleResult a = freqangdec_check(1, 4, 0, 0.3, 2, 2, 4, 3, 2), b = freqangdec_check(4, 1, 0.3, 0, 2, 2, 4, 3, 2);
  CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-6));
  CHECK_FALSE(freqangdec_check(1, 4, 0, 0.3, 2, 2, 4, 1.5, 2).in_hypothesis);
}

TEST_CASE("sweeps") {
  const OracleSweep g = grafakos_sweep(2);
  CHECK(g.in_hypothesis);
  CHECK(std::isfinite(g.max_ratio));
  CHECK(g.max_drift < 0.05);

  const OracleSweep f = freqangdec_sweep(2, 2, 4, 3, 2, 4);
  const auto by_gap = ratio_by_gap(f);
  CHECK(by_gap.size() == 5);
  CHECK(f.in_hypothesis);

  const OracleSweep bad = freqangdec_sweep(2, 2, 4, 1.5, 2, 4);
  const auto bad_gap = ratio_by_gap(bad);
  CHECK_FALSE(bad.in_hypothesis);
  for (std::size_t i = 1; i < bad_gap.size(); ++i) CHECK(bad_gap[i] > bad_gap[i - 1]);

  std::ostringstream os;
  write_sweep_csv(os, f);
  CHECK(os.str().find("lhs,rhs,ratio") != std::string::npos);
}
