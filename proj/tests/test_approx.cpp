#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pmol/approx.hpp"

using namespace pmol;

namespace {

NTermCurve synthetic_curve(double exponent, double scale) {
  NTermCurve c;
  for (int N = 16; N <= 8192; N *= 2) {
    c.N.push_back(N);
    c.errors.push_back(scale * std::pow(double(N), exponent));
  }
  return c;
}

}  // namespace

TEST_CASE("cartoons are deterministic and well formed") {
  const FrequencyGrid g(64, 32);
  const CartoonImage a = make_cartoon(4, g), b = make_cartoon(4, g), c = make_cartoon(5, g);
  CHECK(a.rendered.values == b.rendered.values);
  CHECK(a.rendered.values != c.rendered.values);
  CHECK(a.boundary.min_radius() > 0);
  CHECK(std::isfinite(a.boundary.max_curvature()));
  CHECK(a.boundary.cx - a.boundary.max_radius() > 0);
  CHECK(a.boundary.cx + a.boundary.max_radius() < 1);
  CHECK(a.rendered.finite());
  CHECK_THROWS_AS(make_cartoon(1, FrequencyGrid(64, 32), CartoonOptions{4, 0.08, 0.6}), ParameterError);
}

TEST_CASE("zero harmonics give a disc") {
  CartoonOptions opt;
  opt.amplitude = 0;
  const CartoonImage c = make_cartoon(3, FrequencyGrid(64, 32), opt);
  for (double phi = 0; phi < 2 * std::numbers::pi; phi += 0.1) CHECK(c.boundary.radius(phi) == doctest::Approx(opt.rho0));
  CHECK(c.boundary.max_curvature() == doctest::Approx(1 / opt.rho0).epsilon(1e-6));
}

TEST_CASE("without an edge the cartoon is continuous") {
  CartoonOptions opt;
  opt.edge = false;
  const CartoonImage c = make_cartoon(2, FrequencyGrid(64, 32), opt);
  CHECK_FALSE(c.edge);
  const double r = c.boundary.radius(0.0);
  const double in = c.value(c.boundary.cx + r - 1e-7, c.boundary.cy);
  const double out = c.value(c.boundary.cx + r + 1e-7, c.boundary.cy);
  CHECK(std::abs(in - out) < 1e-5);

  CartoonOptions with_edge;
  const CartoonImage e = make_cartoon(2, FrequencyGrid(64, 32), with_edge);
  const double re = e.boundary.radius(0.0);
  const double jump = e.value(e.boundary.cx + re - 1e-7, e.boundary.cy) - e.value(e.boundary.cx + re + 1e-7, e.boundary.cy);
  CHECK(std::abs(jump) > 1e-3);
}

TEST_CASE("N-term curves") {
  const FrequencyGrid g(64, 32);
  const Frame frame(make_curvelet_spec(4), g);
  const CartoonImage c = make_cartoon(1, g);
  const std::vector<int> Ns{1, 4, 16, 64, 256, 1024, int(frame.size())};
  const NTermCurve curve = n_term_error_curve(c.rendered, frame, Ns);
  REQUIRE(curve.errors.size() == Ns.size());
  for (std::size_t i = 1; i < curve.errors.size(); ++i) CHECK(curve.errors[i] <= curve.errors[i - 1]);
  CHECK(curve.errors.back() <= 1e-6 * curve.energy);
  for (std::size_t i = 1; i < curve.sorted_coeffs.size(); ++i) REQUIRE(curve.sorted_coeffs[i] <= curve.sorted_coeffs[i - 1]);
  // synthesis of a Parseval frame is a contraction, so the error never exceeds the tail
  for (std::size_t i = 0; i < curve.errors.size(); ++i) CHECK(curve.errors[i] <= curve.tail[i] + 1e-10 * curve.energy);

  // one element kept by its own coefficient n = |g|^2 comes back as n g, error (1 - n)^2 n
  const Index idx{Cone::none, 3, 1, {2, 1}};
  const DigitalImage elem = to_image(frame.element(idx));
  const NTermCurve one = n_term_error_curve(elem, frame, {1});
  const double n = one.energy;
  CHECK(one.errors[0] == doctest::Approx((1 - n) * (1 - n) * n).epsilon(1e-9));

  const Frame compact(make_compact_shearlet_spec(2, 4, 6, {2, 4, 2, 2}), g);
  CHECK_THROWS_AS(n_term_error_curve(c.rendered, compact, {1, 2}), UnsupportedDual);
  const NTermCurve proxy = n_term_error_curve(c.rendered, compact, {1, 2, 4}, true);
  CHECK(proxy.proxy);
  CHECK(proxy.errors[2] <= proxy.errors[0]);
}

TEST_CASE("rate fit") {
  const RateFit f = rate_fit(synthetic_curve(-2, 1), 16, 8192);
  CHECK(f.slope == doctest::Approx(-2).epsilon(1e-9));
  CHECK(f.points == 10);
  const RateFit scaled = rate_fit(synthetic_curve(-2, 37.5), 16, 8192);
  CHECK(std::abs(scaled.slope - f.slope) < 1e-12);
  CHECK(scaled.intercept - f.intercept == doctest::Approx(std::log(37.5)));
  CHECK_THROWS_AS(rate_fit(synthetic_curve(-2, 1), 16, 64), ParameterError);
  CHECK_THROWS_AS(rate_fit(synthetic_curve(-2, 1), 64, 16), ParameterError);
}

TEST_CASE("default N grid") {
  const auto Ns = default_n_grid(1 << 16);
  CHECK(Ns.front() == 16);
  CHECK(Ns.back() == 8192);
  CHECK(default_n_grid(1024).back() == 256);
}

TEST_CASE("comparison table") {
  const FrequencyGrid g(128, 64);
  const CartoonImage c = make_cartoon(1, g);
  const Comparison one = compare_systems(c, {make_curvelet_spec(5)}, g, default_n_grid(1 << 14), 16, 4096);
  CHECK(one.rows.size() == 1);
  CHECK(one.gaps.rows() == 1);
  CHECK(one.gaps(0, 0) == 0);
}
