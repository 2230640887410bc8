#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <map>
#include <set>
#include <sstream>

#include "pmol/param.hpp"

using namespace pmol;
using std::numbers::pi;

namespace {

Index idx(int j, int l, int k1 = 0, int k2 = 0, Cone c = Cone::none) { return {c, j, l, {k1, k2}}; }

ParamPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-4, 4);
  return {std::abs(u(rng)) * 2, u(rng), {u(rng), u(rng)}};
}

}  // namespace

TEST_CASE("canonical point formulas") {
  const ParamPoint a = canonical_point(idx(2, 1));
  CHECK(a.s == 2);
  CHECK(a.theta == doctest::Approx(pi / 2));
  CHECK(a.x.norm() == 0);

  const ParamPoint b = canonical_point(idx(0, 0));
  CHECK(b.s == 0);
  CHECK(b.theta == 0);

  const ParamPoint c = canonical_point(idx(3, 1, 1, 0));
  CHECK(c.s == 3);
  CHECK(c.theta == doctest::Approx(pi / 2));
  CHECK(c.x[0] == doctest::Approx(0).epsilon(1e-15));
  CHECK(c.x[1] == doctest::Approx(-1.0 / 8));

  CHECK_THROWS_AS(canonical_point(idx(2, 5)), InvalidIndex);
}

TEST_CASE("shearlet point formulas") {
  const ParamPoint a = shearlet_point(idx(0, 0, 0, 0, Cone::horizontal));
  CHECK(a.s == 0);
  CHECK(a.theta == 0);

  const ParamPoint b = shearlet_point(idx(2, 1, 0, 0, Cone::horizontal));
  CHECK(b.s == 2);
  CHECK(b.theta == doctest::Approx(wrap_angle(std::atan(-0.5))));

  const ParamPoint c = shearlet_point(idx(2, 0, 0, 0, Cone::vertical));
  CHECK(c.theta == doctest::Approx(pi / 2));

  CHECK_THROWS_AS(shearlet_point(idx(2, 0)), InvalidIndex);
}

TEST_CASE("horizontal cone angles stay within a quarter turn") {
  for (int j = 0; j <= 8; ++j) {
    const int L = 1 << (j / 2);
    for (int l = -L; l <= L; ++l) {
      const double th = shearlet_point(idx(j, l, 0, 0, Cone::horizontal)).theta;
      CHECK(std::abs(angle_gap(th, 0.0)) <= pi / 4 + 1e-15);
    }
  }
}

TEST_CASE("pseudo distance examples") {
  const ParamPoint p{1, 0, {0, 0}}, q{1, 0, {1, 0}}, r{1, pi / 2, {0, 0}};
  CHECK(pseudo_distance(p, p) == 0);
  CHECK(pseudo_distance(p, q) == doctest::Approx(2));
  CHECK(pseudo_distance(p, r) == doctest::Approx(pi * pi / 4));
}

TEST_CASE("pseudo distance is not symmetric") {
  const ParamPoint p{1, 0, {0, 0}}, q{1, pi / 2, {1, 0}};
  // e_p = (1, 0) sees the offset, e_q = (0, -1) does not
  CHECK(pseudo_distance(p, q) != doctest::Approx(pseudo_distance(q, p)));
}

TEST_CASE("omega examples") {
  const ParamPoint p{2, 0.3, {0.1, -0.2}};
  CHECK(omega(p, p) == 1);
  CHECK(omega(ParamPoint{3, 0, {0, 0}}, ParamPoint{1, 0, {0, 0}}) == doctest::Approx(4));
  CHECK(omega(ParamPoint{2, 0, {0, 0}}, ParamPoint{2, 0, {1, 0}}) == doctest::Approx(9));
}

TEST_CASE("omega bounds on random points") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const ParamPoint p = random_point(rng), q = random_point(rng);
    REQUIRE(omega(p, p) == 1);
    REQUIRE(omega(p, q) >= std::exp2(std::abs(p.s - q.s)));
  }
}

TEST_CASE("parametrizations are injective on small windows") {
  // round to kill last-bit noise from the matrix products
  auto key = [](const ParamPoint& p) {
    auto r = [](double v) { return std::round(v * 1e9) / 1e9; };
    return std::tuple{r(p.theta), r(p.x[0]), r(p.x[1])};
  };
  auto seam = [](const Index& i) { return std::abs(i.l) == 1 << (i.j / 2); };
  for (const bool shearlet : {false, true}) {
    const auto rows = enumerate(shearlet ? Parametrization::shearlet() : Parametrization::canonical(), 4, 3);
    REQUIRE(!rows.empty());
    for (int j = 0; j <= 4; ++j) {
      std::map<std::tuple<double, double, double>, Index> seen;
      int clashes = 0;
      for (const auto& [i, p] : rows) {
        if (i.j != j) continue;
        auto [it, fresh] = seen.emplace(key(p), i);
        if (fresh) continue;
        ++clashes;
        // only the two cones' seam directions (slope +-1) may meet
        const Index& other = it->second;
        CHECK(shearlet);
        CHECK(other.cone != i.cone);
        CHECK(seam(other));
        CHECK(seam(i));
      }
      if (!shearlet) CHECK(clashes == 0);
    }
  }
}

TEST_CASE("admissibility partial sums") {
  AdmissibilityOptions opt;
  opt.probe_jmax = 1;
  opt.probe_kmax = 1;
  opt.window = 6;
  const auto canonical = Parametrization::canonical();

  SUBCASE("jmax = 0 is a positive finite sum") {
    const auto rows = admissibility_partial_sums(canonical, canonical, 3, 0, opt);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sup_ab > 0);
    CHECK(std::isfinite(rows[0].sup_ab));
  }
  SUBCASE("monotone in jmax with shrinking increments") {
    for (const Parametrization& p : {canonical, Parametrization::shearlet()}) {
      const auto rows = admissibility_partial_sums(p, p, 3, 6, opt);
      REQUIRE(rows.size() == 7);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].sup_ab >= rows[i - 1].sup_ab);
        CHECK(rows[i].sup_ba >= rows[i - 1].sup_ba);
      }
      for (std::size_t i = 5; i < rows.size(); ++i) {
        const double prev = rows[i - 1].sup_ab - rows[i - 2].sup_ab;
        const double cur = rows[i].sup_ab - rows[i - 1].sup_ab;
        CHECK(cur < 0.8 * prev);
      }
    }
  }
  SUBCASE("k = 1 keeps growing") {
    const auto rows = admissibility_partial_sums(canonical, canonical, 1, 5, opt);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i].sup_ab / rows[i - 1].sup_ab - 1 > 0.10);
  }
  SUBCASE("k must be positive") {
    CHECK_THROWS_AS(admissibility_partial_sums(canonical, canonical, 0, 2, opt), ParameterError);
  }
}

TEST_CASE("strong admissibility ratio") {
  const auto canonical = Parametrization::canonical();
  const ParamPoint probe{0, 0, {0, 0}};
  SUBCASE("j = q has denominator one") {
    const double a = strong_admissibility_ratio(canonical, 3, 2, 3, 3, probe, 8);
    const double b = strong_admissibility_ratio(canonical, 3, 0, 3, 3, probe, 8);
    CHECK(a == doctest::Approx(b));
  }
  SUBCASE("bounded over a small sweep, stable under window doubling") {
    for (const Parametrization& p : {canonical, Parametrization::shearlet()}) {
      double worst = 0, worst2 = 0;
      for (int j = 0; j <= 5; ++j)
        for (int q = 0; q <= 5; ++q) {
          worst = std::max(worst, strong_admissibility_ratio(p, 3, 2, j, q, probe, 12));
          worst2 = std::max(worst2, strong_admissibility_ratio(p, 3, 2, j, q, probe, 24));
        }
      CHECK(std::isfinite(worst));
      CHECK(worst2 / worst - 1 < 0.05);
    }
  }
}

TEST_CASE("parametrization csv has the documented columns") {
  std::ostringstream os;
  write_parametrization_csv(os, enumerate(Parametrization::canonical(), 1, 1));
  const std::string text = os.str();
  CHECK(text.rfind("cone,j,l,k1,k2,s,theta,x1,x2\n", 0) == 0);
}
