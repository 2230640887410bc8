#include <doctest.h>

#include <cmath>
#include <random>

#include "pmol/gramian.hpp"

using namespace pmol;

TEST_CASE("operator p-norm bound examples") {
  CMatrix I = CMatrix::Identity(5, 5);
  CHECK(operator_p_norm_bound(I, 1) == doctest::Approx(1));
  CMatrix A(2, 2);
  A << 1, 1, 0, 1;
  CHECK(operator_p_norm_bound(A, 0.5) == doctest::Approx(4));
  CHECK(operator_p_norm_bound(A, 1) == doctest::Approx(2));
}

TEST_CASE("operator p-norm bound dominates the action") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  for (double p : {0.5, 2.0 / 3.0, 1.0, 2.0}) {
    CMatrix A(20, 20);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = cplx(g(rng), g(rng));
    const double bound = operator_p_norm_bound(A, p);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXcd x(20);
      for (auto& v : x) v = cplx(g(rng), g(rng));
      REQUIRE(lp_norm(A * x, p) <= bound * lp_norm(x, p) * (1 + 1e-12));
    }
  }
}

TEST_CASE("decay fit") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 6);
  std::normal_distribution<double> noise(0, 1);
  std::vector<cplx> exact, noisy;
  std::vector<double> om;
  for (int i = 0; i < 200; ++i) {
    const double w = std::exp(u(rng));
    om.push_back(w);
    exact.push_back(std::pow(w, -3.0));
    noisy.push_back(2.5 * std::pow(w, -1.5) + 1e-12 * noise(rng));
  }
  const DecayFit f = decay_fit(exact, om, 1);
  CHECK(f.slope == doctest::Approx(-3).epsilon(1e-6));
  CHECK(f.n_pairs == 200);
  CHECK(decay_fit(noisy, om, 1).slope == doctest::Approx(-1.5).epsilon(1e-3));

  // below the floor nothing qualifies
  std::vector<cplx> tiny(200, cplx(1e-16, 0));
  CHECK_THROWS_AS(decay_fit(tiny, om, 1), InsufficientData);
  CHECK_THROWS_AS(decay_fit(std::vector<cplx>(exact.begin(), exact.begin() + 20),
                            std::vector<double>(om.begin(), om.begin() + 20), 1),
                  InsufficientData);
}

TEST_CASE("gramian blocks") {
  const FrequencyGrid g(128, 16);
  const Frame cur(make_curvelet_spec(3), g);
  const Frame she(make_shearlet_spec(6), g);
  std::vector<Index> rows;
  for (int j = 1; j <= 3; ++j)
    for (int l = -1; l <= 0; ++l)
      for (int k = 0; k <= 2; ++k) rows.push_back({Cone::none, j, l, {k, 1}});

  SUBCASE("self gramian is Hermitian with unit-bounded diagonal") {
    const GramianBlock G = compute_gramian(cur, cur, rows, rows);
    REQUIRE(G.entries.rows() == Eigen::Index(rows.size()));
    CHECK(G.entries.rows() == G.omega.rows());
    CHECK(G.entries.cols() == G.omega.cols());
    CHECK(G.omega.minCoeff() >= 1);
    const double scale = G.entries.cwiseAbs().maxCoeff();
    CHECK((G.entries - G.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    for (Eigen::Index i = 0; i < G.entries.rows(); ++i) {
      CHECK(G.entries(i, i).real() > 0);
      CHECK(G.entries(i, i).real() <= 1 + 1e-12);
      CHECK(G.omega(i, i) == doctest::Approx(1));
    }
  }
  SUBCASE("disjoint shells give a zero block") {
    const GramianBlock G = compute_gramian(cur, cur, {Index{Cone::none, 1, 0, {0, 0}}}, {Index{Cone::none, 3, 0, {0, 0}}});
    CHECK(std::abs(G.entries(0, 0)) == 0);
  }
  SUBCASE("pair sampling is deterministic and matches the block") {
    PairSampling opt;
    opt.jmax_a = 3;
    opt.jmax_b = 6;
    opt.pairs = 300;
    opt.pool = 3000;
    opt.radius = 1;
    const auto p1 = sample_pairs(cur, she, opt), p2 = sample_pairs(cur, she, opt);
    REQUIRE(!p1.empty());
    CHECK(p1 == p2);
    const GramianSample s = gramian_pairs(cur, she, p1);
    CHECK(s.size() == p1.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(s.size(), 5); ++i) {
      const GramianBlock b = compute_gramian(cur, she, {p1[i].first}, {p1[i].second});
      CHECK(std::abs(b.entries(0, 0) - s.entries[i]) < 1e-13);
      CHECK(b.omega(0, 0) == doctest::Approx(s.omega[i]));
    }
    CHECK(max_weighted_entry(s, 0) <= 1 + 1e-12);
  }
}

TEST_CASE("sparsity trajectory levels") {
  const auto levels = sparsity_levels(5, 4, 32, 16, 3);
  REQUIRE(levels.size() == 3);
  CHECK(levels.back().jmax_a == 5);
  CHECK(levels.back().jmax_b == 4);
  CHECK(levels[0].jmax_a == 3);
  CHECK(levels.back().radius == doctest::Approx(2 * levels[1].radius));
}

TEST_CASE("sparsity test of a Parseval frame with itself") {
  const FrequencyGrid g(128, 16);
  const Frame cur(make_curvelet_spec(3), g);
  const SparsityReport rep = sparsity_equivalence_test(cur, cur, 2.0 / 3.0, sparsity_levels(3, 3, 16, g.period(), 2), 1);
  REQUIRE(rep.steps.size() == 2);
  for (const auto& s : rep.steps) CHECK(std::isfinite(s.bound));
  CHECK(rep.steps[1].bound >= rep.steps[0].bound);
  CHECK_THROWS_AS(sparsity_equivalence_test(cur, cur, 1.5, sparsity_levels(3, 3, 16, g.period(), 2)), ParameterError);
}
