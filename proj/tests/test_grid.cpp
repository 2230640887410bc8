#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "pmol/frame.hpp"

using namespace pmol;

namespace {

double rel_diff(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

CoefficientSet unit_coefficient(const Frame& frame, const Index& idx) {
  CoefficientSet c = frame.analyze(Spectrum(frame.grid()));
  int w, ku, kv;
  frame.lattice_of(idx, w, ku, kv);
  c.blocks[std::size_t(w)](ku, kv) = 1;
  return c;
}

}  // namespace

TEST_CASE("grid basics") {
  const FrequencyGrid g(128, 16);
  CHECK(g.spacing() == 0.25);
  CHECK(g.period() == 4);
  CHECK(g.slot(-1) == 127);
  CHECK(g.index_of_slot(127) == -1);
  CHECK_THROWS_AS(FrequencyGrid(100, 16), ParameterError);
  CHECK_THROWS_AS(g.require_scale(4), ResolutionError);
  CHECK_NOTHROW(g.require_scale(3));
}

TEST_CASE("Plancherel between image and spectrum") {
  const FrequencyGrid g(128, 16);
  const DigitalImage f = random_bandlimited_image(g, 12, 3);
  const Spectrum F = to_spectrum(f);
  CHECK(F.norm2() == doctest::Approx(f.norm2()).epsilon(1e-10));
  CHECK(f.finite());
  // real image from a Hermitian spectrum
  CHECK(f.values.imag().cwiseAbs().maxCoeff() < 1e-12 * f.values.real().cwiseAbs().maxCoeff());
  CHECK(rel_diff(to_image(F).values, f.values) < 1e-12);
}

TEST_CASE("image binary io round trip") {
  const FrequencyGrid g(32, 4);
  const DigitalImage f = random_bandlimited_image(g, 4, 9);
  const auto path = (std::filesystem::temp_directory_path() / "pmol_image_roundtrip.bin").string();
  write_image_binary(path, f);
  const DigitalImage back = read_image_binary(path);
  std::remove(path.c_str());
  CHECK(back.grid.n == 32);
  CHECK(back.grid.extent == 4);
  CHECK(rel_diff(back.values, CMatrix(f.values.real().cast<cplx>())) == 0);
}

TEST_CASE("bandlimited frames are Parseval and reconstruct") {
  const FrequencyGrid g(128, 16);
  for (const FrameSpec& spec : {make_curvelet_spec(3), make_shearlet_spec(6), make_wavelet_spec(6)}) {
    CAPTURE(spec.id());
    const Frame frame(spec, g);
    CHECK((frame.symbol().array() - 1).abs().maxCoeff() < 1e-10);
    for (unsigned seed : {1u, 2u, 3u}) {
      const DigitalImage f = random_bandlimited_image(g, g.extent, seed);
      const CoefficientSet c = analyze(f, frame);
      CHECK(c.energy() / f.norm2() == doctest::Approx(1).epsilon(1e-3));
      const DigitalImage back = synthesize(c, frame);
      CHECK(rel_diff(back.values, f.values) <= 1e-3);
    }
    const CoefficientSet zero = analyze(DigitalImage(g), frame);
    CHECK(zero.energy() == 0);
    CHECK(synthesize(zero, frame).norm2() == 0);
  }
}

TEST_CASE("analysis is linear") {
  const FrequencyGrid g(64, 8);
  const Frame frame(make_curvelet_spec(2), g);
  const DigitalImage f = random_bandlimited_image(g, 8, 11), h = random_bandlimited_image(g, 8, 12);
  const double alpha = -1.7;
  DigitalImage mix(g);
  mix.values = alpha * f.values + h.values;
  const CoefficientSet cf = analyze(f, frame), ch = analyze(h, frame), cm = analyze(mix, frame);
  double err = 0, ref = 0;
  for (std::size_t w = 0; w < cm.blocks.size(); ++w) {
    err += (cm.blocks[w] - (alpha * cf.blocks[w] + ch.blocks[w])).squaredNorm();
    ref += cm.blocks[w].squaredNorm();
  }
  CHECK(std::sqrt(err / ref) < 1e-12);
}

TEST_CASE("single element synthesis and dominance") {
  const FrequencyGrid g(128, 16);
  const Frame frame(make_curvelet_spec(3), g);
  for (const Index& idx : {Index{Cone::none, 2, 1, {1, 0}}, Index{Cone::none, 3, -2, {0, 1}}}) {
    const CoefficientSet c = unit_coefficient(frame, idx);
    const Spectrum synth = frame.synthesize(c);
    const Spectrum elem = frame.element(idx);
    CHECK(rel_diff(synth.values, elem.values) < 1e-12);

    // the element's own coefficient is its squared norm and the largest one; with
    // box-sampled lattices that norm is the inverse local redundancy, not above 1/2
    const CoefficientSet back = frame.analyze(elem);
    int w, ku, kv;
    frame.lattice_of(idx, w, ku, kv);
    const cplx own = back.blocks[std::size_t(w)](ku, kv);
    CHECK(own.real() == doctest::Approx(elem.norm2()).epsilon(1e-10));
    CHECK(back.energy() == doctest::Approx(elem.norm2()).epsilon(1e-10));
    for (const CMatrix& B : back.blocks) CHECK(B.cwiseAbs().maxCoeff() <= std::abs(own) * (1 + 1e-12));
    CHECK(own.real() > 0.15);
    CHECK(own.real() <= 1);
  }
  CHECK_THROWS_AS(analyze(DigitalImage(g), frame, {Index{Cone::none, 9, 0, {0, 0}}}), InvalidIndex);
  const std::vector<cplx> picked = analyze(DigitalImage(g), frame, {Index{Cone::none, 1, 0, {0, 0}}});
  CHECK(picked.size() == 1);
  CHECK(std::abs(picked[0]) == 0);
}

TEST_CASE("frequency-domain inner products") {
  const FrequencyGrid g(256, 32);
  const FrameSpec spec = make_curvelet_spec(4);
  auto el = [&](Index idx) { return [&spec, idx](const Eigen::Vector2d& xi) { return curvelet_hat(spec, idx, xi); }; };
  const Index a{Cone::none, 3, 1, {1, 0}}, b{Cone::none, 3, -2, {0, 1}}, c{Cone::none, 1, 0, {0, 0}};
  const cplx aa = inner_product(el(a), el(a), g);
  CHECK(aa.real() > 0);
  CHECK(std::abs(aa.imag()) < 1e-14 * aa.real());
  const cplx ab = inner_product(el(a), el(b), g), ba = inner_product(el(b), el(a), g);
  CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * std::max(std::abs(ab), 1e-300));
  CHECK(std::abs(inner_product(el(a), el(c), g)) == 0);

  // the same pair on a grid that cuts the element off
  const FrequencyGrid small(64, 8);
  CHECK_THROWS_AS(inner_product(el(a), el(a), small), ResolutionError);
}

TEST_CASE("every wedge resolves its own index") {
  // wedge tags are hashed with k = 0, so every tag needs a zeroed translation
  const FrequencyGrid g(128, 8);
  for (const FrameSpec& spec :
       {make_curvelet_spec(3), make_shearlet_spec(6), make_wavelet_spec(6),
        make_compact_shearlet_spec(3, 4, 6, {2, 4, 2, 2}), make_compact_shearlet_spec(5, 9, 18, {6, 12, 7, 6})}) {
    const Frame frame(spec, g);
    for (int w = 0; w < int(frame.wedges().size()); ++w) {
      const Index idx = frame.index_of(w, 0, 0);
      CHECK(frame.wedge_of(idx) == w);
      CHECK(frame.contains(idx));
    }
  }
}

TEST_CASE("coefficient csv") {
  const FrequencyGrid g(32, 4);
  const Frame frame(make_curvelet_spec(1), g);
  std::ostringstream os;
  write_coefficients_csv(os, analyze(random_bandlimited_image(g, 4, 1), frame), frame);
  CHECK(os.str().rfind("cone,j,l,k1,k2,re,im\n", 0) == 0);
}
