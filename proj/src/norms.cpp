#include "pmol/norms.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "pmol/approx.hpp"
#include "pmol/parallel.hpp"

namespace pmol {

namespace {

void check_exponents(const NormParams& params) {
  if (!(params.p > 0) || !(params.q > 0)) throw ParameterError("norm exponents p and q must be positive");
}

double block_p_norm(const std::vector<double>& v, double p) {
  double s = 0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1 / p);
}

}  // namespace

double s_norm(const ScaleBlocks& c, const NormParams& params) {
  check_exponents(params);
  double s = 0;
  for (const auto& [j, v] : c) s += std::pow(std::exp2(params.alpha * j) * block_p_norm(v, params.p), params.q);
  return std::pow(s, 1 / params.q);
}

double g_norm(const DirectionalBlocks& c, const NormParams& params) {
  check_exponents(params);
  double s = 0;
  for (const auto& [key, v] : c)
    s += std::pow(std::exp2(params.alpha * key.first) * block_p_norm(v, params.p), params.q);
  return std::pow(s, 1 / params.q);
}

ScaleBlocks scale_blocks(const CoefficientSet& c, const Frame& frame) {
  if (c.blocks.size() != frame.wedges().size()) throw ParameterError("coefficient set does not match frame");
  ScaleBlocks out;
  for (std::size_t w = 0; w < c.blocks.size(); ++w) {
    auto& dst = out[int(std::lround(frame.wedges()[w].scale))];
    const CMatrix& B = c.blocks[w];
    for (Eigen::Index i = 0; i < B.size(); ++i) dst.push_back(std::abs(B.data()[i]));
  }
  return out;
}

DirectionalBlocks directional_blocks(const CoefficientSet& c, const Frame& frame) {
  if (c.blocks.size() != frame.wedges().size()) throw ParameterError("coefficient set does not match frame");
  DirectionalBlocks out;
  for (std::size_t w = 0; w < c.blocks.size(); ++w) {
    auto& dst = out[{int(std::lround(frame.wedges()[w].scale)), int(w)}];
    const CMatrix& B = c.blocks[w];
    for (Eigen::Index i = 0; i < B.size(); ++i) dst.push_back(std::abs(B.data()[i]));
  }
  return out;
}

double weighted_lq_norm(const std::vector<double>& a, double alpha, double q) {
  if (!(q > 0)) throw ParameterError("q must be positive");
  double s = 0;
  // in log2 so that 2^{alpha k} cannot overflow against an underflowing a_k
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0) s += std::exp2(q * (alpha * double(k) + std::log2(std::abs(a[k]))));
  return std::pow(s, 1 / q);
}

HardyReport hardy_check(const std::vector<double>& a, double lambda, double alpha, double r, double q,
                        HardyVariant variant) {
  if (!(r > 0) || !(q > 0)) throw ParameterError("Hardy exponents r and q must be positive");
  HardyReport rep;
  rep.in_hypothesis = lambda > alpha && r <= q && (variant == HardyVariant::smoothing || alpha > 0);
  const std::size_t n = a.size();
  rep.b.assign(n, 0.0);
  if (variant == HardyVariant::smoothing) {
    // running sum of (2^{lambda (j - k)} |a_j|)^r, rescaled each step to stay finite
    double acc = 0;
    const double shrink = std::exp2(-lambda * r);
    for (std::size_t k = 0; k < n; ++k) {
      acc = acc * shrink + std::pow(std::abs(a[k]), r);
      rep.b[k] = std::pow(acc, 1 / r);
    }
  } else {
    double acc = 0;
    for (std::size_t k = n; k-- > 0;) {
      acc += std::pow(std::abs(a[k]), r);
      rep.b[k] = std::pow(acc, 1 / r);
    }
  }
  rep.norm_a = weighted_lq_norm(a, alpha, q);
  rep.norm_b = weighted_lq_norm(rep.b, alpha, q);
  rep.ratio = rep.norm_a > 0 ? rep.norm_b / rep.norm_a : 0.0;
  return rep;
}

HardyEnsemble hardy_ensemble(int length, int members, double lambda, double alpha, double r, double q,
                             HardyVariant variant, unsigned seed) {
  if (length < 1 || members < 2) throw ParameterError("Hardy ensemble needs length >= 1 and members >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  HardyEnsemble out;
  out.length = length;
  out.members = members;
  std::vector<double> a(static_cast<std::size_t>(length));
  for (int m = 0; m < members; ++m) {
    std::fill(a.begin(), a.end(), 0.0);
    switch (m % 4) {
      case 0: a[std::size_t(m / 4 % length)] = 1; break;
      case 1: {
        const double beta = alpha + 2 * (u(rng) - 0.5);
        for (int k = 0; k < length; ++k) a[std::size_t(k)] = std::exp2(-beta * k);
        break;
      }
      case 2:
        for (int k = 0; k < length; ++k) a[std::size_t(k)] = u(rng) * std::exp2(-alpha * k);
        break;
      default:
        for (int k = 0; k < length; ++k)
          if (u(rng) < 0.2) a[std::size_t(k)] = u(rng) * std::exp2(-alpha * k);
        break;
    }
    const HardyReport rep = hardy_check(a, lambda, alpha, r, q, variant);
    out.in_hypothesis = rep.in_hypothesis;
    out.max_ratio = std::max(out.max_ratio, rep.ratio);
    if (m < members / 2) out.max_ratio_half = out.max_ratio;
  }
  out.change = out.max_ratio_half > 0 ? out.max_ratio / out.max_ratio_half - 1 : 0.0;
  return out;
}

NormEquivalence norm_equivalence_ratio(const Frame& a, const Frame& b, const std::vector<DigitalImage>& tests,
                                       const NormParams& params, int threads) {
  check_exponents(params);
  if (tests.empty()) throw ParameterError("norm comparison needs test functions");
  NormEquivalence out;
  const std::size_t m = tests.size();
  out.norm_a.assign(m, 0.0);
  out.norm_b.assign(m, 0.0);
  out.ratios.assign(m, 0.0);
  const bool same = a.id() == b.id();
  parallel_for(m, threads, [&](std::size_t i) {
    const Spectrum F = to_spectrum(tests[i]);
    out.norm_a[i] = s_norm(scale_blocks(a.analyze(F), a), params);
    out.norm_b[i] = same ? out.norm_a[i] : s_norm(scale_blocks(b.analyze(F), b), params);
    out.ratios[i] = out.norm_a[i] / out.norm_b[i];
  });
  auto spread_of = [&](std::size_t count, double& lo, double& hi) {
    lo = *std::min_element(out.ratios.begin(), out.ratios.begin() + std::ptrdiff_t(count));
    hi = *std::max_element(out.ratios.begin(), out.ratios.begin() + std::ptrdiff_t(count));
    return hi / lo;
  };
  double lo, hi;
  out.spread_half = spread_of(std::max<std::size_t>(1, m / 2), lo, hi);
  out.spread = spread_of(m, out.min, out.max);
  out.change = out.spread / out.spread_half - 1;
  out.pass = std::isfinite(out.spread) && out.change < 0.10;
  return out;
}

std::vector<DigitalImage> norm_test_ensemble(const Frame& frame, int count, unsigned seed, int cartoon_every) {
  if (count < 1) throw ParameterError("test ensemble needs at least one member");
  if (!frame.spec().parseval()) throw UnsupportedDual("test functions are synthesised through a Parseval frame");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> g(0, 1);
  int smax = 0;
  for (const Wedge& w : frame.wedges()) smax = std::max(smax, int(std::lround(w.scale)));
  std::vector<DigitalImage> out;
  out.reserve(std::size_t(count));
  const CoefficientSet zero = frame.analyze(Spectrum(frame.grid()));
  for (int i = 0; i < count; ++i) {
    if (cartoon_every > 0 && i % cartoon_every == cartoon_every - 1) {
      out.push_back(make_cartoon(seed + unsigned(i), frame.grid()).rendered);
      continue;
    }
    const int s0 = 1 + int(u(rng) * smax) % std::max(1, smax);
    const double density = 0.01 + 0.05 * u(rng);
    CoefficientSet c = zero;
    for (std::size_t w = 0; w < c.blocks.size(); ++w) {
      const int s = int(std::lround(frame.wedges()[w].scale));
      if (std::abs(s - s0) > 1) continue;
      const double weight = std::exp2(-std::abs(s - s0));
      CMatrix& B = c.blocks[w];
      for (Eigen::Index k = 0; k < B.size(); ++k)
        if (u(rng) < density) B.data()[k] = weight * cplx(g(rng), g(rng));
    }
    out.push_back(to_image(frame.synthesize(c)));
  }
  return out;
}

void write_norm_ratios_csv(std::ostream& os, const NormEquivalence& r) {
  os << "function,norm_a,norm_b,ratio\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < r.ratios.size(); ++i)
    os << i << ',' << r.norm_a[i] << ',' << r.norm_b[i] << ',' << r.ratios[i] << '\n';
  os.precision(old);
}

void write_norm_summary(std::ostream& os, const NormEquivalence& r, const NormParams& params) {
  const auto old = os.precision(17);
  os << "{\n  \"alpha\": " << params.alpha << ",\n  \"p\": " << params.p << ",\n  \"q\": " << params.q
     << ",\n  \"functions\": " << r.ratios.size() << ",\n  \"min\": " << r.min << ",\n  \"max\": " << r.max
     << ",\n  \"spread\": " << r.spread << ",\n  \"spread_half\": " << r.spread_half << ",\n  \"change\": " << r.change
     << ",\n  \"pass\": " << (r.pass ? "true" : "false") << "\n}\n";
  os.precision(old);
}

}  // namespace pmol
