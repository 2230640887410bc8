#pragma once
// Scale-blocked sequence norms, the discrete Hardy inequality and frame-to-frame
// norm comparisons.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pmol/frame.hpp"

namespace pmol {

struct NormParams {
  double alpha = 0;
  double p = 2;
  double q = 2;
};

// scale j -> magnitudes of every coefficient at that scale
using ScaleBlocks = std::map<int, std::vector<double>>;
// (scale j, orientation key) -> magnitudes over translations
using DirectionalBlocks = std::map<std::pair<int, int>, std::vector<double>>;

// (sum_j (2^{alpha j} (sum |c|^p)^{1/p})^q)^{1/q}. Quasi-norms for p or q below one
// use the same formula.
double s_norm(const ScaleBlocks& c, const NormParams& params);
// Same with the outer sum running over (j, l) blocks.
double g_norm(const DirectionalBlocks& c, const NormParams& params);

// Blocks keyed by the frame's scale s (see scale_offset) and wedge position.
ScaleBlocks scale_blocks(const CoefficientSet& c, const Frame& frame);
DirectionalBlocks directional_blocks(const CoefficientSet& c, const Frame& frame);

enum class HardyVariant { smoothing, tail };

// ||a||_{l_q^alpha} = (sum_k (2^{k alpha} |a_k|)^q)^{1/q}
double weighted_lq_norm(const std::vector<double>& a, double alpha, double q);

struct HardyReport {
  std::vector<double> b;  // the sequence built at the hypothesis bound with constant 1
  double norm_a = 0, norm_b = 0;
  double ratio = 0;       // norm_b / norm_a, 0 for a = 0
  bool in_hypothesis = true;
};

// smoothing: b_k = 2^{-lambda k} (sum_{j<=k} (2^{lambda j} |a_j|)^r)^{1/r}
// tail:      b_k = (sum_{j>=k} |a_j|^r)^{1/r}
// The hypothesis is lambda > alpha and r <= q; the tail variant also needs alpha > 0.
// Outside it the report is still produced and flagged.
HardyReport hardy_check(const std::vector<double>& a, double lambda, double alpha, double r, double q,
                        HardyVariant variant);

struct HardyEnsemble {
  int length = 0;
  int members = 0;
  double max_ratio = 0;       // over all members
  double max_ratio_half = 0;  // over the first half
  double change = 0;          // max_ratio / max_ratio_half - 1
  bool in_hypothesis = true;
};

// Members cycle through impulses, geometric sequences 2^{-beta k}, dense random and
// sparse random sequences; deterministic in the seed.
HardyEnsemble hardy_ensemble(int length, int members, double lambda, double alpha, double r, double q,
                             HardyVariant variant, unsigned seed);

struct NormEquivalence {
  std::vector<double> norm_a, norm_b, ratios;  // ratio = ||f||_A / ||f||_B
  double min = 0, max = 0, spread = 0;         // over all functions
  double spread_half = 0;                      // over the first half of the ensemble
  double change = 0;                           // spread / spread_half - 1
  bool pass = false;                           // change < 10%
};

NormEquivalence norm_equivalence_ratio(const Frame& a, const Frame& b, const std::vector<DigitalImage>& tests,
                                       const NormParams& params, int threads = 1);

// Random coefficients on a few adjacent scales of `frame`, synthesised through it
// (the frame must be Parseval), with a cartoon every `cartoon_every`-th member.
std::vector<DigitalImage> norm_test_ensemble(const Frame& frame, int count, unsigned seed, int cartoon_every = 4);

void write_norm_ratios_csv(std::ostream& os, const NormEquivalence& r);
void write_norm_summary(std::ostream& os, const NormEquivalence& r, const NormParams& params);

}  // namespace pmol
