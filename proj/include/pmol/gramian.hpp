#pragma once
// Cross-Gramians between two discretised frames, decay fits against the index
// distance, the l^p operator-norm bound and the truncated sparsity-equivalence test.

#include <Eigen/Core>
#include <iosfwd>
#include <utility>
#include <vector>

#include "pmol/frame.hpp"

namespace pmol {

struct SystemElement {
  Index idx;
  ParamPoint point;
};

// entries(i, j) = <a_i, b_j>, omega(i, j) = omega(point a_i, point b_j) with the
// location difference reduced to the nearest periodic copy.
struct GramianBlock {
  std::vector<SystemElement> rows, cols;
  CMatrix entries;
  RMatrix omega;
};

// Paired entries <a_i, b_i>, i.e. a sparse sample of a Gramian.
struct GramianSample {
  std::vector<SystemElement> a, b;
  std::vector<cplx> entries;
  std::vector<double> omega;

  std::size_t size() const { return entries.size(); }
};

GramianBlock compute_gramian(const Frame& a, const Frame& b, const std::vector<Index>& rows,
                             const std::vector<Index>& cols);

// Entries for explicit pairs. Pairs are grouped by orientation so each frequency
// overlap is built once. One of the frames may be a compact shearlet frame.
GramianSample gramian_pairs(const Frame& a, const Frame& b, const std::vector<std::pair<Index, Index>>& pairs);

struct PairSampling {
  int jmin_a = 0, jmax_a = 5;
  int jmin_b = 0, jmax_b = 5;
  double radius = 0.25;        // element locations within this disc around the origin
  std::size_t pairs = 20000;
  std::size_t pool = 400000;   // candidates drawn before stratification
  unsigned seed = 1;
  bool require_top = false;    // keep only pairs touching scale jmax_a or jmax_b
};

// Random pairs whose frequency supports overlap, stratified by (|s_a - s_b|, omega
// decade) and deterministic in the seed. Pairs with disjoint supports are exactly
// zero and are not drawn.
std::vector<std::pair<Index, Index>> sample_pairs(const Frame& a, const Frame& b, const PairSampling& opt);

struct DecayFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // rms of the log residuals
  int n_pairs = 0;
  int floor_count = 0;  // qualifying omega but |entry| <= 1e-14
  double omega_min = 1;
};

constexpr double kEntryFloor = 1e-14;

// Least squares of log|entry| against log omega over entries with omega >= omega_min
// and |entry| > 1e-14. Throws InsufficientData below 30 pairs.
DecayFit decay_fit(const std::vector<cplx>& entries, const std::vector<double>& omega, double omega_min);
DecayFit decay_fit(const GramianBlock& g, double omega_min);
DecayFit decay_fit(const GramianSample& g, double omega_min);

// max |entry| omega^N
double max_weighted_entry(const GramianSample& g, double N);

// max(sup_i sum_j |A_ij|^r, sup_j sum_i |A_ij|^r)^{1/r}, r = min(1, p).
double operator_p_norm_bound(const CMatrix& A, double p);
double lp_norm(const Eigen::VectorXcd& x, double p);

struct SparsityLevel {
  int jmax_a = 0, jmax_b = 0;
  double radius = 0.5;  // translation window: elements with |x_mu - x_lambda| <= radius
};

struct SparsityStep {
  SparsityLevel level;
  double row_sup = 0;  // sup over probes of a in sum_b |G|^r
  double col_sup = 0;  // sup over probes of b in sum_a |G|^r
  double bound = 0;
  double periodization = 0;  // max fraction of a compact probe's energy outside the grid
};

struct SparsityReport {
  double p = 1;
  std::vector<SparsityStep> steps;
  double final_growth = 0;  // bound_last / bound_previous - 1
  bool pass = false;        // final_growth < 2%
};

// Probes are the `probes_per_wedge` lattice elements closest to the origin in every
// orientation with j <= jmax; their row (column) sums run over all elements of the
// other frame inside the window.
SparsityReport sparsity_equivalence_test(const Frame& a, const Frame& b, double p,
                                         const std::vector<SparsityLevel>& levels, int probes_per_wedge = 2);

// Trajectory (jmax - t, window / 2^t), t = steps-1..0, with scales offset per frame and
// window measured in units of 1/64 of the torus length.
std::vector<SparsityLevel> sparsity_levels(int jmax_a, int jmax_b, int window, double period, int steps = 3);

void write_gramian_csv(std::ostream& os, const GramianSample& g);
void write_gramian_csv(std::ostream& os, const GramianBlock& g);
void write_decay_fit(std::ostream& os, const DecayFit& f);

}  // namespace pmol
