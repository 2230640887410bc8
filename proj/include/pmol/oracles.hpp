#pragma once
// Quadrature checks of the envelope and integral estimates behind almost
// orthogonality. Each check returns lhs / rhs with the implicit constant set to one.

#include <iosfwd>
#include <string>
#include <vector>

#include "pmol/errors.hpp"

namespace pmol {

struct EnvelopeParams {
  double s = 0;
  double theta = 0;
  double M = 0, N1 = 0, N2 = 0;
};

// min(1, 2^{-s}(1 + r))^M (1 + 2^{s/2} |sin(phi + theta)|)^{-N2} (1 + 2^{-s} r)^{-N1}
double envelope_S(const EnvelopeParams& p, double r, double phi);

struct QuadratureOptions {
  double tol = 1e-10;      // relative, per adaptive Gauss-Kronrod piece
  unsigned max_depth = 15;

  QuadratureOptions refined() const { return {tol * 1e-2, max_depth + 5}; }
};

struct OracleResult {
  double lhs = 0, rhs = 0, ratio = 0;
  double ratio_refined = 0;  // with the refined quadrature (or sample grid)
  double drift = 0;          // |ratio_refined / ratio - 1|
  bool in_hypothesis = true;
};

// int_R (1 + a|x|)^{-N} (1 + a2|x - y|)^{-N} dx  vs  max(a, a2)^{-1} (1 + min(a, a2)|y|)^{-N}
OracleResult grafakos_check(double a, double a2, double y, double N, const QuadratureOptions& q = {});

// int_T (1 + a|sin phi|)^{-N} (1 + a2|sin(phi + theta)|)^{-N} dphi  vs  max(a, a2)^{-1} (1 + min(a, a2)|theta|)^{-N}
OracleResult bumps_check(double a, double a2, double theta, double N, const QuadratureOptions& q = {});

struct PolarSamples {
  int radial = 400;   // log-spaced radii up to 2^{s+12}, plus r = 0, 1, 2^s
  int angular = 256;  // uniform angles, plus phi = -theta

  PolarSamples refined() const { return {2 * radial, 2 * angular}; }
};

// max over samples of the left side of the polar estimate over S_{M-L, N1, L}; the
// refined ratio doubles both sample counts.
OracleResult polar_estimate_check(const EnvelopeParams& p, double L, const PolarSamples& samples = {});

// 2^{-3(s1+s2)/4} int int S_1 S_2 r dr dphi  vs  2^{-A|s1-s2|} (1 + 2^{min(s1,s2)/2} |theta1 - theta2|)^{-B}.
// The envelope product separates into a radial and an angular integral. Outside
// M > A - 5/4, N2 >= B, N1 >= A + 3/4 the result is flagged.
OracleResult freqangdec_check(double s1, double s2, double theta1, double theta2, double A, double B, double M,
                              double N1, double N2, const QuadratureOptions& q = {});

struct SweepRow {
  std::vector<double> params;
  OracleResult result;
};

struct OracleSweep {
  std::string lemma;
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;
  double max_ratio = 0;
  double max_drift = 0;
  bool in_hypothesis = true;  // every row inside the hypotheses
};

// Parameter grids. `dense` halves the step of every continuous parameter.
OracleSweep grafakos_sweep(double N, bool dense = false);
OracleSweep bumps_sweep(double N, bool dense = false);
OracleSweep polar_sweep(double M, double N1, double N2, double L, int smax = 8, bool dense = false);
// Both argument orders for every scale gap 0..max_gap.
OracleSweep freqangdec_sweep(double A, double B, double M, double N1, double N2, int max_gap = 6,
                             double theta_gap = 0.1, bool dense = false);

// ratio of the largest ratio at gap g, i = 0..max_gap, from a freqangdec sweep
std::vector<double> ratio_by_gap(const OracleSweep& s);

void write_sweep_csv(std::ostream& os, const OracleSweep& s);

}  // namespace pmol
