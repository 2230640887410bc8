#pragma once
// Frame families evaluated pointwise in the frequency domain, and the molecule
// envelope check.

#include <Eigen/Core>
#include <complex>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "pmol/grid.hpp"
#include "pmol/param.hpp"
#include "pmol/windows.hpp"

namespace pmol {

struct MoleculeOrder {
  double R = 0, M = 0, N1 = 0, N2 = 0;
  bool arbitrary = false;  // every finite order is claimed; R..N2 then hold the order actually tested

  static MoleculeOrder any() { return {0, 0, 0, 0, true}; }
};

enum class Family { curvelet_bl, shearlet_bl, shearlet_compact, wavelet_meyer };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

// Separable compactly supported generator: psi1 = (centred difference)^M of the
// cardinal B-spline of order m, psi2 = B-spline of order m + 2.
struct CompactGenerator {
  int spline_order = 4;
  int vanishing_moments = 6;

  std::complex<double> psi1_hat(double xi) const;
  double psi2_hat(double xi) const;
  double psi1(double x) const;
  double psi2(double x) const;
  double psi1_support() const { return 0.5 * (vanishing_moments + spline_order); }  // half-width
  double psi2_support() const { return 0.5 * (spline_order + 2); }
  // L2 norms squared, exact via the B-spline autocorrelation B_m * B_m = B_{2m}.
  double psi1_energy() const;
  double psi2_energy() const;
};

CompactGenerator shearlet_compact_generator(int spline_order, int vanishing_moments);

// Centred cardinal B-spline of order m (degree m-1), support [-m/2, m/2].
double bspline(int m, double x);
double sinc(double x);  // sin(pi x)/(pi x)

struct FrameSpec {
  Family family = Family::curvelet_bl;
  int jmax = 6;
  WindowPair windows{7};
  CompactGenerator compact{};
  MoleculeOrder claimed_order = MoleculeOrder::any();
  std::vector<Cone> cones;  // shearlet half-cones to keep; empty keeps all

  Parametrization parametrization() const;
  std::string id() const;
  bool parseval() const { return family != Family::shearlet_compact && cones.empty(); }
};

FrameSpec make_curvelet_spec(int jmax, int smoothness = 7);
FrameSpec make_shearlet_spec(int jmax, int smoothness = 7);
FrameSpec make_compact_shearlet_spec(int jmax, int spline_order, int vanishing_moments, MoleculeOrder claimed);
FrameSpec make_wavelet_spec(int jmax, int smoothness = 7);

// Shearlet scale labels sit three octaves below the curvelet ones for the same
// frequency band; this maps a curvelet jmax to the matching shearlet/wavelet jmax.
inline int matched_shearlet_jmax(int curvelet_jmax) { return curvelet_jmax + 3; }

// Octaves between a family's scale label j and the band 2^s its elements occupy;
// frames report s = max(0, j - offset) so that pseudo-distances compare like with like.
inline int scale_offset(Family f) {
  switch (f) {
    case Family::shearlet_bl:
    case Family::wavelet_meyer: return 3;
    case Family::shearlet_compact: return 1;
    default: return 0;
  }
}

// Radial and angular profiles used by the frames. All windows are real and
// non-negative; squares sum to one over each family's index set.
namespace profile {

double curvelet_radial(const WindowPair& w, int j, int jmax, double r);
double curvelet_angular(const WindowPair& w, int j, int l, double angle);
double shearlet_radial(const WindowPair& w, int j, int jmax, double xi1, double xi2);
double shearlet_angular(int cone, int j, int l, double xi1, double xi2, const WindowPair& w);
double shearlet_coarse(const WindowPair& w, double xi1, double xi2);

}  // namespace profile

// Window of an index without the translation phase (real for the bandlimited families).
std::complex<double> element_window(const FrameSpec& spec, const Index& idx, double xi1, double xi2);

// Full element value including 2^{-3j/4} normalisation and the modulation by x_lambda.
std::complex<double> curvelet_hat(const FrameSpec& spec, const Index& idx, const Eigen::Vector2d& xi);
std::complex<double> shearlet_hat_bandlimited(const FrameSpec& spec, const Index& idx, const Eigen::Vector2d& xi);
std::complex<double> shearlet_hat_compact(const FrameSpec& spec, const Index& idx, const Eigen::Vector2d& xi);

// psi1_hat(xi1) * psi2_hat(xi2 / xi1) with psi2_hat = V; zero on the xi1 = 0 line.
double shearlet_generator_hat(const WindowPair& w, double xi1, double xi2);

// min(1, 2^{-s} + |xi1| + 2^{-s/2}|xi2|)^M <|xi|>^{-N1} <xi2>^{-N2}, <t> = (1 + t^2)^{1/2}.
template <class T>
T envelope_bound(const MoleculeOrder& o, T s, const Vec2<T>& xi) {
  using std::pow;
  const T low = std::min(T(1), std::exp2(-s) + std::abs(xi[0]) + std::exp2(-s / T(2)) * std::abs(xi[1]));
  const T radial = std::sqrt(T(1) + xi.squaredNorm());
  const T ang = std::sqrt(T(1) + xi[1] * xi[1]);
  return pow(low, T(o.M)) * pow(radial, -T(o.N1)) * pow(ang, -T(o.N2));
}

// Generic molecule profile a^(lambda)(eta) = 2^{3s/4} m_hat(R_theta^T D_{2^s} eta), phase removed.
std::complex<double> molecule_profile(const FrameSpec& spec, const Index& idx, const ParamPoint& p,
                                      const Eigen::Vector2d& eta);

struct MoleculeCheck {
  Index idx;
  double constant = 0;          // max over grid and |beta| <= min(R,2) of |d^beta a| / envelope
  double constant_refined = 0;  // same on the refined grid
  Eigen::Vector2d worst_eta = Eigen::Vector2d::Zero();
};

struct MoleculeReport {
  std::vector<MoleculeCheck> per_index;
  double max_constant = 0;
  double max_constant_refined = 0;
  double relative_change = 0;
  int derivative_order = 0;  // |beta| actually tested
  int smoothness = 0;        // window order nu used by the family
  bool pass = false;         // max constant changes < 5% on refinement
};

// Refinement quadruples n and doubles extent (spacing halves, domain doubles).
MoleculeReport verify_molecule_condition(const FrameSpec& spec, const MoleculeOrder& order,
                                         const std::vector<Index>& sample, const FrequencyGrid& grid);

void write_spec_config(std::ostream& os, const FrameSpec& spec);

}  // namespace pmol
