#pragma once
// Cartoon images and N-term approximation curves.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmol/frame.hpp"

namespace pmol {

// Bivariate polynomial of total degree <= 4 on the unit square, coefficients of
// x^a y^b in graded order (a + b = 0, 1, ..., 4; a descending within a degree).
struct Poly2 {
  std::array<double, 15> c{};

  double operator()(double x, double y) const;
  // max over [0,1]^2 of the value and all partial derivatives up to order two
  double c2_norm() const;
};

// Smoothed star r(phi) = rho0 + sum_{h=1..H} a_h cos(h phi + b_h) around `center`.
struct StarBoundary {
  double cx = 0.5, cy = 0.5;
  double rho0 = 0.3;
  std::vector<double> a, b;

  double radius(double phi) const;
  double radius_d1(double phi) const;
  double radius_d2(double phi) const;
  bool inside(double x, double y) const;
  double max_curvature(int samples = 4096) const;
  double min_radius(int samples = 4096) const;
  double max_radius(int samples = 4096) const;
};

struct CartoonOptions {
  int harmonics = 4;
  double amplitude = 0.08;  // |a_h| <= amplitude / h
  double rho0 = 0.3;
  bool edge = true;          // false drops f1 so the image is smooth
  int subsamples = 4;        // per axis: 16 samples per pixel
  double scene = 1.0;        // side of the supporting square inside [0, L)^2
};

// f = f0 + f1 * chi_B on [0, scene]^2; f0 carries a smooth cutoff so it vanishes
// with all derivatives on the square boundary, f1 is a plain polynomial.
struct CartoonImage {
  unsigned seed = 0;
  Poly2 f0, f1;
  StarBoundary boundary;
  double f0_c2 = 0, f1_c2 = 0, curvature = 0;
  bool edge = true;
  double scene = 1.0;
  DigitalImage rendered;

  explicit CartoonImage(const FrequencyGrid& g) : rendered(g) {}
  double value(double x, double y) const;  // continuous model at a point of the scene
};

CartoonImage make_cartoon(unsigned seed, const FrequencyGrid& grid, const CartoonOptions& opt = {});

struct NTermCurve {
  std::string frame_id;
  std::vector<int> N;
  std::vector<double> errors;          // ||f - f_N||^2, or the coefficient tail when `proxy`
  std::vector<double> tail;            // sum_{n > N} |c_(n)|^2
  std::vector<double> sorted_coeffs;   // all magnitudes, decreasing
  double energy = 0;                   // ||f||^2
  bool proxy = false;
};

// Powers of two from 2^4 up to min(2^13, total / 4).
std::vector<int> default_n_grid(std::size_t total);

// f_N keeps the N largest coefficients. Parseval frames reconstruct; otherwise
// `allow_proxy` must be set and the curve reports the coefficient tail energy.
NTermCurve n_term_error_curve(const DigitalImage& f, const Frame& frame, const std::vector<int>& N_values,
                              bool allow_proxy = false);
NTermCurve n_term_error_curve(const CartoonImage& f, const FrameSpec& spec, const FrequencyGrid& grid,
                              const std::vector<int>& N_values, bool allow_proxy = false);

struct RateFit {
  double slope = 0;          // log error against log N
  double intercept = 0;
  int points = 0;
  double coeff_slope = 0;    // log |c_(n)| against log n over the same range
};

// Least squares over curve points with Nmin <= N <= Nmax; needs at least 8 points.
RateFit rate_fit(const NTermCurve& curve, int Nmin, int Nmax, int min_points = 8);

struct ComparisonRow {
  std::string frame_id;
  RateFit fit;
  NTermCurve curve;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  // gaps(i, k) = slope_i - slope_k
  Eigen::MatrixXd gaps;
};

Comparison compare_systems(const CartoonImage& f, const std::vector<FrameSpec>& specs, const FrequencyGrid& grid,
                           const std::vector<int>& N_values, int Nmin, int Nmax, int threads = 1);

void write_curve_csv(std::ostream& os, const NTermCurve& c);
void write_comparison_csv(std::ostream& os, const Comparison& c);
void write_comparison_text(std::ostream& os, const Comparison& c);

}  // namespace pmol
