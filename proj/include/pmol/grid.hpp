#pragma once
// Frequency grids, periodic images and their spectra.

#include <Eigen/Core>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmol/errors.hpp"

namespace pmol {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using RMatrix = Eigen::MatrixXd;

// n x n frequency samples xi = h*m, m in [-n/2, n/2)^2, h = 2*extent/n.
// The dual spatial torus has period 1/h and pixel size 1/(2*extent).
struct FrequencyGrid {
  int n = 512;
  double extent = 128;

  FrequencyGrid() = default;
  FrequencyGrid(int n_, double extent_);

  double spacing() const { return 2 * extent / n; }
  double period() const { return 1 / spacing(); }
  double pixel() const { return period() / n; }
  double freq(int m) const { return spacing() * m; }
  // storage position of frequency index m (FFT order)
  int slot(int m) const { return m < 0 ? m + n : m; }
  int index_of_slot(int p) const { return p >= n / 2 ? p - n : p; }
  std::string id() const;
  void require_scale(int jmax) const;  // extent >= 2^{jmax+1}
};

// Spectrum on a FrequencyGrid in FFT order: F(p, q) is the value at (freq(index_of_slot(p)), freq(index_of_slot(q))).
// Pairing <F, G> = h^2 sum F conj(G) equals the L2 inner product on the torus.
struct Spectrum {
  FrequencyGrid grid;
  CMatrix values;

  explicit Spectrum(const FrequencyGrid& g) : grid(g), values(CMatrix::Zero(g.n, g.n)) {}
  double norm2() const;
};

// Samples on the torus [0, L)^2 with L = grid.period(); pixel (p, q) sits at (p, q) * L / n.
struct DigitalImage {
  FrequencyGrid grid;
  CMatrix values;

  explicit DigitalImage(const FrequencyGrid& g) : grid(g), values(CMatrix::Zero(g.n, g.n)) {}
  double norm2() const;  // L2 norm squared by the pixel rule
  bool finite() const;
};

Spectrum to_spectrum(const DigitalImage& f);
DigitalImage to_image(const Spectrum& F);

cplx pairing(const Spectrum& a, const Spectrum& b);

// Two-dimensional FFT helpers on Eigen matrices (forward: e^{-2 pi i}, inverse unscaled).
void fft2(CMatrix& m, bool inverse);

// Binary image: text header "n extent\n" then n*n float64 little-endian (real parts, row-major).
void write_image_binary(const std::string& path, const DigitalImage& f);
DigitalImage read_image_binary(const std::string& path);
void write_image_csv(std::ostream& os, const DigitalImage& f);

}  // namespace pmol
