#pragma once
// Discretised frames on a FrequencyGrid: per-orientation windows, wrapped
// translation lattices, analysis and synthesis.
//
// Every (cone, j, l) orientation ("wedge") owns a lattice x_k = (k_u d_u - s k_v d_v, k_v d_v)
// in wrap coordinates (u, v) = (xi1, xi2), or (xi2, xi1) for transposed wedges, with
// d_u = L / n_u and d_v = L / n_v on the torus of period L. Coefficients come from
// two passes of unscaled inverse DFTs over the wrapped product F conj(U). When the
// support of U fits (span along u <= n_u, every v-chord <= n_v) the wrap is alias-free
// and the windows' square partition gives an exact Parseval identity.

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmol/generators.hpp"
#include "pmol/grid.hpp"
#include "pmol/param.hpp"

namespace pmol {

struct Wedge {
  Index tag;            // cone, j, l; k unused
  double theta = 0;     // orientation of the parameter point
  double scale = 0;     // s
  bool transposed = false;
  int n_u = 1, n_v = 1;
  double shear = 0;     // s in the lattice formula
  double norm = 1;      // sqrt(d_u d_v)
  bool alias_free = true;
  bool stored = true;   // false: window evaluated on demand (compact shearlets)
  std::vector<int> slots;           // grid slots p*n + q of the support, sorted by (u, v)
  std::vector<std::complex<double>> values;

  std::size_t count() const { return std::size_t(n_u) * n_v; }
};

// Coefficients per wedge, n_u x n_v each (row k_u, column k_v).
struct CoefficientSet {
  std::string frame_id;
  std::string grid_id;
  std::vector<CMatrix> blocks;

  std::size_t size() const;
  double energy() const;  // sum |c|^2
};

class Frame {
 public:
  Frame(FrameSpec spec, const FrequencyGrid& grid);

  const FrameSpec& spec() const { return spec_; }
  const FrequencyGrid& grid() const { return grid_; }
  const std::vector<Wedge>& wedges() const { return wedges_; }
  std::string id() const { return spec_.id() + "@" + grid_.id(); }
  std::size_t size() const;  // total number of elements

  // wedge position for an index, or -1
  int wedge_of(const Index& idx) const;
  bool contains(const Index& idx) const;
  Index index_of(int wedge, int ku, int kv) const;
  void lattice_of(const Index& idx, int& wedge, int& ku, int& kv) const;

  // Location of a lattice element, reduced to the fundamental cell [-L/2, L/2)^2.
  Eigen::Vector2d location(int wedge, int ku, int kv) const;
  ParamPoint point(const Index& idx) const;
  // Table of all elements whose reduced location lies in the disc of radius `radius`.
  Parametrization parametrization(double radius, int jmax_cut = 1 << 20) const;

  // Window value at a grid frequency index, without phase or the sqrt(d_u d_v) factor.
  std::complex<double> window(int wedge, int m1, int m2) const;

  CoefficientSet analyze(const Spectrum& F) const;
  Spectrum synthesize(const CoefficientSet& c) const;
  Spectrum element(const Index& idx) const;

  // Sum over wedges of |U|^2 at every grid point (1 for a Parseval frame).
  RMatrix symbol() const;

 private:
  FrameSpec spec_;
  FrequencyGrid grid_;
  std::vector<Wedge> wedges_;
  std::unordered_map<Index, int, IndexHash> lookup_;  // k = 0 keys

  void build_bandlimited();
  void build_compact();
  void finish_wedge(Wedge& w);
};

// h^2 sum a(xi) conj(b(xi)) over the grid. Throws ResolutionError when either
// element keeps more than 1e-6 of its energy on the outer frequency ring.
cplx inner_product(const std::function<cplx(const Eigen::Vector2d&)>& a,
                   const std::function<cplx(const Eigen::Vector2d&)>& b, const FrequencyGrid& grid);

CoefficientSet analyze(const DigitalImage& f, const Frame& frame);
// Values only at the requested indices; InvalidIndex if one is not in the frame.
std::vector<cplx> analyze(const DigitalImage& f, const Frame& frame, const std::vector<Index>& indices);
DigitalImage synthesize(const CoefficientSet& c, const Frame& frame);

void write_coefficients_csv(std::ostream& os, const CoefficientSet& c, const Frame& frame);

// Band-limited random test image: Gaussian spectrum on |xi| <= radius, Hermitian so the image is real.
DigitalImage random_bandlimited_image(const FrequencyGrid& grid, double radius, unsigned seed);

}  // namespace pmol
