#include "pmol/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pmol/io.hpp"

namespace pmol {

FrequencyGrid::FrequencyGrid(int n_, double extent_) : n(n_), extent(extent_) {
  if (n < 2 || (n & (n - 1)) != 0) throw ParameterError("grid size must be a power of two, got " + std::to_string(n));
  if (!(extent > 0)) throw ParameterError("grid extent must be positive");
}

std::string FrequencyGrid::id() const {
  std::ostringstream os;
  os << "grid(n=" << n << ",extent=" << extent << ")";
  return os.str();
}

void FrequencyGrid::require_scale(int jmax) const {
  if (extent < std::ldexp(1.0, jmax + 1))
    throw ResolutionError(id() + " does not resolve scale 2^" + std::to_string(jmax) + " (needs extent >= 2^" +
                          std::to_string(jmax + 1) + ")");
}

double Spectrum::norm2() const {
  const double h = grid.spacing();
  return h * h * values.squaredNorm();
}

double DigitalImage::norm2() const {
  const double a = grid.pixel();
  return a * a * values.squaredNorm();
}

bool DigitalImage::finite() const { return values.allFinite(); }

void fft2(CMatrix& m, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> in, out;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::Index lines = pass == 0 ? m.cols() : m.rows();
    const Eigen::Index len = pass == 0 ? m.rows() : m.cols();
    in.resize(len);
    for (Eigen::Index c = 0; c < lines; ++c) {
      for (Eigen::Index r = 0; r < len; ++r) in[r] = pass == 0 ? m(r, c) : m(c, r);
      if (inverse) fft.inv(out, in); else fft.fwd(out, in);
      for (Eigen::Index r = 0; r < len; ++r) (pass == 0 ? m(r, c) : m(c, r)) = out[r];
    }
  }
}

Spectrum to_spectrum(const DigitalImage& f) {
  Spectrum F(f.grid);
  F.values = f.values;
  fft2(F.values, false);
  const double a = f.grid.pixel();
  F.values *= a * a;
  return F;
}

DigitalImage to_image(const Spectrum& F) {
  DigitalImage f(F.grid);
  f.values = F.values;
  fft2(f.values, true);
  const double h = F.grid.spacing();
  f.values *= h * h;
  return f;
}

cplx pairing(const Spectrum& a, const Spectrum& b) {
  if (a.grid.n != b.grid.n || a.grid.extent != b.grid.extent) throw ParameterError("spectra live on different grids");
  const double h = a.grid.spacing();
  return h * h * (a.values.array() * b.values.array().conjugate()).sum();
}

void write_image_binary(const std::string& path, const DigitalImage& f) {
  static_assert(std::endian::native == std::endian::little, "binary image format assumes a little-endian host");
  std::ostringstream os;
  os << f.grid.n << ' ' << std::setprecision(17) << f.grid.extent << '\n';
  std::string data = os.str();
  const std::size_t head = data.size();
  data.resize(head + sizeof(double) * std::size_t(f.grid.n) * f.grid.n);
  char* dst = data.data() + head;
  for (int p = 0; p < f.grid.n; ++p)
    for (int q = 0; q < f.grid.n; ++q, dst += sizeof(double)) {
      const double v = f.values(p, q).real();
      std::memcpy(dst, &v, sizeof(double));
    }
  atomic_write(path, data);
}

DigitalImage read_image_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open image " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  int n = 0;
  double extent = 0;
  if (!(hs >> n >> extent)) throw ParameterError("malformed image header in " + path);
  DigitalImage f(FrequencyGrid(n, extent));
  std::vector<double> buf(std::size_t(n) * n);
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size() * sizeof(double)));
  if (!in) throw ParameterError("truncated image data in " + path);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) f.values(p, q) = buf[std::size_t(p) * n + q];
  return f;
}

void write_image_csv(std::ostream& os, const DigitalImage& f) {
  const auto old = os.precision(17);
  for (int p = 0; p < f.grid.n; ++p) {
    for (int q = 0; q < f.grid.n; ++q) os << (q ? "," : "") << f.values(p, q).real();
    os << '\n';
  }
  os.precision(old);
}

}  // namespace pmol
