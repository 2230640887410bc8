#include "pmol/windows.hpp"

#include <ostream>

namespace pmol {

void write_window_csv(std::ostream& os, const WindowPair& w, int samples) {
  if (samples < 2) throw ParameterError("need at least two window samples");
  os << "t,W,V\n";
  const auto old = os.precision(17);
  for (int i = 0; i < samples; ++i) {
    const double t = 2.5 * i / (samples - 1);
    os << t << ',' << w.W(t) << ',' << w.V(t) << '\n';
  }
  os.precision(old);
}

}  // namespace pmol
