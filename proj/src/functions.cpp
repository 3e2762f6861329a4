#include "pdcert/functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdcert {

double conjugate_oracle(const std::function<double(double)>& fn, double x, double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0.0)) throw std::invalid_argument("conjugate_oracle: need lo < hi and step > 0");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  double best = -kInfinity;
  for (long long k = 0; k <= count; ++k) {
    const double u = lo + static_cast<double>(k) * step;
    const double value = fn(u);
    if (std::isinf(value) && value > 0.0) continue;
    best = std::max(best, x * u - value);
  }
  return best;
}

}  // namespace pdcert
