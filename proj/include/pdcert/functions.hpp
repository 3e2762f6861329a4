#pragma once

#include <functional>

#include "pdcert/losses.hpp"
#include "pdcert/regularizers.hpp"

namespace pdcert {

/// Brute-force scalar conjugate: max over the grid lo, lo + step, ..., <= hi
/// of x u - fn(u). Points where fn is +inf are skipped. Intended as a test
/// oracle; for unbounded conjugates the result grows with the grid and the
/// caller decides what that means.
double conjugate_oracle(const std::function<double(double)>& fn, double x, double lo, double hi, double step);

}  // namespace pdcert
