#pragma once

#include <cstddef>
#include <cstdint>

#include "pdcert/data_matrix.hpp"

namespace pdcert {

enum class TargetKind { regression, classification };

struct SyntheticSpec {
  std::size_t features = 10;
  std::size_t examples = 20;
  double density = 1.0;  // probability that an entry is nonzero
  TargetKind target = TargetKind::regression;
  double noise = 0.1;
  std::uint64_t seed = 0;
};

/// Gaussian design, examples as columns. Targets come from a planted model
/// with roughly a third of the weights nonzero: x^T theta + noise for
/// regression, sign(x^T theta + noise) for classification.
LabeledDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace pdcert
