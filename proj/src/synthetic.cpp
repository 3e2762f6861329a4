#include "pdcert/synthetic.hpp"

#include <stdexcept>
#include <vector>

#include "pdcert/random.hpp"

namespace pdcert {

LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.features == 0 || spec.examples == 0) throw std::invalid_argument("synthetic: empty shape");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw std::invalid_argument("synthetic: density must be in (0, 1]");
  SplitMix64 rng(spec.seed);

  Vector theta = Vector::Zero(static_cast<Eigen::Index>(spec.features));
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (rng.below(3) == 0) theta[j] = rng.normal();
  }
  if (theta.isZero()) theta[0] = 1.0;

  std::vector<std::vector<Entry>> columns(spec.examples);
  Vector labels(static_cast<Eigen::Index>(spec.examples));
  for (std::size_t i = 0; i < spec.examples; ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < spec.features; ++j) {
      if (spec.density < 1.0 && rng.uniform() >= spec.density) continue;
      const double x = rng.normal();
      columns[i].push_back({j, x});
      score += x * theta[static_cast<Eigen::Index>(j)];
    }
    score += spec.noise * rng.normal();
    labels[static_cast<Eigen::Index>(i)] =
        spec.target == TargetKind::regression ? score : (score >= 0.0 ? 1.0 : -1.0);
  }
  return {DataMatrix(spec.features, std::move(columns)), std::move(labels)};
}

}  // namespace pdcert
