#include "sparsesel/metrics.hpp"

#include <algorithm>

#include "sparsesel/errors.hpp"

namespace sparsesel {

double tpr(const SupportSet& selected, const SupportSet& truth) {
  if (truth.empty()) throw InvalidArgumentError("tpr: true support is empty");
  return static_cast<double>(selected.intersection_size(truth)) /
         static_cast<double>(truth.size());
}

double fdr(const SupportSet& selected, const SupportSet& truth) {
  const Index false_pos = selected.size() - selected.intersection_size(truth);
  return static_cast<double>(false_pos) / static_cast<double>(std::max<Index>(selected.size(), 1));
}

SelectionMetrics selection_metrics(const SupportSet& selected, const SupportSet& truth) {
  return {tpr(selected, truth), fdr(selected, truth)};
}

}  // namespace sparsesel
