#pragma once

#include "sparsesel/types.hpp"

namespace sparsesel {

/// |selected ∩ truth| / |truth|. Throws InvalidArgumentError when truth is empty.
double tpr(const SupportSet& selected, const SupportSet& truth);

/// |selected \ truth| / max(|selected|, 1).
double fdr(const SupportSet& selected, const SupportSet& truth);

SelectionMetrics selection_metrics(const SupportSet& selected, const SupportSet& truth);

}  // namespace sparsesel
