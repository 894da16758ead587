#pragma once

#include <string>

#include "strq/design.hpp"
#include "strq/quantizer.hpp"
#include "strq/source_model.hpp"

namespace strq {

// JSON document for a classifier and its estimates:
//   {"M": ..., "s_levels": [...], "bounds": [[...], ...], "estimates": [...]}
std::string classifier_to_json(const SourceModel& model,
                               const BoundaryMatrix& q,
                               const EstimateVector& estimates);

// Parses the document above back into a boundary matrix and estimates.
// Throws std::runtime_error on malformed input.
void classifier_from_json(const std::string& text, BoundaryMatrix& q,
                          EstimateVector& estimates);

// JSON document for a complete design (classifier document plus level tag,
// sender distortion, winning initialization, trace length and empty-cell
// flags).
std::string design_result_to_json(const SourceModel& model,
                                  const DesignResult& design);

}  // namespace strq
