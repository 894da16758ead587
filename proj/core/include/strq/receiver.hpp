#pragma once

#include <array>
#include <string>

#include "strq/cognitive.hpp"
#include "strq/design.hpp"
#include "strq/quantizer.hpp"
#include "strq/source_model.hpp"

namespace strq {

// Full description of one population equilibrium: the fully-rational
// receiver's Bayes-optimal estimates/distortion against the true type mixture
// plus the senders' own (perceived and actual) distortions.
struct EquilibriumReport {
  TypePmf type_pmf;       // p over levels 0..2
  TypePmf perceived_pmf;  // p' over levels 0..1
  EstimateVector actual_estimates;  // y*
  double receiver_distortion = 0.0;  // D_D*
  // Sender distortions against each sender's own perceived estimates (what
  // the sender believes it achieves) and, for analysis, against y*.
  std::array<double, 3> per_type_sender_distortion{};
  std::array<double, 3> per_type_sender_distortion_actual{};
  // Unweighted receiver distortion of each type's classifier under y*;
  // receiver_distortion == Σ p_k · per_type_receiver_contribution[k].
  std::array<double, 3> per_type_receiver_contribution{};
  std::vector<int> empty_cell_flags;
  std::string config_echo;  // resolved experiment-point JSON (filled by the
                            // experiment layer; empty for direct library use)
};

// Builds the report for a population (Q0, Q1, Q2) with true pmf p (levels
// 0..2) and perceived pmf p' (levels 0..1). The designs supply each sender's
// perceived estimates.
EquilibriumReport evaluate_population(
    const SourceModel& model, const BoundaryMatrix& q0,
    const BoundaryMatrix& q1, const BoundaryMatrix& q2, const TypePmf& p,
    const TypePmf& p_prime, const DesignResult& design0,
    const DesignResult& design1, const DesignResult& design2);

}  // namespace strq
