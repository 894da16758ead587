#include "strq/receiver.hpp"

#include <stdexcept>

namespace strq {

EquilibriumReport evaluate_population(
    const SourceModel& model, const BoundaryMatrix& q0,
    const BoundaryMatrix& q1, const BoundaryMatrix& q2, const TypePmf& p,
    const TypePmf& p_prime, const DesignResult& design0,
    const DesignResult& design1, const DesignResult& design2) {
  if (static_cast<int>(p.probs.size()) != 3)
    throw std::invalid_argument("evaluate_population: p must cover levels 0..2");
  if (static_cast<int>(p_prime.probs.size()) != 2)
    throw std::invalid_argument("evaluate_population: p' must cover levels 0..1");
  if (q0.num_cells != q1.num_cells || q0.num_cells != q2.num_cells)
    throw std::invalid_argument("evaluate_population: classifier sizes disagree");

  EquilibriumReport report;
  report.type_pmf = p;
  report.perceived_pmf = p_prime;

  const std::vector<MixtureComponent> comps{
      {&q0, p.probs[0]}, {&q1, p.probs[1]}, {&q2, p.probs[2]}};
  MixtureEstimates mix = perceived_estimates_mixture(model, comps);
  report.actual_estimates = std::move(mix.estimates);
  report.empty_cell_flags = std::move(mix.empty_cells);

  const std::vector<double> contribs =
      receiver_distortion_components(model, comps, report.actual_estimates);
  double dd = 0.0;
  for (int k = 0; k < 3; ++k) {
    report.per_type_receiver_contribution[k] = contribs[k];
    dd += p.probs[k] * contribs[k];
  }
  report.receiver_distortion = dd;

  // Perceived sender distortions: each sender's own classifier against the
  // estimates it believes in (honest sender excludes the bias from its loss).
  report.per_type_sender_distortion[0] =
      sender_distortion(model, q0, design0.perceived_estimates, false);
  report.per_type_sender_distortion[1] =
      sender_distortion(model, q1, design1.perceived_estimates, true);
  report.per_type_sender_distortion[2] =
      sender_distortion(model, q2, design2.perceived_estimates, true);

  // Analysis extras: the same losses under the actual receiver estimates.
  report.per_type_sender_distortion_actual[0] =
      sender_distortion(model, q0, report.actual_estimates, false);
  report.per_type_sender_distortion_actual[1] =
      sender_distortion(model, q1, report.actual_estimates, true);
  report.per_type_sender_distortion_actual[2] =
      sender_distortion(model, q2, report.actual_estimates, true);

  return report;
}

}  // namespace strq
