#pragma once

#include <vector>

#include "strq/source_model.hpp"

namespace strq {

// Per-bias-level monotone boundary vectors. Row j partitions [a_x, b_x] into
// num_cells ordered intervals for the j-th s level:
//   bounds[j] = [q_{s,0}, ..., q_{s,M}] with q_{s,0} = a_x, q_{s,M} = b_x and
//   q_{s,m} <= q_{s,m+1}.
struct BoundaryMatrix {
  int num_cells = 0;
  std::vector<std::vector<double>> bounds;
};

// One receiver action per message index (length num_cells).
struct EstimateVector {
  std::vector<double> values;
};

// A classifier participating in a population mixture with the given weight.
struct MixtureComponent {
  const BoundaryMatrix* classifier = nullptr;
  double weight = 0.0;
};

// Result of the weighted-mixture conditional-mean computation. empty_cells
// holds 0-based message indices whose total mixture mass fell below the
// empty-cell threshold (their estimate is the midpoint of the hull of the
// contributing intervals). cell_mass holds the total mixture mass per message.
struct MixtureEstimates {
  EstimateVector estimates;
  std::vector<int> empty_cells;
  std::vector<double> cell_mass;
};

inline constexpr double kEmptyCellThreshold = 1e-12;

// Builds a classifier whose rows are all equal to `edges` (the s-independent
// special case, e.g. the honest quantizer). `edges` is the full row,
// [a_x, interior..., b_x], so it must have at least two entries.
BoundaryMatrix constant_rows(const SourceModel& model,
                             const std::vector<double>& edges);

// Shape/monotonicity validation; throws std::invalid_argument on violation.
void validate_boundaries(const SourceModel& model, const BoundaryMatrix& q);

// Message index in [1:M] for realization (x, s); s snaps to the nearest grid
// level, ties at an interior boundary go to the lower-indexed cell. Throws
// std::domain_error when x lies outside [a_x, b_x].
int encode(const SourceModel& model, const BoundaryMatrix& q, double x,
           double s);

// Weighted-mixture conditional means, one value per message:
//   values[m] = Σ_i w_i Σ_j w_s(j)·m1(j, cell m of classifier i)
//             / Σ_i w_i Σ_j w_s(j)·m0(j, cell m of classifier i).
// Realizes the honest estimates (one classifier, weight 1), the level-2
// perceived estimates (two classifiers weighted by the perceived pmf) and the
// actual receiver estimates (three classifiers weighted by the true pmf).
// Weights must be nonnegative and sum to 1; classifiers must share M.
MixtureEstimates perceived_estimates_mixture(
    const SourceModel& model, const std::vector<MixtureComponent>& components);

// Σ_m Σ_j w_s(j) · ∫_{cell m} (x + s·[bias_in_loss] − y_m)² f dx.
double sender_distortion(const SourceModel& model, const BoundaryMatrix& q,
                         const EstimateVector& y, bool bias_in_loss);

// Per-component receiver distortion Σ_m Σ_j w_s(j)·∫_{cell m} (x − y_m)² f dx,
// one entry per mixture component (unweighted).
std::vector<double> receiver_distortion_components(
    const SourceModel& model, const std::vector<MixtureComponent>& components,
    const EstimateVector& y);

// Σ_i w_i · receiver_distortion_components[i].
double receiver_distortion_mixture(const SourceModel& model,
                                   const std::vector<MixtureComponent>& components,
                                   const EstimateVector& y);

}  // namespace strq
