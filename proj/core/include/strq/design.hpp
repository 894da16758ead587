#pragma once

#include <cstdint>
#include <vector>

#include "strq/cognitive.hpp"
#include "strq/quantizer.hpp"
#include "strq/source_model.hpp"

namespace strq {

// Gradient-descent controls. step_size is the algorithm's step length
// (deliberately NOT named lambda: that name is reserved for the Poisson rate
// of the type distribution to avoid config ambiguity).
struct DescentConfig {
  double step_size = 0.1;
  double epsilon = 1e-9;
  int max_iters = 5000;
  int num_inits = 10;
  double min_gap = 1e-6;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

enum class DesignLevel { level0, level1, level2, full_info };

const char* design_level_name(DesignLevel level);

// How the level-2 designer treats its perceived estimates during descent:
//  - fixed_once: the perceived estimates depend only on the level-0/level-1
//    classifiers and the perceived pmf, so they are computed once and held
//    fixed for the whole design (the objective is then exactly a
//    nearest-neighbor criterion against those estimates).
//  - per_iteration: the perceived estimates are re-derived after every
//    boundary update with the current level-2 classifier standing in for the
//    strategic component of the perceived population, and a step is accepted
//    only if the post-update objective decreases (the same alternating
//    structure the full-information designer uses).
enum class EstimateUpdate { fixed_once, per_iteration };

inline constexpr EstimateUpdate kDefaultLevel2Update = EstimateUpdate::fixed_once;

struct DesignResult {
  DesignLevel level = DesignLevel::level0;
  BoundaryMatrix boundaries;
  EstimateVector perceived_estimates;
  double sender_distortion = 0.0;
  std::vector<double> trace;  // objective after every accepted step
  int init_index = -1;        // winning initialization (num_inits = the
                              // deterministic level-1 start)
  std::vector<int> empty_cell_flags;
};

// Classical Lloyd-Max quantizer for the s-aggregated X marginal: alternates
// conditional means and midpoints from 10 random monotone initializations,
// keeps the lowest-distortion fixed point (ties to the lowest init index).
// Stops when the max boundary movement is < 1e-10 or after 10,000 iterations.
DesignResult lloyd_max(const SourceModel& model, int num_cells,
                       std::uint64_t seed = 0x9e3779b97f4a7c15ull);

// Level-1 shift rule: q_{s,m} = clamp(n_m − s, a_x, b_x); the perceived
// estimates equal the honest ones; the reported distortion includes the bias
// in the loss.
DesignResult design_level1(const DesignResult& nonstrategic,
                           const SourceModel& model);

// Analytic gradient of the level-2 sender distortion with respect to the
// interior boundaries, holding the estimates fixed (Leibniz rule):
//   ∂D/∂q_{s,m} = w_s · f(q_{s,m}, s) · [(q+s−y_m)² − (q+s−y_{m+1})²].
// Returns one row per s level, each with M−1 entries.
std::vector<std::vector<double>> level2_gradient(const SourceModel& model,
                                                 const BoundaryMatrix& q2,
                                                 const EstimateVector& y2);

// Multi-start projected gradient descent for the level-2 sender: minimizes
// the biased sender distortion against the perceived-population estimates
// built from (q0, p'_0) and (q1, p'_1). num_inits random monotone starts plus
// one deterministic start at the level-1 classifier.
DesignResult design_level2(const SourceModel& model, int num_cells,
                           const BoundaryMatrix& q0, const BoundaryMatrix& q1,
                           const TypePmf& p_prime, const DescentConfig& cfg,
                           EstimateUpdate update = kDefaultLevel2Update);

// Fully-rational baseline: descends the biased sender distortion where the
// estimates are the receiver's true best response to the current classifier,
// re-derived after every update; acceptance is tested on the post-update
// objective (update -> estimates -> distortion).
DesignResult design_full_info(const SourceModel& model, int num_cells,
                              const DescentConfig& cfg);

// Row-wise monotonicity repair used between descent steps: sorts interior
// boundaries, clamps to the support and enforces a minimum gap with a forward
// then a backward sweep.
void project_monotone(const SourceModel& model, BoundaryMatrix& q,
                      double min_gap);

}  // namespace strq
