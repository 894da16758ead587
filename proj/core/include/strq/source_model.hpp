#pragma once

#include <vector>

namespace strq {

// Quadrature resolution for the source rectangle. X carries a composite
// Gauss-Legendre rule (x_panels panels of x_nodes nodes each); S carries
// s_levels uniformly spaced levels, each the midpoint of an equal-width panel
// whose width is the level's quadrature weight (1-point Gauss-Legendre per
// panel). s_levels should be odd so that s = 0 is an exact node for centered
// sources.
struct GridSpec {
  int x_panels = 64;
  int x_nodes = 8;
  int s_levels = 65;
};

// Interval integrals of the joint density row f(., s_j):
//   m0 = ∫ f dx,  m1 = ∫ x f dx,  m2 = ∫ x² f dx.
struct IntervalMoments {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

// Jointly Gaussian (X, S) truncated to [mean ± 5σ] per coordinate and
// renormalized so the grid quadrature of the joint density over the rectangle
// is exactly 1. Immutable after construction; safe for shared read-only use.
class SourceModel {
 public:
  SourceModel(double mean_x, double mean_s, double sigma_x, double sigma_s,
              double rho, GridSpec grid = GridSpec{});

  double mean_x() const { return mean_x_; }
  double mean_s() const { return mean_s_; }
  double sigma_x() const { return sigma_x_; }
  double sigma_s() const { return sigma_s_; }
  double rho() const { return rho_; }
  double a_x() const { return a_x_; }
  double b_x() const { return b_x_; }
  double a_s() const { return a_s_; }
  double b_s() const { return b_s_; }
  const GridSpec& grid() const { return grid_; }

  int num_s_levels() const { return grid_.s_levels; }
  double s_level(int s_index) const { return s_levels_[s_index]; }
  double s_weight(int s_index) const { return s_weight_; }
  int nearest_s_index(double s) const;

  // Truncated-and-renormalized joint density. Throws std::domain_error for
  // points outside the support rectangle.
  double joint_density(double x, double s) const;

  // ∫ {1, x, x²} f(x, s_j) dx over [x_lo, x_hi] ⊆ [a_x, b_x]. Full interior
  // panels come from precomputed prefix sums; the partial end panels are
  // integrated with a fresh Gauss-Legendre rule on the clipped subinterval.
  // Throws std::invalid_argument on reversed bounds.
  IntervalMoments interval_moments(int s_index, double x_lo, double x_hi) const;

  // S-aggregated (marginal) interval moments: Σ_j w_j · interval_moments(j).
  IntervalMoments marginal_interval_moments(double x_lo, double x_hi) const;

  // ∫ f(x, s_j) dx over [x_lo, x_hi].
  double cell_mass(int s_index, double x_lo, double x_hi) const;

  // ∫ x f(x, s_j) dx over [x_lo, x_hi].
  double cell_first_moment(int s_index, double x_lo, double x_hi) const;

  // ∫ (x + s_j·[bias_in_loss] − target)² f(x, s_j) dx over [x_lo, x_hi],
  // evaluated exactly from the moment triple.
  double quadratic_distortion_integral(int s_index, double x_lo, double x_hi,
                                       double target, bool bias_in_loss) const;

  // Grid quadrature of the joint density over the whole rectangle (equals 1
  // after renormalization; exposed for conservation tests).
  double total_mass() const;

 private:
  void check_s_index(int s_index) const;
  void check_bounds(double x_lo, double x_hi) const;
  IntervalMoments fresh_panel_moments(int s_index, double lo, double hi) const;

  double mean_x_, mean_s_, sigma_x_, sigma_s_, rho_;
  double a_x_, b_x_, a_s_, b_s_;
  GridSpec grid_;

  double tau_;       // conditional std. dev. of X given S
  double s_weight_;  // uniform s-panel width
  double panel_w_;   // x-panel width
  double renorm_ = 1.0;  // 1 / (raw truncated grid mass)

  std::vector<double> s_levels_;  // s_levels entries
  std::vector<double> row_amp_;   // per-row renormalized amplitude
  std::vector<double> row_mu_;    // per-row conditional mean of X

  std::vector<double> gl_nodes_;    // x_nodes Gauss-Legendre nodes on [-1,1]
  std::vector<double> gl_weights_;  // matching weights

  // Per-row prefix sums over panel integrals of {f, xf, x²f}; each row has
  // x_panels + 1 entries per moment, prefix_[row][3*p + c].
  std::vector<std::vector<double>> prefix_;
};

}  // namespace strq
