#include "strq/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strq/gauss_legendre.hpp"

namespace strq {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kTruncationSigmas = 5.0;
}  // namespace

SourceModel::SourceModel(double mean_x, double mean_s, double sigma_x,
                         double sigma_s, double rho, GridSpec grid)
    : mean_x_(mean_x),
      mean_s_(mean_s),
      sigma_x_(sigma_x),
      sigma_s_(sigma_s),
      rho_(rho),
      grid_(grid) {
  if (!(sigma_x > 0.0) || !(sigma_s > 0.0))
    throw std::invalid_argument("SourceModel: standard deviations must be positive");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::invalid_argument("SourceModel: rho must lie in [0, 1)");
  if (grid.x_panels < 1 || grid.x_nodes < 2 || grid.s_levels < 1)
    throw std::invalid_argument("SourceModel: invalid grid spec");

  a_x_ = mean_x_ - kTruncationSigmas * sigma_x_;
  b_x_ = mean_x_ + kTruncationSigmas * sigma_x_;
  a_s_ = mean_s_ - kTruncationSigmas * sigma_s_;
  b_s_ = mean_s_ + kTruncationSigmas * sigma_s_;

  tau_ = sigma_x_ * std::sqrt(1.0 - rho_ * rho_);
  panel_w_ = (b_x_ - a_x_) / grid_.x_panels;
  s_weight_ = (b_s_ - a_s_) / grid_.s_levels;

  const GaussLegendreRule rule = gauss_legendre(grid_.x_nodes);
  gl_nodes_ = rule.nodes;
  gl_weights_ = rule.weights;

  const int ns = grid_.s_levels;
  s_levels_.resize(ns);
  row_amp_.resize(ns);
  row_mu_.resize(ns);
  const double s_norm = 1.0 / (std::sqrt(kTwoPi) * sigma_s_);
  const double x_norm = 1.0 / (std::sqrt(kTwoPi) * tau_);
  for (int j = 0; j < ns; ++j) {
    const double s = a_s_ + (j + 0.5) * s_weight_;
    s_levels_[j] = s;
    const double zs = (s - mean_s_) / sigma_s_;
    const double f_s = s_norm * std::exp(-0.5 * zs * zs);
    row_amp_[j] = f_s * x_norm;  // renormalized below
    row_mu_[j] = mean_x_ + rho_ * (sigma_x_ / sigma_s_) * (s - mean_s_);
  }

  // First pass with unit renormalization to measure the grid mass Z, then
  // fold 1/Z into the row amplitudes so total_mass() is exactly 1.
  auto build_prefix = [&]() {
    prefix_.assign(ns, std::vector<double>(3 * (grid_.x_panels + 1), 0.0));
    for (int j = 0; j < ns; ++j) {
      std::vector<double>& pref = prefix_[j];
      for (int p = 0; p < grid_.x_panels; ++p) {
        const double lo = a_x_ + p * panel_w_;
        const double c = lo + 0.5 * panel_w_;
        const double h = 0.5 * panel_w_;
        double m0 = 0.0, m1 = 0.0, m2 = 0.0;
        for (int k = 0; k < grid_.x_nodes; ++k) {
          const double x = c + h * gl_nodes_[k];
          const double z = (x - row_mu_[j]) / tau_;
          const double f = row_amp_[j] * std::exp(-0.5 * z * z);
          const double w = gl_weights_[k] * h;
          m0 += w * f;
          m1 += w * x * f;
          m2 += w * x * x * f;
        }
        pref[3 * (p + 1) + 0] = pref[3 * p + 0] + m0;
        pref[3 * (p + 1) + 1] = pref[3 * p + 1] + m1;
        pref[3 * (p + 1) + 2] = pref[3 * p + 2] + m2;
      }
    }
  };

  build_prefix();
  double z = 0.0;
  for (int j = 0; j < ns; ++j)
    z += s_weight_ * prefix_[j][3 * grid_.x_panels + 0];
  if (!(z > 0.0)) throw std::runtime_error("SourceModel: degenerate grid mass");
  renorm_ = 1.0 / z;
  for (int j = 0; j < ns; ++j) row_amp_[j] *= renorm_;
  build_prefix();
}

int SourceModel::nearest_s_index(double s) const {
  const double t = (s - (a_s_ + 0.5 * s_weight_)) / s_weight_;
  int j = static_cast<int>(std::lround(t));
  j = std::max(0, std::min(grid_.s_levels - 1, j));
  return j;
}

double SourceModel::joint_density(double x, double s) const {
  if (x < a_x_ || x > b_x_ || s < a_s_ || s > b_s_)
    throw std::domain_error("joint_density: point outside the support rectangle");
  const double zs = (s - mean_s_) / sigma_s_;
  const double mu = mean_x_ + rho_ * (sigma_x_ / sigma_s_) * (s - mean_s_);
  const double zx = (x - mu) / tau_;
  const double s_norm = 1.0 / (std::sqrt(kTwoPi) * sigma_s_);
  const double x_norm = 1.0 / (std::sqrt(kTwoPi) * tau_);
  return renorm_ * s_norm * x_norm * std::exp(-0.5 * (zs * zs + zx * zx));
}

void SourceModel::check_s_index(int s_index) const {
  if (s_index < 0 || s_index >= grid_.s_levels)
    throw std::invalid_argument("SourceModel: s index out of range");
}

void SourceModel::check_bounds(double x_lo, double x_hi) const {
  if (x_lo > x_hi)
    throw std::invalid_argument("SourceModel: reversed interval bounds");
}

IntervalMoments SourceModel::fresh_panel_moments(int s_index, double lo,
                                                 double hi) const {
  IntervalMoments out;
  if (hi <= lo) return out;
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double amp = row_amp_[s_index];
  const double mu = row_mu_[s_index];
  for (int k = 0; k < grid_.x_nodes; ++k) {
    const double x = c + h * gl_nodes_[k];
    const double z = (x - mu) / tau_;
    const double f = amp * std::exp(-0.5 * z * z);
    const double w = gl_weights_[k] * h;
    out.m0 += w * f;
    out.m1 += w * x * f;
    out.m2 += w * x * x * f;
  }
  return out;
}

IntervalMoments SourceModel::interval_moments(int s_index, double x_lo,
                                              double x_hi) const {
  check_s_index(s_index);
  check_bounds(x_lo, x_hi);
  IntervalMoments out;
  const double lo = std::max(x_lo, a_x_);
  const double hi = std::min(x_hi, b_x_);
  if (hi <= lo) return out;

  int pl = static_cast<int>((lo - a_x_) / panel_w_);
  int ph = static_cast<int>((hi - a_x_) / panel_w_);
  pl = std::max(0, std::min(grid_.x_panels - 1, pl));
  ph = std::max(0, std::min(grid_.x_panels - 1, ph));

  if (pl == ph) return fresh_panel_moments(s_index, lo, hi);

  const double pl_end = a_x_ + (pl + 1) * panel_w_;
  const double ph_start = a_x_ + ph * panel_w_;
  out = fresh_panel_moments(s_index, lo, pl_end);
  const IntervalMoments tail = fresh_panel_moments(s_index, ph_start, hi);
  const std::vector<double>& pref = prefix_[s_index];
  out.m0 += tail.m0 + (pref[3 * ph + 0] - pref[3 * (pl + 1) + 0]);
  out.m1 += tail.m1 + (pref[3 * ph + 1] - pref[3 * (pl + 1) + 1]);
  out.m2 += tail.m2 + (pref[3 * ph + 2] - pref[3 * (pl + 1) + 2]);
  return out;
}

IntervalMoments SourceModel::marginal_interval_moments(double x_lo,
                                                       double x_hi) const {
  IntervalMoments out;
  for (int j = 0; j < grid_.s_levels; ++j) {
    const IntervalMoments m = interval_moments(j, x_lo, x_hi);
    out.m0 += s_weight_ * m.m0;
    out.m1 += s_weight_ * m.m1;
    out.m2 += s_weight_ * m.m2;
  }
  return out;
}

double SourceModel::cell_mass(int s_index, double x_lo, double x_hi) const {
  return interval_moments(s_index, x_lo, x_hi).m0;
}

double SourceModel::cell_first_moment(int s_index, double x_lo,
                                      double x_hi) const {
  return interval_moments(s_index, x_lo, x_hi).m1;
}

double SourceModel::quadratic_distortion_integral(int s_index, double x_lo,
                                                  double x_hi, double target,
                                                  bool bias_in_loss) const {
  const IntervalMoments m = interval_moments(s_index, x_lo, x_hi);
  const double c = target - (bias_in_loss ? s_levels_[s_index] : 0.0);
  const double v = m.m2 - 2.0 * c * m.m1 + c * c * m.m0;
  return v > 0.0 ? v : 0.0;
}

double SourceModel::total_mass() const {
  double z = 0.0;
  for (int j = 0; j < grid_.s_levels; ++j)
    z += s_weight_ * prefix_[j][3 * grid_.x_panels + 0];
  return z;
}

}  // namespace strq
