#include "strq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace strq {

BoundaryMatrix constant_rows(const SourceModel& model,
                             const std::vector<double>& edges) {
  if (edges.size() < 2)
    throw std::invalid_argument("constant_rows: need at least two edges");
  BoundaryMatrix q;
  q.num_cells = static_cast<int>(edges.size()) - 1;
  q.bounds.assign(model.num_s_levels(), edges);
  return q;
}

void validate_boundaries(const SourceModel& model, const BoundaryMatrix& q) {
  if (q.num_cells < 1)
    throw std::invalid_argument("BoundaryMatrix: num_cells must be >= 1");
  if (static_cast<int>(q.bounds.size()) != model.num_s_levels())
    throw std::invalid_argument("BoundaryMatrix: one row per s level required");
  for (const std::vector<double>& row : q.bounds) {
    if (static_cast<int>(row.size()) != q.num_cells + 1)
      throw std::invalid_argument("BoundaryMatrix: row length must be M + 1");
    if (row.front() != model.a_x() || row.back() != model.b_x())
      throw std::invalid_argument("BoundaryMatrix: rows must span [a_x, b_x]");
    for (std::size_t m = 1; m < row.size(); ++m)
      if (row[m] < row[m - 1])
        throw std::invalid_argument("BoundaryMatrix: boundaries must be monotone");
  }
}

int encode(const SourceModel& model, const BoundaryMatrix& q, double x,
           double s) {
  if (x < model.a_x() || x > model.b_x())
    throw std::domain_error("encode: x outside the support");
  const std::vector<double>& row = q.bounds[model.nearest_s_index(s)];
  // Smallest m in [1:M] with row[m-1] <= x <= row[m]; a point exactly on an
  // interior boundary belongs to the lower cell that the boundary closes.
  const auto it = std::lower_bound(row.begin() + 1, row.end(), x);
  int m = static_cast<int>(it - row.begin());
  if (m > q.num_cells) m = q.num_cells;
  return m;
}

namespace {

void check_components(const std::vector<MixtureComponent>& components) {
  if (components.empty())
    throw std::invalid_argument("mixture: empty component list");
  double total = 0.0;
  const int m = components.front().classifier->num_cells;
  for (const MixtureComponent& c : components) {
    if (c.classifier == nullptr)
      throw std::invalid_argument("mixture: null classifier");
    if (c.classifier->num_cells != m)
      throw std::invalid_argument("mixture: classifiers must share M");
    if (c.weight < 0.0)
      throw std::invalid_argument("mixture: negative weight");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("mixture: weights must sum to 1");
}

}  // namespace

MixtureEstimates perceived_estimates_mixture(
    const SourceModel& model, const std::vector<MixtureComponent>& components) {
  check_components(components);
  const int num_cells = components.front().classifier->num_cells;
  const int ns = model.num_s_levels();

  MixtureEstimates out;
  out.estimates.values.assign(num_cells, 0.0);
  out.cell_mass.assign(num_cells, 0.0);

  for (int m = 0; m < num_cells; ++m) {
    double num = 0.0;
    double den = 0.0;
    double hull_lo = std::numeric_limits<double>::infinity();
    double hull_hi = -std::numeric_limits<double>::infinity();
    for (const MixtureComponent& c : components) {
      double comp_num = 0.0;
      double comp_den = 0.0;
      for (int j = 0; j < ns; ++j) {
        const std::vector<double>& row = c.classifier->bounds[j];
        const IntervalMoments mom = model.interval_moments(j, row[m], row[m + 1]);
        comp_num += model.s_weight(j) * mom.m1;
        comp_den += model.s_weight(j) * mom.m0;
        if (c.weight > 0.0) {
          hull_lo = std::min(hull_lo, row[m]);
          hull_hi = std::max(hull_hi, row[m + 1]);
        }
      }
      num += c.weight * comp_num;
      den += c.weight * comp_den;
    }
    out.cell_mass[m] = den;
    if (den < kEmptyCellThreshold) {
      out.empty_cells.push_back(m);
      out.estimates.values[m] =
          std::isfinite(hull_lo) ? 0.5 * (hull_lo + hull_hi) : 0.0;
    } else {
      out.estimates.values[m] = num / den;
    }
  }
  return out;
}

double sender_distortion(const SourceModel& model, const BoundaryMatrix& q,
                         const EstimateVector& y, bool bias_in_loss) {
  if (static_cast<int>(y.values.size()) != q.num_cells)
    throw std::invalid_argument("sender_distortion: estimate length must be M");
  const int ns = model.num_s_levels();
  double acc = 0.0;
  for (int m = 0; m < q.num_cells; ++m) {
    for (int j = 0; j < ns; ++j) {
      const std::vector<double>& row = q.bounds[j];
      acc += model.s_weight(j) *
             model.quadratic_distortion_integral(j, row[m], row[m + 1],
                                                 y.values[m], bias_in_loss);
    }
  }
  return acc;
}

std::vector<double> receiver_distortion_components(
    const SourceModel& model, const std::vector<MixtureComponent>& components,
    const EstimateVector& y) {
  check_components(components);
  const int num_cells = components.front().classifier->num_cells;
  if (static_cast<int>(y.values.size()) != num_cells)
    throw std::invalid_argument("receiver_distortion: estimate length must be M");
  const int ns = model.num_s_levels();
  std::vector<double> out;
  out.reserve(components.size());
  for (const MixtureComponent& c : components) {
    double acc = 0.0;
    for (int m = 0; m < num_cells; ++m) {
      for (int j = 0; j < ns; ++j) {
        const std::vector<double>& row = c.classifier->bounds[j];
        acc += model.s_weight(j) *
               model.quadratic_distortion_integral(j, row[m], row[m + 1],
                                                   y.values[m], false);
      }
    }
    out.push_back(acc);
  }
  return out;
}

double receiver_distortion_mixture(
    const SourceModel& model, const std::vector<MixtureComponent>& components,
    const EstimateVector& y) {
  const std::vector<double> parts =
      receiver_distortion_components(model, components, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    acc += components[i].weight * parts[i];
  return acc;
}

}  // namespace strq
