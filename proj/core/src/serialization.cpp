#include "strq/serialization.hpp"

#include <stdexcept>

#include <json.hpp>

namespace strq {

namespace {

nlohmann::json classifier_json_object(const SourceModel& model,
                                      const BoundaryMatrix& q,
                                      const EstimateVector& estimates) {
  nlohmann::json doc;
  doc["M"] = q.num_cells;
  nlohmann::json levels = nlohmann::json::array();
  for (int j = 0; j < model.num_s_levels(); ++j) levels.push_back(model.s_level(j));
  doc["s_levels"] = std::move(levels);
  doc["bounds"] = q.bounds;
  doc["estimates"] = estimates.values;
  return doc;
}

}  // namespace

std::string classifier_to_json(const SourceModel& model,
                               const BoundaryMatrix& q,
                               const EstimateVector& estimates) {
  return classifier_json_object(model, q, estimates).dump();
}

void classifier_from_json(const std::string& text, BoundaryMatrix& q,
                          EstimateVector& estimates) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("classifier_from_json: ") + e.what());
  }
  if (!doc.contains("M") || !doc.contains("bounds") || !doc.contains("estimates"))
    throw std::runtime_error("classifier_from_json: missing required fields");
  q.num_cells = doc["M"].get<int>();
  q.bounds = doc["bounds"].get<std::vector<std::vector<double>>>();
  estimates.values = doc["estimates"].get<std::vector<double>>();
}

std::string design_result_to_json(const SourceModel& model,
                                  const DesignResult& design) {
  nlohmann::json doc = classifier_json_object(model, design.boundaries,
                                              design.perceived_estimates);
  doc["level"] = design_level_name(design.level);
  doc["sender_distortion"] = design.sender_distortion;
  doc["init_index"] = design.init_index;
  doc["iterations"] = design.trace.size();
  doc["empty_cell_flags"] = design.empty_cell_flags;
  return doc.dump();
}

}  // namespace strq
