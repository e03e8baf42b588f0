#include "dtvc/sample.hpp"

namespace dtvc {

Sample::Sample(std::size_t features, std::vector<double> values, std::vector<std::size_t> labels,
               std::size_t classes)
    : features_(features), classes_(classes), values_(std::move(values)), labels_(std::move(labels)) {
  if (features_ == 0) throw std::invalid_argument("Sample: need at least one feature");
  if (classes_ == 0) throw std::invalid_argument("Sample: need at least one class");
  if (values_.size() != labels_.size() * features_) {
    throw std::invalid_argument("Sample: feature matrix size does not match label count");
  }
  for (std::size_t y : labels_) {
    if (y >= classes_) throw std::invalid_argument("Sample: label out of range");
  }
}

Sample Sample::subset(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  std::vector<std::size_t> labels;
  values.reserve(indices.size() * features_);
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw std::out_of_range("Sample::subset: index out of range");
    auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  Sample out(features_, std::move(values), std::move(labels), classes_);
  out.feature_names = feature_names;
  out.class_names = class_names;
  return out;
}

}  // namespace dtvc
