#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtvc {

/// m examples with l real-valued features and labels in {0, ..., n-1}.
/// Features are stored row-major.
class Sample {
 public:
  Sample() = default;

  /// Throws std::invalid_argument if sizes disagree or a label is >= classes.
  Sample(std::size_t features, std::vector<double> values, std::vector<std::size_t> labels, std::size_t classes);

  std::size_t size() const { return labels_.size(); }
  std::size_t features() const { return features_; }
  std::size_t classes() const { return classes_; }
  bool empty() const { return labels_.empty(); }

  double value(std::size_t point, std::size_t feature) const { return values_[point * features_ + feature]; }
  std::span<const double> row(std::size_t point) const {
    return {values_.data() + point * features_, features_};
  }
  std::size_t label(std::size_t point) const { return labels_[point]; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Rows at `indices`, in that order. Class count is kept.
  Sample subset(std::span<const std::size_t> indices) const;

  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  friend bool operator==(const Sample& a, const Sample& b) {
    return a.features_ == b.features_ && a.classes_ == b.classes_ && a.values_ == b.values_ &&
           a.labels_ == b.labels_;
  }

 private:
  std::size_t features_ = 0;
  std::size_t classes_ = 0;
  std::vector<double> values_;
  std::vector<std::size_t> labels_;
};

}  // namespace dtvc
