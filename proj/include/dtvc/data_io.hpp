#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dtvc/sample.hpp"

namespace dtvc {

/// Load/parse failures. Messages name the row and column where relevant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  std::filesystem::path path;
  // label column by 0-based index or by header name; the last column if neither is set
  std::optional<std::size_t> label_index;
  std::string label_name;
  char delimiter = ',';
  bool has_header = false;
  std::string name;
};

/// Labels are re-encoded densely in order of first appearance and their
/// original strings kept in class_names.
Sample load(const DatasetSpec& spec);
Sample load(std::istream& in, const DatasetSpec& spec);

/// Writes features followed by the label (class name if known) as the last
/// column. A header is written when the sample has feature names.
void save(const Sample& s, std::ostream& out, char delimiter = ',');
void save(const Sample& s, const std::filesystem::path& path, char delimiter = ',');

/// Fisher-Yates permutation of 0..n-1 driven by mt19937_64(seed), with
/// rejection-sampled bounded draws so the result is the same on every
/// platform.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

/// Shuffles with seeded_permutation and puts the first ceil(fraction * m)
/// rows in train (clamped so both parts are non-empty). Not stratified.
/// Throws std::invalid_argument unless 0 < fraction < 1 and m >= 2.
std::pair<Sample, Sample> split(const Sample& s, double train_fraction, std::uint64_t seed);

/// One experiment run, persisted as a JSON document.
struct RunRecord {
  std::string dataset;
  std::string model;
  std::uint64_t seed = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  std::size_t leaves = 0;
  std::size_t height = 0;
  double wall_time = 0.0;
  std::optional<double> bound;
};

std::string to_json(const RunRecord& r);
RunRecord run_record_from_json(const std::string& text);
void write_run_json(const RunRecord& r, const std::filesystem::path& path);

}  // namespace dtvc
