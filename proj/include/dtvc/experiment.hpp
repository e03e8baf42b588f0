#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dtvc/bound_engine.hpp"
#include "dtvc/data_io.hpp"
#include "dtvc/risk_bound.hpp"

namespace dtvc {

// ---- height-3 shape table ----

/// The 11 shapes of height <= 3 in a fixed reference order.
std::vector<TreeStructure> figure2_structures();

std::vector<std::size_t> figure2_bounds(std::size_t features, PartitionTable& table);

// ---- oracle verification ----

struct VerifyCase {
  std::size_t points = 0;
  std::size_t features = 0;
  std::string regime;  // "equality" or "soundness"
  std::string structure;
  std::size_t parts = 2;
  std::string oracle;  // max count seen, or a note if the oracle refused
  std::string bound;
  bool pass = true;
};

struct VerifyReport {
  std::vector<VerifyCase> cases;
  bool all_pass() const;
};

/// Stump equality on worst-case samples wherever a construction exists,
/// plus soundness of the recursive bound for every structure with at most
/// three internal nodes on `samples` random distinct-valued samples.
/// Oracle resource limits are recorded in the report, not treated as failures.
/// Throws std::invalid_argument if max_points > 9 or max_features > 8.
VerifyReport verify(std::size_t max_points, std::size_t max_features, std::uint64_t seed, std::size_t samples,
                    PartitionTable& table);

// ---- benchmark runs ----

enum class Model { original, cart, mcart, bound };
const char* to_string(Model m);
/// Throws std::invalid_argument for an unknown name.
Model model_from_string(const std::string& name);

struct ExperimentConfig {
  std::size_t repetitions = 25;
  std::vector<Model> models{Model::original, Model::cart, Model::mcart, Model::bound};
  BoundConfig bound;
  std::uint64_t base_seed = 0;
  double train_fraction = 0.75;
  std::size_t max_leaves = 40;
  std::size_t folds = 10;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> json_dir;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
};

struct ModelSummary {
  Model model = Model::original;
  std::size_t runs = 0;
  Summary test_acc;
  Summary train_acc;
  Summary leaves;
  Summary height;
  Summary wall_time;
  std::optional<Summary> bound;
};

struct RunReport {
  std::string dataset;
  std::size_t repetitions = 0;
  std::vector<ModelSummary> models;
  std::vector<RunRecord> runs;  // ordered by repetition, then model
  std::vector<std::string> failures;
};

inline constexpr std::size_t kMaxClasses = 10;

/// Repetition i uses seed base_seed + i for its 75/25 split and for the
/// cross-validation folds. Repetitions run concurrently; results are folded
/// in repetition order. A pruner that throws is recorded in `failures` and
/// left out of the aggregate. Throws std::invalid_argument for more than
/// kMaxClasses classes.
RunReport run_experiment(const Sample& s, const std::string& dataset, const ExperimentConfig& cfg,
                         PartitionTable& table);

/// Aligned plain text, or a Markdown table. Timing columns only on request,
/// so that repeated runs print identical reports.
std::string format_report(const RunReport& r, bool markdown, bool show_time);
std::string report_json(const RunReport& r, bool show_time);

}  // namespace dtvc
