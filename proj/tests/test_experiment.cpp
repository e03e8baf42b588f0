#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "dtvc/experiment.hpp"

using namespace dtvc;

namespace {

Sample iris() {
  DatasetSpec spec;
  spec.path = DTVC_DATA_DIR "/iris.csv";
  return load(spec);
}

}  // namespace

TEST_CASE("figure2_structures is the set of shapes of height at most 3") {
  const auto shapes = figure2_structures();
  REQUIRE(shapes.size() == 11);
  std::set<std::string> fixture;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    fixture.insert(canonical_form(shapes[i]).to_string());
    if (i > 0) CHECK(shapes[i - 1].leaf_count() <= shapes[i].leaf_count());
  }
  std::set<std::string> expected;
  for (const auto& t : enumerate_by_height(3)) expected.insert(t.to_string());
  CHECK(fixture == expected);
}

TEST_CASE("figure2_bounds") {
  PartitionTable table;
  CHECK(figure2_bounds(10, table) == std::vector<std::size_t>{1, 6, 16, 21, 25, 31, 32, 40, 38, 47, 52});
  PartitionTable small;
  const auto one = figure2_bounds(1, small);
  CHECK(one.size() == 11);
  CHECK(one[1] == stump_vcdim_exact(1));
  CHECK(one[1] == 2);
}

TEST_CASE("verify") {
  PartitionTable table;
  const VerifyReport a = verify(7, 5, 0, 3, table);
  CHECK(a.all_pass());
  std::size_t equality = 0;
  for (const auto& c : a.cases) equality += c.regime == "equality";
  CHECK(equality == 35);
  CHECK(verify(9, 4, 1, 3, table).all_pass());
  const VerifyReport trivial = verify(1, 1, 0, 1, table);
  CHECK(trivial.all_pass());
  CHECK(trivial.cases.front().oracle == "0");
  CHECK(trivial.cases.front().bound == "0");
  CHECK_THROWS_AS(verify(10, 2, 0, 1, table), std::invalid_argument);
  CHECK_THROWS_AS(verify(5, 9, 0, 1, table), std::invalid_argument);
}

TEST_CASE("model names") {
  CHECK(model_from_string("mcart") == Model::mcart);
  CHECK(std::string(to_string(Model::bound)) == "bound");
  CHECK_THROWS_AS(model_from_string("c45"), std::invalid_argument);
}

TEST_CASE("single repetition of the unpruned model writes one JSON file") {
  const auto dir = std::filesystem::temp_directory_path() / "dtvc_experiment_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg;
  cfg.repetitions = 1;
  cfg.models = {Model::original};
  cfg.json_dir = dir;
  PartitionTable table(BoundMode::fast);
  const RunReport r = run_experiment(iris(), "iris", cfg, table);
  CHECK(r.runs.size() == 1);
  CHECK(r.models.size() == 1);
  CHECK(r.models[0].runs == 1);
  CHECK(r.models[0].test_acc.stddev == 0.0);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    ++files;
    CHECK(entry.path().extension() == ".json");
  }
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports are reproducible and independent of thread count") {
  ExperimentConfig cfg;
  cfg.repetitions = 6;
  PartitionTable t1(BoundMode::fast);
  PartitionTable t2(BoundMode::fast);
  cfg.threads = 1;
  const RunReport a = run_experiment(iris(), "iris", cfg, t1);
  cfg.threads = 3;
  const RunReport b = run_experiment(iris(), "iris", cfg, t2);
  CHECK(format_report(a, false, false) == format_report(b, false, false));
  CHECK(format_report(a, true, false) == format_report(b, true, false));
  CHECK(report_json(a, false) == report_json(b, false));
  REQUIRE(a.runs.size() == 24);
  // ordered by repetition, then model
  CHECK(a.runs[0].seed == 0);
  CHECK(a.runs[0].model == "original");
  CHECK(a.runs[4].seed == 1);
  for (const auto& m : a.models) CHECK(m.runs == 6);
  CHECK(a.models.back().bound.has_value());
  CHECK_FALSE(a.models.front().bound.has_value());
}

TEST_CASE("experiment preconditions") {
  DatasetSpec spec;
  spec.path = DTVC_FIXTURE_DIR "/eleven_classes.csv";
  const Sample eleven = load(spec);
  REQUIRE(eleven.classes() == 11);
  ExperimentConfig cfg;
  PartitionTable table(BoundMode::fast);
  try {
    run_experiment(eleven, "eleven", cfg, table);
    FAIL("expected the class cap to refuse the dataset");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("at most 10") != std::string::npos);
  }
  PartitionTable exact(BoundMode::exact);
  CHECK_THROWS_AS(run_experiment(iris(), "iris", cfg, exact), std::invalid_argument);
}
