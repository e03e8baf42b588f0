// Command-line front end: bound queries, the height-3 shape table, oracle
// checks, benchmark runs and single-tree pruning.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtvc/bound_engine.hpp"
#include "dtvc/data_io.hpp"
#include "dtvc/experiment.hpp"
#include "dtvc/learner.hpp"
#include "dtvc/pruning.hpp"

using namespace dtvc;
using json = nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

struct TableOptions {
  std::string cache;
  bool fast = false;
};

class CachedTable {
 public:
  explicit CachedTable(const TableOptions& opt)
      : path_(opt.cache), table_(opt.fast ? BoundMode::fast : BoundMode::exact) {
    if (path_.empty()) return;
    std::ifstream probe(path_);
    std::string first;
    if (probe && std::getline(probe, first) && first.rfind("# mode=", 0) == 0 &&
        first != std::string("# mode=") + to_string(table_.mode())) {
      std::cerr << "dtvc: cache " << path_ << " holds " << first.substr(7) << " bounds; not using or updating it\n";
      path_.clear();
      return;
    }
    table_.load_file(path_, std::cerr);
  }
  ~CachedTable() {
    if (path_.empty()) return;
    try {
      table_.save_file(path_);
    } catch (const std::exception& e) {
      std::cerr << "dtvc: warning: could not write cache " << path_ << ": " << e.what() << "\n";
    }
  }
  PartitionTable& operator*() { return table_; }

 private:
  std::string path_;
  PartitionTable table_;
};

struct DataOptions {
  std::string path;
  std::string label_column;
  bool header = false;
  char delimiter = ',';
  std::string name;

  DatasetSpec spec() const {
    DatasetSpec s;
    s.path = path;
    s.has_header = header;
    s.delimiter = delimiter;
    if (!label_column.empty()) {
      std::size_t index = 0;
      auto [end, ec] = std::from_chars(label_column.data(), label_column.data() + label_column.size(), index);
      if (ec == std::errc() && end == label_column.data() + label_column.size()) {
        s.label_index = index;
      } else {
        s.label_name = label_column;
      }
    }
    s.name = name.empty() ? std::filesystem::path(path).stem().string() : name;
    return s;
  }
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.path, "CSV file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--label-column", d.label_column, "label column: 0-based index or header name (default: last)");
  cmd->add_flag("--header", d.header, "first row is a header");
  cmd->add_option("--delimiter", d.delimiter, "field separator");
  cmd->add_option("--name", d.name, "dataset name for reports (default: file stem)");
}

void add_bound_options(CLI::App* cmd, BoundConfig& cfg, TableOptions& t) {
  cmd->add_option("--delta", cfg.delta, "confidence parameter")->capture_default_str();
  cmd->add_option("--r", cfg.r, "ratio of the geometric prior over error counts")->capture_default_str();
  t.fast = true;
  cmd->add_flag("--fast-bound,!--no-fast-bound", t.fast, "use the fast partition bound (default on)");
  cmd->add_option("--cache", t.cache, "partition-bound cache file, read at start and rewritten at exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-tree VC bounds, partition bounds and bound-based pruning"};
  app.require_subcommand(1);
  bool as_json = false;

  // vcdim
  std::string structure;
  std::size_t ell = 0;
  bool stump_exact = false;
  TableOptions table_opt;
  auto* vcdim = app.add_subcommand("vcdim", "upper bound on the VC dimension of a tree structure");
  vcdim->add_option("structure", structure, "structure, e.g. ((LL)L)")->required();
  vcdim->add_option("--ell", ell, "number of real-valued features")->required()->check(CLI::PositiveNumber);
  vcdim->add_flag("--stump-exact", stump_exact, "closed-form value for the stump");
  vcdim->add_flag("--fast-bound", table_opt.fast, "use the fast partition bound");
  vcdim->add_option("--cache", table_opt.cache, "partition-bound cache file");
  vcdim->add_flag("--json", as_json, "JSON output");

  // pibound
  std::size_t parts = 2;
  std::size_t points = 0;
  auto* pibound = app.add_subcommand("pibound", "upper bound on the partitioning function pi^c_T(m)");
  pibound->add_option("structure", structure, "structure")->required();
  pibound->add_option("-c,--parts", parts, "number of parts c")->capture_default_str();
  pibound->add_option("-m,--points", points, "number of points m")->required();
  pibound->add_option("--ell", ell, "number of features")->required()->check(CLI::PositiveNumber);
  pibound->add_flag("--fast-bound", table_opt.fast, "use the fast partition bound");
  pibound->add_option("--cache", table_opt.cache, "partition-bound cache file");
  pibound->add_flag("--json", as_json, "JSON output");

  // growth
  std::size_t classes = 2;
  auto* growth = app.add_subcommand("growth", "upper bound on the growth function of a tree structure");
  growth->add_option("structure", structure, "structure")->required();
  growth->add_option("-m,--points", points, "number of points m")->required()->check(CLI::PositiveNumber);
  growth->add_option("--classes", classes, "number of classes n")->capture_default_str();
  growth->add_option("--ell", ell, "number of features")->required()->check(CLI::PositiveNumber);
  growth->add_flag("--fast-bound", table_opt.fast, "use the fast partition bound");
  growth->add_option("--cache", table_opt.cache, "partition-bound cache file");
  growth->add_flag("--json", as_json, "JSON output");

  // figure2
  std::size_t fig_ell = 10;
  auto* figure2 = app.add_subcommand("figure2", "VC-dimension bounds of the 11 shapes of height at most 3");
  figure2->add_option("--ell", fig_ell, "number of features")->capture_default_str()->check(CLI::PositiveNumber);
  figure2->add_option("--cache", table_opt.cache, "partition-bound cache file");
  figure2->add_flag("--json", as_json, "JSON output");

  // verify
  std::size_t max_m = 7;
  std::size_t max_ell = 5;
  std::uint64_t seed = 0;
  std::size_t samples = 10;
  bool quiet = false;
  auto* verify_cmd = app.add_subcommand("verify", "check the bounds against brute-force enumeration");
  verify_cmd->add_option("--max-m", max_m, "largest sample size (<= 9)")->capture_default_str();
  verify_cmd->add_option("--max-ell", max_ell, "largest feature count (<= 8)")->capture_default_str();
  verify_cmd->add_option("--seed", seed, "seed for the random samples")->capture_default_str();
  verify_cmd->add_option("--samples", samples, "random samples per case")->capture_default_str();
  verify_cmd->add_flag("--failures-only", quiet, "only list failing cases");
  verify_cmd->add_flag("--json", as_json, "JSON output");

  // experiment
  DataOptions data;
  ExperimentConfig exp;
  TableOptions exp_table;
  std::vector<std::string> models{"original", "cart", "mcart", "bound"};
  bool markdown = false;
  bool timing = false;
  std::string out_dir = "runs";
  auto* experiment = app.add_subcommand("experiment", "repeated split / grow / prune benchmark on one dataset");
  add_data_options(experiment, data);
  experiment->add_option("--reps", exp.repetitions, "repetitions")->capture_default_str()->check(CLI::PositiveNumber);
  experiment->add_option("--seed", exp.base_seed, "base seed; repetition i uses seed + i")->capture_default_str();
  experiment->add_option("--models", models, "subset of original, cart, mcart, bound")->delimiter(',');
  experiment->add_option("--max-leaves", exp.max_leaves, "leaf cap when growing")->capture_default_str();
  experiment->add_option("--folds", exp.folds, "cross-validation folds for cart/mcart")->capture_default_str();
  experiment->add_option("--threads", exp.threads, "worker threads (0: all cores)")->capture_default_str();
  experiment->add_option("--out-dir", out_dir, "directory for per-run JSON files (empty: none)")->capture_default_str();
  experiment->add_flag("--md", markdown, "Markdown table");
  experiment->add_flag("--timing", timing, "include wall-clock columns");
  experiment->add_flag("--json", as_json, "JSON output");
  add_bound_options(experiment, exp.bound, exp_table);

  // prune
  DataOptions prune_data;
  std::string tree_text;
  std::string tree_file;
  std::string method = "bound";
  std::size_t folds = 10;
  std::size_t max_leaves = 40;
  BoundConfig prune_cfg;
  TableOptions prune_table;
  auto* prune = app.add_subcommand("prune", "prune one tree (given, or grown on the data)");
  add_data_options(prune, prune_data);
  prune->add_option("--tree", tree_text, "tree in text form, e.g. (0:1.5 L=0 L=1)");
  prune->add_option("--tree-file", tree_file, "file holding the tree")->check(CLI::ExistingFile);
  prune->add_option("--method", method, "bound, cart or mcart")
      ->capture_default_str()
      ->check(CLI::IsMember({"bound", "cart", "mcart"}));
  prune->add_option("--seed", seed, "cross-validation seed")->capture_default_str();
  prune->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
  prune->add_option("--max-leaves", max_leaves, "leaf cap when growing")->capture_default_str();
  prune->add_flag("--json", as_json, "JSON output");
  add_bound_options(prune, prune_cfg, prune_table);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*vcdim) {
      const TreeStructure t = TreeStructure::parse(structure);
      std::size_t d = 0;
      if (stump_exact) {
        if (!(t == TreeStructure::parse("(LL)"))) throw std::invalid_argument("--stump-exact needs the structure (LL)");
        d = stump_vcdim_exact(ell);
      } else {
        CachedTable table(table_opt);
        d = vcdim_upper_bound(t, ell, *table);
      }
      if (as_json) {
        std::cout << json{{"structure", t.to_string()}, {"ell", ell}, {"vcdim", d}}.dump(2) << "\n";
      } else {
        std::cout << d << "\n";
      }
      return 0;
    }

    if (*pibound || *growth) {
      const TreeStructure t = TreeStructure::parse(structure);
      CachedTable table(table_opt);
      const BigCount v = *pibound ? partition_bound_auto(t, parts, points, ell, *table)
                                  : growth_bound(t, points, classes, ell, *table);
      if (as_json) {
        json j{{"structure", t.to_string()}, {"ell", ell}, {"m", points}};
        j[*pibound ? "c" : "n"] = *pibound ? parts : classes;
        j["mode"] = to_string((*table).mode());
        j["value"] = v.get_str();
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << v.get_str() << "\n";
      }
      return 0;
    }

    if (*figure2) {
      CachedTable table(table_opt);
      const auto shapes = figure2_structures();
      const auto bounds = figure2_bounds(fig_ell, *table);
      if (as_json) {
        json rows = json::array();
        for (std::size_t i = 0; i < shapes.size(); ++i) {
          rows.push_back({{"structure", shapes[i].to_string()}, {"leaves", shapes[i].leaf_count()}, {"vcdim", bounds[i]}});
        }
        std::cout << json{{"ell", fig_ell}, {"trees", rows}}.dump(2) << "\n";
      } else {
        std::cout << "#   leaves  vcdim<=  structure\n";
        for (std::size_t i = 0; i < shapes.size(); ++i) {
          char line[128];
          std::snprintf(line, sizeof line, "%-3zu %6zu  %7zu  ", i + 1, shapes[i].leaf_count(), bounds[i]);
          std::cout << line << shapes[i].to_string() << "\n";
        }
      }
      return 0;
    }

    if (*verify_cmd) {
      PartitionTable table(BoundMode::exact);
      const VerifyReport report = verify(max_m, max_ell, seed, samples, table);
      if (as_json) {
        json cases = json::array();
        for (const auto& c : report.cases) {
          if (quiet && c.pass) continue;
          cases.push_back({{"m", c.points}, {"ell", c.features}, {"regime", c.regime}, {"structure", c.structure},
                           {"c", c.parts}, {"oracle", c.oracle}, {"bound", c.bound}, {"pass", c.pass}});
        }
        std::cout << json{{"pass", report.all_pass()}, {"cases", cases}}.dump(2) << "\n";
      } else {
        std::size_t failed = 0;
        for (const auto& c : report.cases) {
          failed += !c.pass;
          if (quiet && c.pass) continue;
          std::cout << "m=" << c.points << " ell=" << c.features << " " << c.regime << " " << c.structure
                    << " c=" << c.parts << " oracle=" << c.oracle << " bound=" << c.bound << " "
                    << (c.pass ? "ok" : "FAIL") << "\n";
        }
        std::cout << report.cases.size() << " cases, " << failed << " failed\n";
      }
      return report.all_pass() ? 0 : 1;
    }

    if (*experiment) {
      const DatasetSpec spec = data.spec();
      const Sample s = load(spec);
      exp.models.clear();
      for (const auto& m : models) exp.models.push_back(model_from_string(m));
      exp.bound.mode = exp_table.fast ? BoundMode::fast : BoundMode::exact;
      if (!out_dir.empty()) exp.json_dir = out_dir;
      CachedTable table(exp_table);
      const RunReport report = run_experiment(s, spec.name, exp, *table);
      std::cout << (as_json ? report_json(report, timing) + "\n" : format_report(report, markdown, timing));
      return 0;
    }

    if (*prune) {
      const DatasetSpec spec = prune_data.spec();
      const Sample s = load(spec);
      if (!tree_file.empty()) {
        std::ifstream in(tree_file);
        std::stringstream buf;
        buf << in.rdbuf();
        tree_text = buf.str();
      }
      const DecisionTree input =
          tree_text.empty() ? fit(s, max_leaves) : DecisionTree::parse(tree_text, s.features(), s.classes());
      if (input.features() != s.features()) throw std::invalid_argument("tree uses a feature the data does not have");
      PruneResult r{input, std::nullopt, std::nullopt, 0, 0, 0.0, {}};
      if (method == "bound") {
        prune_cfg.mode = prune_table.fast ? BoundMode::fast : BoundMode::exact;
        CachedTable table(prune_table);
        r = prune_with_bound(input, s, prune_cfg, *table);
      } else if (method == "cart") {
        r = prune_cart(input, s, folds, seed, max_leaves);
      } else {
        r = prune_mcart(input, s, s.features(), folds, seed, max_leaves);
      }
      if (as_json) {
        json j{{"tree", r.tree.to_string()}, {"leaves_before", r.leaves_before}, {"leaves_after", r.leaves_after},
               {"train_acc", accuracy(r.tree, s)}};
        if (r.bound_value) j["bound"] = *r.bound_value;
        if (r.chosen_alpha) j["alpha"] = std::isinf(*r.chosen_alpha) ? json("inf") : json(*r.chosen_alpha);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << r.tree.to_string() << "\n";
        std::cerr << "leaves: " << r.leaves_before << " -> " << r.leaves_after << "\n";
        if (r.bound_value) std::cerr << "bound: " << shortest(*r.bound_value) << "\n";
        if (r.chosen_alpha) std::cerr << "alpha: " << shortest(*r.chosen_alpha) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "dtvc: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
