#include "dtvc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dtvc/learner.hpp"
#include "dtvc/oracle.hpp"
#include "dtvc/pruning.hpp"

namespace dtvc {

std::vector<TreeStructure> figure2_structures() {
  static const char* const kShapes[] = {
      "L",
      "(LL)",
      "((LL)L)",
      "((LL)(LL))",
      "(((LL)L)L)",
      "(((LL)(LL))L)",
      "(((LL)L)(LL))",
      "(((LL)L)((LL)L))",
      "(((LL)(LL))(LL))",
      "(((LL)(LL))((LL)L))",
      "(((LL)(LL))((LL)(LL)))",
  };
  std::vector<TreeStructure> out;
  for (const char* text : kShapes) out.push_back(TreeStructure::parse(text));
  return out;
}

std::vector<std::size_t> figure2_bounds(std::size_t features, PartitionTable& table) {
  std::vector<std::size_t> out;
  for (const auto& t : figure2_structures()) out.push_back(vcdim_upper_bound(t, features, table));
  return out;
}

// ---- verify ----

bool VerifyReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.pass; });
}

VerifyReport verify(std::size_t max_points, std::size_t max_features, std::uint64_t seed, std::size_t samples,
                    PartitionTable& table) {
  if (max_points > 9 || max_features > 8) throw std::invalid_argument("verify: limited to m <= 9 and l <= 8");
  VerifyReport report;
  const TreeStructure stump = TreeStructure::parse("(LL)");
  std::vector<TreeStructure> shapes;
  for (std::size_t leaves = 1; leaves <= 4; ++leaves) {
    for (const auto& t : enumerate(leaves)) shapes.push_back(t);
  }
  std::mt19937_64 rng(seed);

  for (std::size_t m = 1; m <= max_points; ++m) {
    for (std::size_t l = 1; l <= max_features; ++l) {
      if (m <= 7 || 2 * l <= m) {
        VerifyCase c{m, l, "equality", stump.to_string(), 2, {}, {}, true};
        const std::size_t oracle = oracle::stump_partitions(oracle::worst_case_sample(m, l)).size();
        const BigCount closed = stump_pi2_bound(m, l);
        const BigCount recursive = partition_bound_auto(stump, 2, m, l, table);
        c.oracle = std::to_string(oracle);
        c.bound = closed.get_str();
        // the fast recursion is only an upper bound, so only the exact one must match
        c.pass = closed == oracle && (table.mode() == BoundMode::fast ? recursive >= closed : recursive == closed);
        report.cases.push_back(std::move(c));
      }
      for (const auto& t : shapes) {
        std::vector<std::size_t> worst(t.leaf_count() + 1, 0);
        std::string refused;
        for (std::size_t i = 0; i < samples && refused.empty(); ++i) {
          try {
            const auto counts = oracle::tree_partition_counts(t, oracle::random_distinct_sample(m, l, rng));
            for (std::size_t c = 1; c < counts.size(); ++c) worst[c] = std::max(worst[c], counts[c]);
          } catch (const oracle::ResourceLimitError& e) {
            refused = std::string("skipped (") + e.what() + ")";
          }
        }
        for (std::size_t parts = 1; parts <= t.leaf_count(); ++parts) {
          VerifyCase c{m, l, "soundness", t.to_string(), parts, {}, {}, true};
          const BigCount bound = partition_bound_auto(t, parts, m, l, table);
          c.bound = bound.get_str();
          if (refused.empty()) {
            c.oracle = std::to_string(worst[parts]);
            c.pass = bound >= worst[parts];
          } else {
            c.oracle = refused;
          }
          report.cases.push_back(std::move(c));
          if (!refused.empty()) break;
        }
      }
    }
  }
  return report;
}

// ---- experiments ----

const char* to_string(Model m) {
  switch (m) {
    case Model::original:
      return "original";
    case Model::cart:
      return "cart";
    case Model::mcart:
      return "mcart";
    case Model::bound:
      return "bound";
  }
  return "?";
}

Model model_from_string(const std::string& name) {
  for (Model m : {Model::original, Model::cart, Model::mcart, Model::bound}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown model '" + name + "' (expected original, cart, mcart or bound)");
}

namespace {

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  double total = 0.0;
  for (double x : v) total += x;
  s.mean = total / static_cast<double>(v.size());
  if (v.size() > 1) {
    double sq = 0.0;
    for (double x : v) sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(v.size() - 1));
  }
  return s;
}

struct Repetition {
  std::vector<RunRecord> runs;
  std::vector<std::string> failures;
};

Repetition run_once(const Sample& s, const std::string& dataset, const ExperimentConfig& cfg, std::size_t index,
                    PartitionTable& table) {
  Repetition out;
  const std::uint64_t seed = cfg.base_seed + index;
  const auto fail = [&](const std::string& model, const std::string& what) {
    out.failures.push_back("repetition " + std::to_string(index) + " (seed " + std::to_string(seed) + ") " + model +
                           ": " + what);
  };
  Sample train;
  Sample test;
  DecisionTree grown(s.features(), s.classes());
  double fit_time = 0.0;
  try {
    std::tie(train, test) = split(s, cfg.train_fraction, seed);
    const auto start = std::chrono::steady_clock::now();
    grown = fit(train, cfg.max_leaves);
    fit_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } catch (const std::exception& e) {
    fail("fit", e.what());
    return out;
  }
  for (Model model : cfg.models) {
    try {
      PruneResult r{grown, std::nullopt, std::nullopt, grown.leaf_count(), grown.leaf_count(), 0.0, {}};
      switch (model) {
        case Model::original:
          break;
        case Model::cart:
          r = prune_cart(grown, train, cfg.folds, seed, cfg.max_leaves);
          break;
        case Model::mcart:
          r = prune_mcart(grown, train, train.features(), cfg.folds, seed, cfg.max_leaves);
          break;
        case Model::bound:
          r = prune_with_bound(grown, train, cfg.bound, table);
          break;
      }
      RunRecord rec;
      rec.dataset = dataset;
      rec.model = to_string(model);
      rec.seed = seed;
      rec.train_acc = accuracy(r.tree, train);
      rec.test_acc = accuracy(r.tree, test);
      rec.leaves = r.tree.leaf_count();
      rec.height = r.tree.height();
      rec.wall_time = fit_time + r.wall_time;
      rec.bound = r.bound_value;
      out.runs.push_back(std::move(rec));
    } catch (const std::exception& e) {
      fail(to_string(model), e.what());
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pm(const Summary& s, int digits) { return fixed(s.mean, digits) + " ± " + fixed(s.stddev, digits); }

std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char ch : s) w += (ch & 0xC0) != 0x80;
  return w;
}

nlohmann::ordered_json summary_json(const Summary& s) { return {{"mean", s.mean}, {"std", s.stddev}}; }

}  // namespace

RunReport run_experiment(const Sample& s, const std::string& dataset, const ExperimentConfig& cfg,
                         PartitionTable& table) {
  if (s.classes() > kMaxClasses) {
    throw std::invalid_argument("dataset has " + std::to_string(s.classes()) + " classes; at most " +
                                std::to_string(kMaxClasses) + " are supported");
  }
  if (cfg.repetitions == 0) throw std::invalid_argument("need at least one repetition");
  cfg.bound.validate();
  if (std::find(cfg.models.begin(), cfg.models.end(), Model::bound) != cfg.models.end() &&
      table.mode() != cfg.bound.mode) {
    throw std::invalid_argument("partition table mode differs from the bound configuration");
  }
  if (cfg.json_dir) std::filesystem::create_directories(*cfg.json_dir);

  std::vector<Repetition> reps(cfg.repetitions);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < reps.size(); i = next++) reps[i] = run_once(s, dataset, cfg, i, table);
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, reps.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunReport report;
  report.dataset = dataset;
  report.repetitions = cfg.repetitions;
  for (auto& rep : reps) {
    for (auto& r : rep.runs) report.runs.push_back(std::move(r));
    for (auto& f : rep.failures) report.failures.push_back(std::move(f));
  }
  for (Model model : cfg.models) {
    ModelSummary ms;
    ms.model = model;
    std::vector<double> test, train, leaves, height, time, bound;
    for (const auto& r : report.runs) {
      if (r.model != to_string(model)) continue;
      test.push_back(r.test_acc);
      train.push_back(r.train_acc);
      leaves.push_back(static_cast<double>(r.leaves));
      height.push_back(static_cast<double>(r.height));
      time.push_back(r.wall_time);
      if (r.bound) bound.push_back(*r.bound);
    }
    ms.runs = test.size();
    ms.test_acc = summarize(test);
    ms.train_acc = summarize(train);
    ms.leaves = summarize(leaves);
    ms.height = summarize(height);
    ms.wall_time = summarize(time);
    if (!bound.empty()) ms.bound = summarize(bound);
    report.models.push_back(ms);
  }
  if (cfg.json_dir) {
    for (const auto& r : report.runs) {
      write_run_json(r, *cfg.json_dir / (r.dataset + "-" + r.model + "-seed" + std::to_string(r.seed) + ".json"));
    }
  }
  return report;
}

std::string format_report(const RunReport& r, bool markdown, bool show_time) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"model", "runs", "test acc", "train acc", "leaves", "height", "bound"};
  if (show_time) header.push_back("time (s)");
  rows.push_back(header);
  for (const auto& m : r.models) {
    std::vector<std::string> row{to_string(m.model), std::to_string(m.runs), pm(m.test_acc, 3), pm(m.train_acc, 3),
                                 pm(m.leaves, 1), pm(m.height, 1), m.bound ? pm(*m.bound, 3) : "-"};
    if (show_time) row.push_back(pm(m.wall_time, 3));
    rows.push_back(std::move(row));
  }

  std::string out;
  if (markdown) {
    out += "### " + r.dataset + " (" + std::to_string(r.repetitions) + " repetitions)\n\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out += "|";
      for (const auto& cell : rows[i]) out += " " + cell + " |";
      out += "\n";
      if (i == 0) {
        out += "|";
        for (std::size_t c = 0; c < rows[0].size(); ++c) out += c == 0 ? " --- |" : " ---: |";
        out += "\n";
      }
    }
  } else {
    out += r.dataset + " (" + std::to_string(r.repetitions) + " repetitions)\n";
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));
    }
    for (const auto& row : rows) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        const std::string pad(width[c] - display_width(row[c]), ' ');
        line += c == 0 ? row[c] + pad : "  " + pad + row[c];
      }
      out += line + "\n";
    }
  }
  for (const auto& f : r.failures) out += "failure: " + f + "\n";
  return out;
}

std::string report_json(const RunReport& r, bool show_time) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["repetitions"] = r.repetitions;
  auto models = nlohmann::ordered_json::array();
  for (const auto& m : r.models) {
    nlohmann::ordered_json o;
    o["model"] = to_string(m.model);
    o["runs"] = m.runs;
    o["test_acc"] = summary_json(m.test_acc);
    o["train_acc"] = summary_json(m.train_acc);
    o["leaves"] = summary_json(m.leaves);
    o["height"] = summary_json(m.height);
    if (m.bound) o["bound"] = summary_json(*m.bound);
    if (show_time) o["wall_time"] = summary_json(m.wall_time);
    models.push_back(std::move(o));
  }
  j["models"] = std::move(models);
  j["failures"] = r.failures;
  return j.dump(2);
}

}  // namespace dtvc
