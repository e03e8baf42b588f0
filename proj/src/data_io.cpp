#include "dtvc/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <span>

#include <json.hpp>

namespace dtvc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto end = line.find(delimiter, start);
    cells.push_back(trim(std::string_view(line).substr(start, end == std::string::npos ? end : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return cells;
}

bool parse_real(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  if (*first == '+') ++first;
  auto [end, ec] = std::from_chars(first, cell.data() + cell.size(), out);
  return ec == std::errc() && end == cell.data() + cell.size() && std::isfinite(out);
}

std::string format_real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

Sample load(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open " + spec.path.string());
  return load(in, spec);
}

Sample load(std::istream& in, const DatasetSpec& spec) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t columns = 0;
  std::size_t label_col = 0;
  std::vector<double> values;
  std::vector<std::size_t> labels;
  std::vector<std::string> class_names;
  std::map<std::string, std::size_t> class_ids;

  auto resolve_label = [&](std::size_t n_columns) {
    columns = n_columns;
    if (columns < 2) throw DataError("line " + std::to_string(line_no) + ": need at least one feature and a label");
    if (spec.label_index) {
      if (*spec.label_index >= columns) {
        throw DataError("label column " + std::to_string(*spec.label_index) + " out of range (" +
                        std::to_string(columns) + " columns)");
      }
      label_col = *spec.label_index;
    } else if (!spec.label_name.empty()) {
      if (header.empty()) throw DataError("label column given by name but the file has no header");
      auto it = std::find(header.begin(), header.end(), spec.label_name);
      if (it == header.end()) throw DataError("no column named '" + spec.label_name + "'");
      label_col = static_cast<std::size_t>(it - header.begin());
    } else {
      label_col = columns - 1;
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line, spec.delimiter);
    if (spec.has_header && header.empty() && columns == 0) {
      header = std::move(cells);
      resolve_label(header.size());
      continue;
    }
    if (columns == 0) resolve_label(cells.size());
    if (cells.size() != columns) {
      throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns, found " +
                      std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_col) continue;
      double v = 0.0;
      if (!parse_real(cells[c], v)) {
        std::string col = "column " + std::to_string(c + 1);
        if (!header.empty()) col += " (" + header[c] + ")";
        throw DataError("row " + std::to_string(line_no) + ", " + col + ": not a number: '" + cells[c] + "'");
      }
      values.push_back(v);
    }
    const std::string& y = cells[label_col];
    auto [it, inserted] = class_ids.try_emplace(y, class_names.size());
    if (inserted) class_names.push_back(y);
    labels.push_back(it->second);
  }
  if (labels.empty()) throw DataError("dataset " + spec.path.string() + " has no data rows");

  Sample s(columns - 1, std::move(values), std::move(labels), class_names.size());
  s.class_names = std::move(class_names);
  for (std::size_t c = 0; c < columns; ++c) {
    if (c == label_col) continue;
    s.feature_names.push_back(header.empty() ? "x" + std::to_string(s.feature_names.size()) : header[c]);
  }
  return s;
}

void save(const Sample& s, std::ostream& out, char delimiter) {
  if (!s.feature_names.empty()) {
    for (const auto& name : s.feature_names) out << name << delimiter;
    out << "label\n";
  }
  for (std::size_t p = 0; p < s.size(); ++p) {
    for (std::size_t f = 0; f < s.features(); ++f) out << format_real(s.value(p, f)) << delimiter;
    const std::size_t y = s.label(p);
    if (y < s.class_names.size()) {
      out << s.class_names[y];
    } else {
      out << y;
    }
    out << '\n';
  }
}

void save(const Sample& s, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  save(s, out, delimiter);
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[bounded(rng, i)]);
  return perm;
}

std::pair<Sample, Sample> split(const Sample& s, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("split: fraction must be in (0, 1)");
  const std::size_t m = s.size();
  if (m < 2) throw std::invalid_argument("split: need at least two points");
  std::size_t train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(m)));
  train = std::clamp<std::size_t>(train, 1, m - 1);
  const auto perm = seeded_permutation(m, seed);
  const std::span<const std::size_t> all(perm);
  return {s.subset(all.first(train)), s.subset(all.subspan(train))};
}

std::string to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["model"] = r.model;
  j["seed"] = r.seed;
  j["train_acc"] = r.train_acc;
  j["test_acc"] = r.test_acc;
  j["leaves"] = r.leaves;
  j["height"] = r.height;
  j["wall_time"] = r.wall_time;
  if (r.bound) j["bound"] = *r.bound;
  return j.dump(2);
}

RunRecord run_record_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunRecord r;
  r.dataset = j.at("dataset").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.train_acc = j.at("train_acc").get<double>();
  r.test_acc = j.at("test_acc").get<double>();
  r.leaves = j.at("leaves").get<std::size_t>();
  r.height = j.at("height").get<std::size_t>();
  r.wall_time = j.at("wall_time").get<double>();
  if (j.contains("bound")) r.bound = j.at("bound").get<double>();
  return r;
}

void write_run_json(const RunRecord& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(r) << '\n';
}

}  // namespace dtvc
