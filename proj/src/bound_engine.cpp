#include "dtvc/bound_engine.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dtvc {

const char* to_string(BoundMode mode) { return mode == BoundMode::exact ? "exact" : "fast"; }

std::size_t PartitionKeyHash::operator()(const PartitionKey& key) const noexcept {
  std::size_t h = std::hash<std::string>{}(key.structure);
  for (std::size_t v : {key.parts, key.points, key.features}) {
    h ^= std::hash<std::size_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::optional<BigCount> PartitionTable::find(const PartitionKey& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

void PartitionTable::insert(PartitionKey key, BigCount value) {
  std::unique_lock lock(mutex_);
  entries_.try_emplace(std::move(key), std::move(value));
}

std::size_t PartitionTable::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void PartitionTable::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

void PartitionTable::save(std::ostream& out) const {
  std::vector<std::pair<PartitionKey, BigCount>> rows;
  {
    std::shared_lock lock(mutex_);
    rows.assign(entries_.begin(), entries_.end());
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    const auto& ka = a.first;
    const auto& kb = b.first;
    return std::tie(ka.structure, ka.parts, ka.points, ka.features) <
           std::tie(kb.structure, kb.parts, kb.points, kb.features);
  });
  out << "# mode=" << to_string(mode_) << '\n';
  for (const auto& [key, value] : rows) {
    out << key.structure << ',' << key.parts << ',' << key.points << ',' << key.features << ',' << value.get_str()
        << '\n';
  }
}

namespace {

bool parse_size(std::string_view text, std::size_t& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::size_t PartitionTable::load(std::istream& in, std::ostream& warnings) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t added = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string expected = std::string("# mode=") + to_string(mode_);
      if (line.rfind("# mode=", 0) == 0 && line != expected) {
        warnings << "partition cache: file holds '" << line.substr(7) << "' bounds but table is "
                 << to_string(mode_) << "; ignoring file\n";
        return added;
      }
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      fields.push_back(rest.substr(0, pos));
    }
    fields.push_back(rest);

    PartitionKey key;
    BigCount value;
    bool ok = fields.size() == 5 && parse_size(fields[1], key.parts) && parse_size(fields[2], key.points) &&
              parse_size(fields[3], key.features) && key.features >= 1;
    if (ok) {
      try {
        TreeStructure t = TreeStructure::parse(fields[0]);
        ok = is_canonical(t);
        key.structure = t.to_string();
      } catch (const std::invalid_argument&) {
        ok = false;
      }
    }
    if (ok) {
      const std::string digits(fields[4]);
      ok = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) &&
           value.set_str(digits, 10) == 0 && value <= stirling2(key.points, key.parts);
    }
    if (!ok) {
      warnings << "partition cache: skipping malformed line " << line_no << '\n';
      continue;
    }
    std::unique_lock lock(mutex_);
    if (entries_.try_emplace(std::move(key), std::move(value)).second) ++added;
  }
  return added;
}

void PartitionTable::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write partition cache '" + path + "'");
  save(out);
}

std::size_t PartitionTable::load_file(const std::string& path, std::ostream& warnings) {
  std::ifstream in(path);
  if (!in) return 0;
  return load(in, warnings);
}

BigCount stump_pi2_bound(std::size_t points, std::size_t features) {
  if (features == 0) throw std::invalid_argument("stump_pi2_bound: feature count must be >= 1");
  if (points <= 1) return 0;
  const std::uint64_t cap = 2 * static_cast<std::uint64_t>(features);
  BigCount sum = 0;
  for (std::size_t k = 1; k < points; ++k) sum += binomial_min(points, k, cap);
  // Terms k and m-k are equal, and the middle term C(m, m/2) is even.
  return sum / 2;
}

std::size_t stump_vcdim_exact(std::size_t features) {
  if (features == 0) throw std::invalid_argument("stump_vcdim_exact: feature count must be >= 1");
  const std::uint64_t budget = 2 * static_cast<std::uint64_t>(features);
  std::size_t d = 1;
  // C(d, floor(d/2)) is strictly increasing in d.
  while (binomial_min(d + 1, (d + 1) / 2, budget + 1) <= budget) ++d;
  return d;
}

namespace {

void check_features(std::size_t features) {
  if (features == 0) throw std::invalid_argument("partition bound: feature count must be >= 1");
}

// Coefficient C(a, c-b) C(b, c-a) (a+b-c)! counting the ways an a-partition of
// the left points and a b-partition of the right points merge into c parts.
// Requires 1 <= a, b <= c <= a + b.
BigCount merge_coefficient(std::size_t a, std::size_t b, std::size_t c) {
  if (c - b > a || c - a > b) return 0;
  return binomial(a, c - b) * binomial(b, c - a) * factorial(a + b - c);
}

class BoundRecursion {
 public:
  BoundRecursion(std::size_t features, PartitionTable& table)
      : features_(features), two_l_(2 * static_cast<std::uint64_t>(features)), table_(table) {}

  // `t` must be canonical.
  BigCount operator()(const TreeStructure& t, std::size_t c, std::size_t m) {
    const std::size_t leaves = t.leaf_count();
    if (c == 0) return m == 0 ? 1 : 0;
    if (c > m || c > leaves) return 0;
    if (c == m || c == 1 || m == 1) return 1;
    if (m <= leaves) return stirling2(m, c);

    PartitionKey key{t.to_string(), c, m, features_};
    if (auto hit = table_.find(key)) return *hit;

    const TreeStructure& left = t.left();
    const TreeStructure& right = t.right();
    const bool same_children = left == right;

    BigCount total = 0;
    if (table_.mode() == BoundMode::exact) {
      for (std::size_t k = left.leaf_count(); k + right.leaf_count() <= m; ++k) {
        BigCount inner = merged_sum(left, right, c, k, m - k);
        if (sgn(inner) == 0) continue;
        total += inner * binomial_min(m, k, two_l_);
      }
    } else {
      // The k-sum has m - L + 1 terms, each at most 2l times the term with
      // both subtrees evaluated at their largest feasible sizes.
      const std::size_t terms = m - leaves + 1;
      BigCount inner = merged_sum(left, right, c, m - right.leaf_count(), m - left.leaf_count());
      total = inner * static_cast<unsigned long>(terms) * static_cast<unsigned long>(two_l_);
    }

    if (same_children) {
      if (mpz_odd_p(total.get_mpz_t())) {
        std::cerr << "warning: odd pre-halving partition sum for " << key.structure << " c=" << c << " m=" << m
                  << "; rounding up\n";
        total += 1;
      }
      total /= 2;
    }
    BigCount result = min_with_stirling2(total, m, c);
    table_.insert(std::move(key), result);
    return result;
  }

 private:
  BigCount merged_sum(const TreeStructure& left, const TreeStructure& right, std::size_t c, std::size_t left_points,
                      std::size_t right_points) {
    const std::size_t max_a = std::min({c, left.leaf_count(), left_points});
    const std::size_t max_b = std::min({c, right.leaf_count(), right_points});
    BigCount sum = 0;
    for (std::size_t a = 1; a <= max_a; ++a) {
      const std::size_t min_b = c > a ? c - a : 1;
      for (std::size_t b = min_b; b <= max_b; ++b) {
        BigCount coeff = merge_coefficient(a, b, c);
        if (sgn(coeff) == 0) continue;
        BigCount pl = (*this)(left, a, left_points);
        if (sgn(pl) == 0) continue;
        BigCount pr = (*this)(right, b, right_points);
        sum += coeff * pl * pr;
      }
    }
    return sum;
  }

  std::size_t features_;
  std::uint64_t two_l_;
  PartitionTable& table_;
};

}  // namespace

BigCount partition_bound_auto(const TreeStructure& t, std::size_t parts, std::size_t points, std::size_t features,
                              PartitionTable& table) {
  check_features(features);
  return BoundRecursion(features, table)(canonical_form(t), parts, points);
}

BigCount partition_bound(const TreeStructure& t, std::size_t parts, std::size_t points, std::size_t features,
                         PartitionTable& table) {
  if (table.mode() != BoundMode::exact) throw std::invalid_argument("partition_bound: table is not in exact mode");
  return partition_bound_auto(t, parts, points, features, table);
}

BigCount partition_bound_fast(const TreeStructure& t, std::size_t parts, std::size_t points, std::size_t features,
                              PartitionTable& table) {
  if (table.mode() != BoundMode::fast) throw std::invalid_argument("partition_bound_fast: table is not in fast mode");
  return partition_bound_auto(t, parts, points, features, table);
}

BigCount growth_bound(const TreeStructure& t, std::size_t points, std::size_t classes, std::size_t features,
                      PartitionTable& table) {
  if (points == 0) throw std::invalid_argument("growth_bound: need at least one point");
  if (classes < 2) throw std::invalid_argument("growth_bound: need at least two classes");
  check_features(features);
  const TreeStructure canonical = canonical_form(t);
  BoundRecursion recursion(features, table);
  BigCount total = 0;
  const std::size_t top = std::min({canonical.leaf_count(), classes, points});
  for (std::size_t a = 1; a <= top; ++a) {
    total += falling_factorial(classes, a) * recursion(canonical, a, points);
  }
  return total;
}

std::size_t vcdim_upper_bound(const TreeStructure& t, std::size_t features, PartitionTable& table) {
  check_features(features);
  if (t.is_leaf()) return 1;
  const TreeStructure canonical = canonical_form(t);
  BoundRecursion recursion(features, table);

  const std::size_t internal = canonical.node_count();
  const std::size_t cap =
      10 * (internal + 1) * (64 + bit_length(BigCount(static_cast<unsigned long>(internal * features))));
  std::size_t m = canonical.leaf_count() + 1;
  for (std::size_t iterations = 0;; ++iterations) {
    if (iterations > cap) throw std::logic_error("vcdim_upper_bound: iteration cap exceeded");
    BigCount shatter = 1;
    shatter <<= static_cast<mp_bitcnt_t>(m - 1);
    shatter -= 1;
    if (recursion(canonical, 2, m) < shatter) return m - 1;
    ++m;
  }
}

}  // namespace dtvc
