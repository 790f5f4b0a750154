// Copyright 2026 The docstitch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dataset statistics per filtering level and the quartile distribution of
// context-dependent phenomena over document scores.

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "docstitch/error.hpp"
#include "docstitch/record.hpp"
#include "docstitch/tsv.hpp"

namespace docstitch {

enum class Level { docs = 0, loose75 = 1, medium50 = 2, strict25 = 3 };

inline constexpr std::array<Level, 4> kLevels = {Level::docs, Level::loose75, Level::medium50, Level::strict25};

inline std::string_view to_string(Level l) {
  switch (l) {
    case Level::docs: return "docs";
    case Level::loose75: return "loose75";
    case Level::medium50: return "medium50";
    case Level::strict25: return "strict25";
  }
  return "";
}

struct LevelCounts {
  std::size_t n_segments = 0;
  std::size_t n_subdocs = 0;

  bool operator==(const LevelCounts &) const = default;
};

struct StatsReport {
  // language pair -> counts per level (indexed by Level)
  std::map<std::string, std::array<LevelCounts, 4>> pairs;

  const std::array<LevelCounts, 4> &at(const std::string &pair) const { return pairs.at(pair); }

  // Counts never grow from docs to strict25.
  bool monotone() const {
    for (const auto &[_, levels] : pairs) {
      for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i].n_segments > levels[i - 1].n_segments || levels[i].n_subdocs > levels[i - 1].n_subdocs) {
          return false;
        }
      }
    }
    return true;
  }
};

// Streaming accumulator; records without a sub_doc_id are ignored.
class StatsAccumulator {
 public:
  explicit StatsAccumulator(std::string pair) : pair_(std::move(pair)) {}

  void add(const ScoredRecord &r) {
    if (!r.record.sub_doc_id) return;
    const std::string &id = *r.record.sub_doc_id;
    count(Level::docs, id);
    if (r.kept_at.contains(Cutoff::loose75)) count(Level::loose75, id);
    if (r.kept_at.contains(Cutoff::medium50)) count(Level::medium50, id);
    if (r.kept_at.contains(Cutoff::strict25)) count(Level::strict25, id);
  }

  StatsReport report() const {
    StatsReport rep;
    auto &levels = rep.pairs[pair_];
    for (Level l : kLevels) {
      const auto i = static_cast<std::size_t>(l);
      levels[i] = {segments_[i], subdocs_[i].size()};
    }
    return rep;
  }

 private:
  void count(Level l, const std::string &id) {
    const auto i = static_cast<std::size_t>(l);
    ++segments_[i];
    subdocs_[i].insert(id);
  }

  std::string pair_;
  std::array<std::size_t, 4> segments_{};
  std::array<std::unordered_set<std::string>, 4> subdocs_;
};

inline StatsReport dataset_stats(std::span<const ScoredRecord> records, const std::string &pair = "all") {
  StatsAccumulator acc(pair);
  for (const auto &r : records) acc.add(r);
  return acc.report();
}

inline void write_stats_tsv(std::ostream &out, const StatsReport &rep) {
  out << "pair\tlevel\tn_segments\tn_subdocs\n";
  for (const auto &[pair, levels] : rep.pairs) {
    for (Level l : kLevels) {
      const auto &c = levels[static_cast<std::size_t>(l)];
      out << pair << '\t' << to_string(l) << '\t' << c.n_segments << '\t' << c.n_subdocs << '\n';
    }
  }
}

inline void write_stats_table(std::ostream &out, const StatsReport &rep) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-8s %14s %14s %14s %14s\n", "pair", "", "docs", "loose75", "medium50",
                "strict25");
  out << line;
  for (const auto &[pair, levels] : rep.pairs) {
    std::snprintf(line, sizeof(line), "%-8s %-8s %14zu %14zu %14zu %14zu\n", pair.c_str(), "# segs",
                  levels[0].n_segments, levels[1].n_segments, levels[2].n_segments, levels[3].n_segments);
    out << line;
    std::snprintf(line, sizeof(line), "%-8s %-8s %14zu %14zu %14zu %14zu\n", "", "# docs", levels[0].n_subdocs,
                  levels[1].n_subdocs, levels[2].n_subdocs, levels[3].n_subdocs);
    out << line;
  }
}

// Quartile (1..4) of each score by descending rank; ties keep input order.
// With N = 4q + r, the first r quartiles hold q + 1 items.
inline std::vector<int> assign_quartiles(std::span<const double> scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<int> quartile(n, 0);
  const std::size_t base = n / 4, extra = n % 4;
  std::size_t rank = 0;
  for (int q = 0; q < 4; ++q) {
    const std::size_t size = base + (static_cast<std::size_t>(q) < extra ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k) quartile[order[rank++]] = q + 1;
  }
  return quartile;
}

enum class Antecedent { inter, intra };
enum class Gender { fem, masc, neut };

struct PhenomenonCategory {
  Antecedent antecedent = Antecedent::inter;
  Gender gender = Gender::neut;

  auto operator<=>(const PhenomenonCategory &) const = default;
};

inline std::string to_string(PhenomenonCategory c) {
  std::string s = c.antecedent == Antecedent::inter ? "inter" : "intra";
  s += c.gender == Gender::fem ? "-fem" : c.gender == Gender::masc ? "-masc" : "-neut";
  return s;
}

inline std::optional<PhenomenonCategory> category_from_string(std::string_view s) {
  for (Antecedent a : {Antecedent::inter, Antecedent::intra}) {
    for (Gender g : {Gender::fem, Gender::masc, Gender::neut}) {
      if (to_string(PhenomenonCategory{a, g}) == s) return PhenomenonCategory{a, g};
    }
  }
  return std::nullopt;
}

inline constexpr std::array<PhenomenonCategory, 6> kCategories = {{
    {Antecedent::inter, Gender::fem},  {Antecedent::inter, Gender::masc}, {Antecedent::inter, Gender::neut},
    {Antecedent::intra, Gender::fem},  {Antecedent::intra, Gender::masc}, {Antecedent::intra, Gender::neut},
}};

struct PhenomenonExample {
  std::string sub_doc_id;
  PhenomenonCategory category;
};

// Annotation TSV: sub_doc_id, category tag (e.g. "intra-fem").
inline std::vector<PhenomenonExample> read_phenomena(std::istream &in) {
  std::vector<PhenomenonExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view l = tsv::chomp(line);
    if (l.empty()) continue;
    const auto fields = tsv::split(l);
    if (fields.size() != 2) {
      throw ParseError("expected 2 columns (sub_doc_id, category), got " + std::to_string(fields.size()), line_no);
    }
    const auto cat = category_from_string(fields[1]);
    if (!cat) throw ParseError("unknown phenomenon category \"" + std::string(fields[1]) + "\"", line_no);
    out.push_back({std::string(fields[0]), *cat});
  }
  return out;
}

struct DistributionRow {
  std::array<std::size_t, 4> counts{};
  std::size_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  double percent(int quartile) const {
    const std::size_t t = total();
    return t ? 100.0 * static_cast<double>(counts[static_cast<std::size_t>(quartile - 1)]) / static_cast<double>(t)
             : 0.0;
  }
};

using DistributionTable = std::map<PhenomenonCategory, DistributionRow>;

// Counts each example into the quartile of its sub-document.
inline DistributionTable phenomenon_distribution(std::span<const PhenomenonExample> examples,
                                                 const std::unordered_map<std::string, int> &quartile_of) {
  DistributionTable table;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto it = quartile_of.find(examples[i].sub_doc_id);
    if (it == quartile_of.end()) {
      throw ParseError("sub-document '" + examples[i].sub_doc_id + "' has no score", i + 1);
    }
    ++table[examples[i].category].counts[static_cast<std::size_t>(it->second - 1)];
  }
  return table;
}

inline std::string format_percent(double p) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", p);
  return buf;
}

inline void write_distribution_tsv(std::ostream &out, const DistributionTable &table) {
  out << "category\tn\tq1\tq2\tq3\tq4\n";
  for (const auto &cat : kCategories) {
    auto it = table.find(cat);
    if (it == table.end()) continue;
    out << to_string(cat) << '\t' << it->second.total();
    for (int q = 1; q <= 4; ++q) out << '\t' << format_percent(it->second.percent(q));
    out << '\n';
  }
}

inline void write_distribution_table(std::ostream &out, const DistributionTable &table) {
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %8s %7s %7s %7s %7s\n", "category", "n", "1st", "2nd", "3rd", "4th");
  out << line;
  for (const auto &cat : kCategories) {
    auto it = table.find(cat);
    if (it == table.end()) continue;
    const auto &row = it->second;
    std::snprintf(line, sizeof(line), "%-12s %8zu %6.1f%% %6.1f%% %6.1f%% %6.1f%%\n", to_string(cat).c_str(),
                  row.total(), row.percent(1), row.percent(2), row.percent(3), row.percent(4));
    out << line;
  }
}

}  // namespace docstitch
