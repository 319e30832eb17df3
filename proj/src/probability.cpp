#include "spalign/probability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "spalign/error.hpp"

namespace spalign {

std::vector<Inference> extract_inferences(const MultipleAlignment& al) {
  std::vector<Inference> out;
  const auto& cols = al.columns();
  for (std::size_t r = 1; r < al.rows().size(); ++r) {
    const auto& row = al.rows()[r];
    const auto syms = row.syms();
    std::size_t i = 0;
    while (i < syms.size()) {
      auto open = [&](std::size_t k) { return !syms[k].is_id() && cols[row.columns[k]].size == 1; };
      if (!open(i)) {
        ++i;
        continue;
      }
      Inference inf;
      inf.pattern_id = row.pattern_id;
      inf.row = static_cast<int>(r);
      inf.first_pos = i;
      inf.first_column = row.columns[i];
      while (i < syms.size() && open(i)) {
        inf.symbols.push_back(syms[i].name);
        inf.last_column = row.columns[i];
        ++i;
      }
      out.push_back(std::move(inf));
    }
  }
  return out;
}

ProbabilityReport alignment_probabilities(std::span<const MultipleAlignment> alignments) {
  if (alignments.empty()) throw ModelError("nothing to rank");
  double least = alignments.front().score().be;
  for (const auto& al : alignments) least = std::min(least, al.score().be);
  // Shifting by the smallest BE keeps the largest weight at exactly 1.
  std::vector<double> weight;
  double sum = 0.0;
  for (const auto& al : alignments) {
    weight.push_back(std::exp2(-(al.score().be - least)));
    sum += weight.back();
  }

  ProbabilityReport report;
  for (std::size_t i = 0; i < alignments.size(); ++i)
    report.entries.push_back({i, alignments[i].score().be, weight[i] / sum});
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return a.probability > b.probability; });

  using Key = std::tuple<std::string, std::size_t, std::vector<std::string>>;
  std::map<Key, double> runs;
  std::map<std::string, double> patterns;
  for (const auto& e : report.entries) {
    const auto& al = alignments[e.index];
    std::set<Key> keys;
    for (auto& inf : extract_inferences(al)) keys.emplace(inf.pattern_id, inf.first_pos, std::move(inf.symbols));
    for (const auto& k : keys) runs[k] += e.probability;
    std::set<std::string> ids(al.sorted_row_ids().begin(), al.sorted_row_ids().end());
    for (const auto& id : ids) patterns[id] += e.probability;
  }
  for (auto& [k, p] : runs) report.inferences.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), p});
  for (auto& [id, p] : patterns) report.patterns.push_back({id, p});
  return report;
}

}  // namespace spalign
