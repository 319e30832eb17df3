#include "spalign/cost_model.hpp"

#include <cmath>

#include "spalign/error.hpp"

namespace spalign {

CostModel CostModel::from_patterns(std::span<const Pattern> old_patterns) {
  if (old_patterns.empty()) throw ModelError("no Old knowledge");
  CostModel m;
  for (const auto& p : old_patterns)
    for (const auto& s : p.symbols) {
      auto it = m.counts_.find(s.name);
      if (it == m.counts_.end()) it = m.counts_.emplace(s.name, 0).first;
      it->second += p.frequency;
      m.total_ += p.frequency;
    }
  const double total = static_cast<double>(m.total_);
  m.costs_.reserve(m.counts_.size());
  for (const auto& [name, n] : m.counts_) m.costs_.emplace(name, std::log2(total) - std::log2(static_cast<double>(n)));
  m.unseen_cost_ = std::log2(total + 1.0);
  return m;
}

double CostModel::cost(std::string_view name) const {
  // Heterogeneous lookup on unordered_map needs C++20 transparent hashing; the
  // string copy is cheap for short names.
  auto it = costs_.find(std::string(name));
  return it == costs_.end() ? unseen_cost_ : it->second;
}

std::int64_t CostModel::count(std::string_view name) const {
  auto it = counts_.find(name);
  return it == counts_.end() ? 0 : it->second;
}

CostModel build_cost_model(const KnowledgeStore& store) {
  return CostModel::from_patterns(store.old_patterns());
}

double raw_cost(std::span<const Symbol> symbols, const CostModel& model) {
  double bits = 0.0;
  for (const auto& s : symbols) bits += model.cost(s.name);
  return bits;
}

double raw_cost(const Pattern& pattern, const CostModel& model) { return raw_cost(pattern.symbols, model); }

}  // namespace spalign
