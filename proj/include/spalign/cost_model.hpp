#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "spalign/pattern.hpp"

namespace spalign {

/// Per-symbol code lengths in bits, from frequency-weighted symbol counts over
/// a set of Old patterns. Names the Old store never mentions are costed with
/// add-one smoothing: -log2(1 / (total + 1)).
class CostModel {
 public:
  /// Throws ModelError("no Old knowledge") when `old_patterns` is empty.
  static CostModel from_patterns(std::span<const Pattern> old_patterns);

  double cost(std::string_view name) const;
  std::int64_t count(std::string_view name) const;
  std::int64_t total() const noexcept { return total_; }
  double unseen_cost() const noexcept { return unseen_cost_; }

  /// Sorted by name; used for reporting and tests.
  const std::map<std::string, std::int64_t, std::less<>>& counts() const noexcept { return counts_; }

 private:
  std::map<std::string, std::int64_t, std::less<>> counts_;
  std::unordered_map<std::string, double> costs_;
  std::int64_t total_ = 0;
  double unseen_cost_ = 0.0;
};

CostModel build_cost_model(const KnowledgeStore& store);

/// Sum of per-symbol costs.
double raw_cost(std::span<const Symbol> symbols, const CostModel& model);
double raw_cost(const Pattern& pattern, const CostModel& model);

}  // namespace spalign
