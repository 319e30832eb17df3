#include "spalign/matcher.hpp"

namespace spalign {

namespace {

struct CostScorer {
  std::vector<double> costs;  // per driving position

  bool allowed(int, int) const { return true; }
  double value(int d, int) const { return costs[d]; }
};

}  // namespace

double path_score(const MatchPath& path, std::span<const Symbol> driving, const CostModel& model) {
  double bits = 0.0;
  for (const auto& pr : path.pairs) bits += model.cost(driving[pr.driving].name);
  return bits;
}

std::vector<MatchPath> find_matches(std::span<const Symbol> driving, std::span<const Symbol> target,
                                    const MatchParams& params, const CostModel& model) {
  CostScorer scorer;
  scorer.costs.reserve(driving.size());
  for (const auto& s : driving) scorer.costs.push_back(model.cost(s.name));
  return find_matches_with(driving, target, params, scorer);
}

}  // namespace spalign
