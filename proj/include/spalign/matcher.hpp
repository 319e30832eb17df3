#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spalign/cost_model.hpp"
#include "spalign/error.hpp"
#include "spalign/pattern.hpp"

namespace spalign {

struct MatchParams {
  int max_paths = 8;         // alternative paths delivered
  bool allow_partial = true;  // false: every driving symbol must be matched
  int min_hits = 1;

  void validate() const {
    if (max_paths < 1) throw UsageError("max_paths must be >= 1");
    if (min_hits < 1) throw UsageError("min_hits must be >= 1");
  }
};

struct MatchPair {
  int driving = 0;
  int target = 0;
  auto operator<=>(const MatchPair&) const = default;
};

/// Strictly monotonic in both coordinates; every pair links equal names.
struct MatchPath {
  std::vector<MatchPair> pairs;
  double score = 0.0;
  int driving_matched = 0;
  int driving_unmatched = 0;
  int target_matched = 0;
  int target_unmatched = 0;
};

/// Scores are compared on a 1e-9 bit grid so that ties are transitive and
/// independent of summation order.
inline std::int64_t score_key(double bits) {
  const double x = bits * 1e9;
  if (!(x < 9.0e18)) return std::numeric_limits<std::int64_t>::max();
  if (!(x > -9.0e18)) return std::numeric_limits<std::int64_t>::min();
  // Rounds half away from zero, as llround does, without the libm call.
  return static_cast<std::int64_t>(x < 0 ? x - 0.5 : x + 0.5);
}

/// Ranking used for delivered paths: score descending, then fewer pairs, then
/// the lexicographically smallest pair sequence.
inline bool path_ranks_before(const MatchPath& a, const MatchPath& b) {
  auto ka = score_key(a.score), kb = score_key(b.score);
  if (ka != kb) return ka > kb;
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() < b.pairs.size();
  return a.pairs < b.pairs;
}

/// Sum of per-symbol costs of the matched names.
double path_score(const MatchPath& path, std::span<const Symbol> driving, const CostModel& model);

/// Up to `max_paths` alternative match paths between two sequences, ranked by
/// summed symbol cost. Throws UsageError on empty input.
std::vector<MatchPath> find_matches(std::span<const Symbol> driving, std::span<const Symbol> target,
                                    const MatchParams& params, const CostModel& model);

namespace detail {

struct PartialPath {
  std::vector<MatchPair> pairs;
  double gained = 0.0;
  int last_target = -1;
};

struct Candidate {
  double priority;
  int parent;
  int target;  // -1 = driving symbol skipped
};

inline constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

}  // namespace detail

/// Generic form of find_matches. `scorer` supplies
///   bool allowed(int d, int t) const  -- extra admissibility beyond name equality
///   double value(int d, int t) const  -- contribution of pairing d with t
/// The search is hit-list driven (for each driving symbol, the target positions
/// bearing the same name) and keeps at most 4 * max_paths live partial paths,
/// ranked by bits gained so far plus the exact best completion from the
/// partial's frontier. Work is O(n * m) plus O(n * width * hits).
template <class Scorer>
std::vector<MatchPath> find_matches_with(std::span<const Symbol> driving, std::span<const Symbol> target,
                                         const MatchParams& params, const Scorer& scorer) {
  params.validate();
  if (driving.empty() || target.empty()) throw UsageError("find_matches: empty input sequence");

  const int n = static_cast<int>(driving.size());
  const int m = static_cast<int>(target.size());

  std::unordered_map<std::string_view, std::vector<int>> by_name;
  by_name.reserve(target.size());
  for (int t = 0; t < m; ++t) by_name[target[t].name].push_back(t);

  static const std::vector<int> kNoHits;
  std::vector<const std::vector<int>*> hits(n, &kNoHits);
  for (int d = 0; d < n; ++d)
    if (auto it = by_name.find(driving[d].name); it != by_name.end()) hits[d] = &it->second;

  // best[d][t]: best value obtainable from driving[d..) against target[t..).
  const auto stride = static_cast<std::size_t>(m) + 1;
  std::vector<double> best((static_cast<std::size_t>(n) + 1) * stride, 0.0);
  auto at = [&](int d, int t) -> double& { return best[static_cast<std::size_t>(d) * stride + t]; };
  std::vector<double> hit_value(m, detail::kInfeasible);
  for (int d = n - 1; d >= 0; --d) {
    for (int t : *hits[d])
      if (scorer.allowed(d, t)) hit_value[t] = scorer.value(d, t);
    at(d, m) = params.allow_partial ? 0.0 : detail::kInfeasible;
    for (int t = m - 1; t >= 0; --t) {
      double v = at(d, t + 1);
      if (params.allow_partial) v = std::max(v, at(d + 1, t));
      if (hit_value[t] != detail::kInfeasible && at(d + 1, t + 1) != detail::kInfeasible)
        v = std::max(v, hit_value[t] + at(d + 1, t + 1));
      at(d, t) = v;
    }
    for (int t : *hits[d]) hit_value[t] = detail::kInfeasible;
  }

  const std::size_t width = static_cast<std::size_t>(params.max_paths) * 4;
  std::vector<detail::PartialPath> live(1);
  std::vector<detail::Candidate> cands;
  for (int d = 0; d < n; ++d) {
    cands.clear();
    for (int p = 0; p < static_cast<int>(live.size()); ++p) {
      const auto& part = live[p];
      if (params.allow_partial) {
        double rest = at(d + 1, part.last_target + 1);
        if (rest != detail::kInfeasible) cands.push_back({part.gained + rest, p, -1});
      }
      const auto& hl = *hits[d];
      for (auto it = std::upper_bound(hl.begin(), hl.end(), part.last_target); it != hl.end(); ++it) {
        int t = *it;
        if (!scorer.allowed(d, t)) continue;
        double rest = at(d + 1, t + 1);
        if (rest == detail::kInfeasible) continue;
        cands.push_back({part.gained + scorer.value(d, t) + rest, p, t});
      }
    }
    auto order = [](const detail::Candidate& a, const detail::Candidate& b) {
      auto ka = score_key(a.priority), kb = score_key(b.priority);
      if (ka != kb) return ka > kb;
      if (a.parent != b.parent) return a.parent < b.parent;
      return a.target < b.target;
    };
    if (cands.size() > width) {
      std::nth_element(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(width), cands.end(), order);
      cands.resize(width);
    }
    std::sort(cands.begin(), cands.end(), order);

    std::vector<detail::PartialPath> next;
    next.reserve(cands.size());
    for (const auto& c : cands) {
      detail::PartialPath child = live[c.parent];
      if (c.target >= 0) {
        child.pairs.push_back({d, c.target});
        child.gained += scorer.value(d, c.target);
        child.last_target = c.target;
      }
      next.push_back(std::move(child));
    }
    live = std::move(next);
    if (live.empty()) return {};
  }

  auto insertable = [&](int d_lo, int d_hi, int t_lo, int t_hi) {
    for (int d = d_lo + 1; d < d_hi; ++d) {
      const auto& hl = *hits[d];
      for (auto it = std::upper_bound(hl.begin(), hl.end(), t_lo); it != hl.end() && *it < t_hi; ++it)
        if (scorer.allowed(d, *it)) return true;
    }
    return false;
  };

  std::vector<MatchPath> out;
  for (auto& part : live) {
    if (static_cast<int>(part.pairs.size()) < params.min_hits) continue;
    bool maximal = true;
    int pd = -1, pt = -1;
    for (std::size_t i = 0; i <= part.pairs.size() && maximal; ++i) {
      int nd = i < part.pairs.size() ? part.pairs[i].driving : n;
      int nt = i < part.pairs.size() ? part.pairs[i].target : m;
      if (insertable(pd, nd, pt, nt)) maximal = false;
      pd = nd;
      pt = nt;
    }
    if (!maximal) continue;
    MatchPath path;
    path.pairs = std::move(part.pairs);
    for (const auto& pr : path.pairs) path.score += scorer.value(pr.driving, pr.target);
    path.driving_matched = path.target_matched = static_cast<int>(path.pairs.size());
    path.driving_unmatched = n - path.driving_matched;
    path.target_unmatched = m - path.target_matched;
    out.push_back(std::move(path));
  }
  std::sort(out.begin(), out.end(), path_ranks_before);
  if (out.size() > static_cast<std::size_t>(params.max_paths)) out.resize(params.max_paths);
  return out;
}

}  // namespace spalign
