#include "spalign/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <map>
#include <memory>
#include <set>

#include "spalign/error.hpp"

namespace spalign {

void BuildParams::validate() const {
  if (beam_width < 1) throw UsageError("beam_width must be >= 1");
  if (max_rows < 1) throw UsageError("max_rows must be >= 1");
  if (top_k < 1) throw UsageError("top_k must be >= 1");
  if (variants_per_set < 0) throw UsageError("variants_per_set must be >= 0");
  match.validate();
}

ExtensionScorer::ExtensionScorer(const MultipleAlignment& base, const Pattern& old, const CostModel& model) {
  const auto& cols = base.columns();
  column_gain_.resize(cols.size(), 0.0);
  column_has_id_.resize(cols.size(), false);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    column_has_id_[c] = cols[c].has_id;
    // A lone New symbol becomes covered (BN grows); a lone Old ID-symbol
    // leaves the code (BE shrinks). Anything else is already settled.
    if (cols[c].size == 1 && (cols[c].touches_new || cols[c].has_id))
      column_gain_[c] = model.cost(base.column_name(static_cast<int>(c)));
  }
  own_gain_.resize(old.symbols.size(), 0.0);
  old_id_.resize(old.symbols.size(), false);
  for (std::size_t d = 0; d < old.symbols.size(); ++d) {
    old_id_[d] = old.symbols[d].is_id();
    if (old_id_[d]) own_gain_[d] = model.cost(old.symbols[d].name);
  }
}

double ExtensionScorer::cd_delta(const MatchPath& path) const {
  double delta = 0.0;
  std::vector<bool> matched(own_gain_.size(), false);
  for (const auto& pr : path.pairs) {
    delta += column_gain_[pr.target] + own_gain_[pr.driving];
    matched[pr.driving] = true;
  }
  for (std::size_t d = 0; d < own_gain_.size(); ++d)
    if (!matched[d]) delta -= own_gain_[d];
  return delta;
}

namespace {

// Partial paths share prefixes: each pair is a node pointing at the node of
// the previous pair, so extending a partial copies nothing but its bitset.
struct Node {
  MatchPair pair;
  int prev;
};

struct Partial {
  int node = -1;       // last pair, -1 when none
  int last = -1;       // target of the last pair
  int last_d = -1;     // driving position of the last pair
  double gained = 0.0;
  int spread = 0;      // consecutive pairs that are not adjacent on both sides
  int reach = 0;       // summed column distance between consecutive pairs
};

struct Step {
  std::int64_t priority;  // score_key of gained value plus optimistic rest
  int spread;
  int reach;
  int parent;
  int target;  // -1: symbol left unmatched
};

bool bit(const std::uint64_t* bits, int c) { return (bits[c / 64] >> (c % 64)) & 1U; }

}  // namespace

std::vector<MatchPath> extension_paths(const Pattern& old, const Projection& proj, const Precedence& prec,
                                       const MatchParams& params, const ExtensionScorer& scorer) {
  params.validate();
  const int n = static_cast<int>(old.symbols.size());
  const int m = static_cast<int>(proj.symbols.size());
  const std::size_t words = prec.words();
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  std::unordered_map<std::string_view, std::vector<int>> by_name;
  for (int t = 0; t < m; ++t) by_name[proj.symbols[t].name].push_back(t);
  std::vector<std::vector<int>> hits(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d)
    if (auto it = by_name.find(old.symbols[d].name); it != by_name.end())
      for (int t : it->second)
        if (scorer.allowed(d, t)) hits[d].push_back(t);

  // rest[d]: optimistic value of driving[d..), ignoring the column order.
  std::vector<double> rest(static_cast<std::size_t>(n) + 1, 0.0);
  for (int d = n - 1; d >= 0; --d) {
    double top = params.allow_partial ? 0.0 : kNone;
    for (int t : hits[d]) top = std::max(top, scorer.value(d, t));
    rest[d] = top == kNone || rest[d + 1] == kNone ? kNone : top + rest[d + 1];
  }
  if (rest[0] == kNone) return {};

  const std::size_t width = static_cast<std::size_t>(params.max_paths) * 4;
  std::vector<Node> nodes;
  nodes.reserve(width * static_cast<std::size_t>(n));
  std::vector<Partial> live(1), next;
  std::vector<std::uint64_t> blocked(words, 0), next_blocked;  // per partial: columns the next pair may not use
  std::vector<Step> steps;
  auto order = [](const Step& a, const Step& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.spread != b.spread) return a.spread < b.spread;
    if (a.reach != b.reach) return a.reach < b.reach;
    if (a.parent != b.parent) return a.parent < b.parent;
    return a.target < b.target;
  };
  for (int d = 0; d < n; ++d) {
    steps.clear();
    for (int p = 0; p < static_cast<int>(live.size()); ++p) {
      const auto& part = live[p];
      const std::uint64_t* bl = &blocked[static_cast<std::size_t>(p) * words];
      if (params.allow_partial) steps.push_back({score_key(part.gained + rest[d + 1]), part.spread, part.reach, p, -1});
      for (int t : hits[d])
        if (!bit(bl, t)) {
          const int step = part.last < 0 || (part.last_d == d - 1 && prec.adjacent(part.last, t)) ? 0 : 1;
          const int far = part.last < 0 ? 0 : std::abs(t - part.last);
          steps.push_back(
              {score_key(part.gained + scorer.value(d, t) + rest[d + 1]), part.spread + step, part.reach + far, p, t});
        }
    }
    if (steps.size() > width) {
      std::nth_element(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(width), steps.end(), order);
      steps.resize(width);
    }
    std::sort(steps.begin(), steps.end(), order);
    next.clear();
    next_blocked.assign(steps.size() * words, 0);
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& st = steps[k];
      Partial child = live[st.parent];
      std::uint64_t* dst = &next_blocked[k * words];
      std::copy_n(&blocked[static_cast<std::size_t>(st.parent) * words], words, dst);
      if (st.target >= 0) {
        child.spread = st.spread;
        child.reach = st.reach;
        nodes.push_back({{d, st.target}, child.node});
        child.node = static_cast<int>(nodes.size()) - 1;
        child.last = st.target;
        child.last_d = d;
        child.gained += scorer.value(d, st.target);
        const auto* anc = prec.ancestors(st.target);
        for (std::size_t w = 0; w < words; ++w) dst[w] |= anc[w];
        dst[st.target / 64] |= std::uint64_t{1} << (st.target % 64);
      }
      next.push_back(child);
    }
    live.swap(next);
    blocked.swap(next_blocked);
    if (live.empty()) return {};
  }

  auto pairs_of = [&](const Partial& part) {
    std::vector<MatchPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (int k = part.node; k >= 0; k = nodes[k].prev) pairs.push_back(nodes[k].pair);
    std::reverse(pairs.begin(), pairs.end());
    return pairs;
  };

  // A path is kept only if no further pair could be added to it.
  auto maximal = [&](const std::vector<MatchPair>& pairs) {
    std::vector<int> target_of(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (const auto& pr : pairs) {
      target_of[pr.driving] = pr.target;
      used[pr.target] = true;
    }
    for (int d = 0; d < n; ++d) {
      if (target_of[d] >= 0) continue;
      for (int t : hits[d]) {
        if (used[t]) continue;
        bool fits = true;
        for (const auto& pr : pairs) {
          if (pr.driving < d ? (pr.target == t || prec.reaches(t, pr.target))
                             : prec.reaches(pr.target, t)) {
            fits = false;
            break;
          }
        }
        if (fits) return false;
      }
    }
    return true;
  };

  struct Found {
    MatchPath path;
    int spread;
    int reach;
  };
  std::vector<Found> found;
  for (const auto& part : live) {
    auto pairs = pairs_of(part);
    if (static_cast<int>(pairs.size()) < params.min_hits || !maximal(pairs)) continue;
    MatchPath path;
    path.pairs = std::move(pairs);
    for (const auto& pr : path.pairs) path.score += scorer.value(pr.driving, pr.target);
    path.driving_matched = path.target_matched = static_cast<int>(path.pairs.size());
    path.driving_unmatched = n - path.driving_matched;
    path.target_unmatched = m - path.target_matched;
    found.push_back({std::move(path), part.spread, part.reach});
  }
  // Among equal scores the tightest path wins, which pairs anonymous
  // brackets with their nearest partners.
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    auto ka = score_key(a.path.score), kb = score_key(b.path.score);
    if (ka != kb) return ka > kb;
    if (a.spread != b.spread) return a.spread < b.spread;
    if (a.reach != b.reach) return a.reach < b.reach;
    return path_ranks_before(a.path, b.path);
  });
  std::vector<MatchPath> out;
  for (auto& f : found) {
    if (out.size() >= static_cast<std::size_t>(params.max_paths)) break;
    out.push_back(std::move(f.path));
  }
  return out;
}

std::vector<MultipleAlignment> extensions_of(const MultipleAlignment& base, const Projection& proj,
                                             const Pattern& old, int pattern_index, const CostModel& model,
                                             const MatchParams& match) {
  ExtensionScorer scorer(base, old, model);
  const Precedence prec(base);
  auto paths = extension_paths(old, proj, prec, match, scorer);
  std::vector<MultipleAlignment> out;
  out.reserve(paths.size());
  for (const auto& path : paths) {
    auto al = extend_alignment(base, old, pattern_index, path, &prec);
    al.set_score(score_alignment(al, model));
    out.push_back(std::move(al));
  }
  return out;
}

StageOutput expand_stage(const std::vector<MultipleAlignment>& live, const KnowledgeStore& store,
                         const CostModel& model, const MatchParams& match, ExecPolicy exec) {
  const auto& olds = store.old_patterns();
  const long n_live = static_cast<long>(live.size());
  const long n_old = static_cast<long>(olds.size());
  std::vector<Projection> projs(live.size());
  std::vector<std::vector<MultipleAlignment>> slots(static_cast<std::size_t>(n_live * n_old));

  if (exec == ExecPolicy::Serial) {
    for (long i = 0; i < n_live; ++i) projs[i] = projection(live[i]);
    for (long i = 0; i < n_live; ++i)
      for (long j = 0; j < n_old; ++j)
        slots[i * n_old + j] = extensions_of(live[i], projs[i], olds[j], static_cast<int>(j), model, match);
  } else {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n_live; ++i) projs[i] = projection(live[i]);
#pragma omp parallel for schedule(dynamic, 4)
    for (long k = 0; k < n_live * n_old; ++k) {
      const long i = k / n_old, j = k % n_old;
      slots[k] = extensions_of(live[i], projs[i], olds[j], static_cast<int>(j), model, match);
    }
  }

  std::size_t total = 0;
  for (const auto& s : slots) total += s.size();
  StageOutput out;
  out.alignments.reserve(total);
  out.base.reserve(total);
  for (std::size_t k = 0; k < slots.size(); ++k)
    for (auto& al : slots[k]) {
      out.alignments.push_back(std::move(al));
      out.base.push_back(static_cast<int>(k / static_cast<std::size_t>(n_old)));
    }
  return out;
}

namespace {

struct KeyLess {
  bool operator()(const MultipleAlignment* a, const MultipleAlignment* b) const {
    return a->canonical_key() < b->canonical_key();
  }
};

std::vector<int> row_set(const MultipleAlignment& al) {
  std::vector<int> set;
  for (const auto& row : al.rows())
    if (!row.is_new()) set.push_back(row.pattern_index);
  std::sort(set.begin(), set.end());
  return set;
}

/// Sorts by rank and drops later duplicates, keeping at most `limit`. At most
/// `per_set` alignments that use the same multiset of Old patterns are taken
/// first; slots still free after that go to the best of the rest.
std::vector<MultipleAlignment> best_distinct(std::vector<MultipleAlignment> items, std::size_t limit,
                                             std::size_t per_set) {
  std::stable_sort(items.begin(), items.end(), alignment_ranks_before);
  std::set<const MultipleAlignment*, KeyLess> seen;
  std::map<std::vector<int>, std::size_t> uses;
  std::vector<std::size_t> first, rest;
  for (std::size_t i = 0; i < items.size() && first.size() < limit; ++i) {
    if (!seen.insert(&items[i]).second) continue;
    if (per_set > 0 && ++uses[row_set(items[i])] > per_set) rest.push_back(i);
    else first.push_back(i);
  }
  const std::size_t extra = std::min(rest.size(), limit - first.size());
  first.insert(first.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra));
  std::sort(first.begin(), first.end());
  std::vector<MultipleAlignment> out;
  out.reserve(first.size());
  for (auto i : first) out.push_back(std::move(items[i]));
  return out;
}

}  // namespace

namespace {

template <class F>
void for_each_index(long n, ExecPolicy exec, F&& f) {
  if (exec == ExecPolicy::Serial) {
    for (long i = 0; i < n; ++i) f(i);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) f(i);
  }
}

struct Candidate {
  int base;
  int pattern;
  MatchPath path;
  double cd;  // base CD plus the scorer's delta; equals the built score up to rounding
};

// Well above the rounding error of a predicted CD and well below any real
// difference between two scores.
constexpr double kPredictionSlack = 1e-6;

}  // namespace

std::vector<MultipleAlignment> build_alignments(const KnowledgeStore& store, const CostModel& model,
                                                const BuildParams& params) {
  params.validate();
  auto seed = seed_alignment(store);
  seed.set_score(score_alignment(seed, model));

  const auto& olds = store.old_patterns();
  const long n_old = static_cast<long>(olds.size());
  std::vector<MultipleAlignment> live{seed};
  std::vector<MultipleAlignment> results;
  const auto top_k = static_cast<std::size_t>(params.top_k);
  const auto beam = static_cast<std::size_t>(params.beam_width);
  const auto per_set = static_cast<std::size_t>(params.variants_per_set);

  for (int rows = 1; rows < params.max_rows; ++rows) {
    // Paths for every (live alignment, Old pattern) pair, in generation order.
    const long n_live = static_cast<long>(live.size());
    std::vector<Projection> projs(live.size());
    std::vector<std::unique_ptr<Precedence>> precs(live.size());
    for_each_index(n_live, params.exec, [&](long i) {
      projs[i] = projection(live[i]);
      precs[i] = std::make_unique<Precedence>(live[i]);
    });
    std::vector<std::vector<Candidate>> slots(static_cast<std::size_t>(n_live * n_old));
    for_each_index(n_live * n_old, params.exec, [&](long k) {
      const long i = k / n_old, j = k % n_old;
      ExtensionScorer scorer(live[i], olds[j], model);
      for (auto& path : extension_paths(olds[j], projs[i], *precs[i], params.match, scorer)) {
        const double cd = live[i].score().cd + scorer.cd_delta(path);
        slots[k].push_back({static_cast<int>(i), static_cast<int>(j), std::move(path), cd});
      }
    });
    std::vector<Candidate> cands;
    for (auto& slot : slots)
      for (auto& c : slot) cands.push_back(std::move(c));
    if (cands.empty()) break;

    std::vector<std::size_t> order(cands.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cands[a].cd > cands[b].cd; });

    std::vector<std::unique_ptr<MultipleAlignment>> built(cands.size());
    std::size_t built_to = 0;  // prefix of `order` already built
    auto build = [&](std::size_t to) {
      const std::size_t from = built_to;
      if (to <= from) return;
      built_to = to;
      for_each_index(static_cast<long>(to - from), params.exec, [&](long q) {
        const auto& c = cands[order[from + static_cast<std::size_t>(q)]];
        auto al = extend_alignment(live[c.base], olds[c.pattern], c.pattern, c.path, precs[c.base].get());
        al.set_score(score_alignment(al, model));
        built[order[from + static_cast<std::size_t>(q)]] = std::make_unique<MultipleAlignment>(std::move(al));
      });
    };

    // Build in predicted order until the beam and the result list could be
    // filled from what is built. Everything scoring at least as well as the
    // weakest of those is then built too, so ranking the built set gives the
    // same answer as ranking every extension.
    std::set<const MultipleAlignment*, KeyLess> seen;
    std::map<std::vector<int>, std::size_t> uses;
    std::size_t distinct = 0, accepted = 0, done = 0;
    double floor = std::numeric_limits<double>::infinity();
    const std::size_t batch = std::max<std::size_t>({beam, top_k, 64});
    while (done < order.size() && (accepted < beam || distinct < top_k)) {
      const std::size_t to = std::min(order.size(), done + batch);
      build(to);
      for (; done < to; ++done) {
        const auto& al = *built[order[done]];
        floor = std::min(floor, al.score().cd);
        if (!seen.insert(&al).second) continue;
        ++distinct;
        if (per_set == 0 || ++uses[row_set(al)] <= per_set) ++accepted;
        if (accepted >= beam && distinct >= top_k) {
          ++done;
          break;
        }
      }
    }
    std::size_t end = done;
    while (end < order.size() && cands[order[end]].cd >= floor - kPredictionSlack) ++end;
    build(end);

    std::vector<MultipleAlignment> exts;
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (built[k]) exts.push_back(std::move(*built[k]));

    results.insert(results.end(), exts.begin(), exts.end());
    results = best_distinct(std::move(results), top_k, 0);
    live = best_distinct(std::move(exts), beam, per_set);
  }
  return results;
}

}  // namespace spalign
