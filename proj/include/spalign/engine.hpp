#pragma once

#include <vector>

#include "spalign/alignment.hpp"
#include "spalign/cost_model.hpp"
#include "spalign/matcher.hpp"
#include "spalign/pattern.hpp"

namespace spalign {

/// Serial is the reference kernel; Parallel distributes stage expansion over
/// OpenMP threads and must produce identical output.
enum class ExecPolicy { Serial, Parallel };

struct BuildParams {
  int beam_width = 50;  // alignments carried into each stage
  int max_rows = 12;    // including row 0
  int top_k = 5;
  int variants_per_set = 1;  // beam slots per multiset of Old patterns before leftovers are filled; 0 = no cap
  MatchParams match;
  ExecPolicy exec = ExecPolicy::Parallel;

  void validate() const;
};

/// Pair contribution to CD when an Old pattern symbol joins a projected
/// column, plus a small bonus per pair so that equal-gain paths prefer more
/// unification. Exposed for tests and the learner.
class ExtensionScorer {
 public:
  static constexpr double kPairBonus = 1e-6;

  ExtensionScorer(const MultipleAlignment& base, const Pattern& old, const CostModel& model);

  bool allowed(int d, int t) const { return !(old_id_[d] && column_has_id_[t]); }
  double value(int d, int t) const { return column_gain_[t] + own_gain_[d] + kPairBonus; }
  /// Exact CD change (up to rounding) of extending the base along `path`:
  /// pair gains without the bonus, minus the ID-symbols of `old` left in the
  /// code.
  double cd_delta(const MatchPath& path) const;

 private:
  std::vector<double> column_gain_;
  std::vector<bool> column_has_id_;
  std::vector<double> own_gain_;
  std::vector<bool> old_id_;
};

/// Match paths of `old` (driving) into the columns of an alignment. Same
/// search as find_matches_with, except that target positions must respect
/// the column precedence relation rather than the projection's linear order,
/// and the completion bound ignores order.
std::vector<MatchPath> extension_paths(const Pattern& old, const Projection& proj, const Precedence& prec,
                                       const MatchParams& params, const ExtensionScorer& scorer);

/// All single-row extensions of `base` by `old`, scored.
std::vector<MultipleAlignment> extensions_of(const MultipleAlignment& base, const Projection& proj,
                                             const Pattern& old, int pattern_index, const CostModel& model,
                                             const MatchParams& match);

struct StageOutput {
  std::vector<MultipleAlignment> alignments;
  std::vector<int> base;  // index into the live list each alignment extends
};

/// One search stage: every live alignment against every Old pattern. The
/// result order is fixed (live index, then pattern index, then path rank)
/// whatever the policy.
StageOutput expand_stage(const std::vector<MultipleAlignment>& live, const KnowledgeStore& store,
                         const CostModel& model, const MatchParams& match, ExecPolicy exec);

/// Staged beam search from the seed alignment: stage k gives every live
/// alignment one more Old row. Extensions are kept whether or not they beat
/// their base, since a row often pays off only once a later row matches its
/// ID-symbols; the search ends at max_rows or when nothing can be extended.
/// Returns up to top_k distinct alignments (seed excluded) by CD descending;
/// empty when nothing matches.
std::vector<MultipleAlignment> build_alignments(const KnowledgeStore& store, const CostModel& model,
                                                const BuildParams& params);

}  // namespace spalign
