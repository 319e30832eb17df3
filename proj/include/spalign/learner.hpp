#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spalign/alignment.hpp"
#include "spalign/engine.hpp"
#include "spalign/pattern.hpp"

namespace spalign {

/// Hands out fresh ID names `<prefix><n>` from one counter, at most `budget`
/// of them in total.
class FreshIds {
 public:
  explicit FreshIds(int budget) : budget_(budget) {}

  std::optional<std::string> take(char prefix);
  bool issued(const std::string& name) const { return issued_.count(name) > 0; }
  int used() const noexcept { return static_cast<int>(issued_.size()); }
  int budget() const noexcept { return budget_; }

 private:
  int budget_;
  std::set<std::string> issued_;
};

struct CandidateGrammar {
  std::vector<Pattern> patterns;
  double g = 0.0;
  double e = 0.0;
  double total = 0.0;
};

struct LearnParams {
  int grammar_beam = 3;
  int iterations = 2;
  int id_symbol_budget = 1000;
  double symbol_bits = 4.0;  // grammar cost of one symbol occurrence
  int derive_from = 2;       // 2-row alignments per sentence and grammar that seed successors
  BuildParams build = default_build();

  static BuildParams default_build() {
    BuildParams b;
    b.beam_width = 10;
    b.max_rows = 7;
    b.top_k = 1;
    b.variants_per_set = 0;
    return b;
  }

  void validate() const;
};

/// Splits a 2-row alignment into matched and unmatched segments. Matched runs
/// become chunks `%< %C.. run %>`; the unmatched runs between two chunks
/// become alternatives `%< %K.. %i run %>` of one class; one abstract pattern
/// `%< %S.. < C.. > < K.. > ... %>` lists the references in column order.
/// ID-symbols of the Old row are wrapping, not material, and are skipped.
/// Returns nothing if the fresh-name budget runs out. Throws UsageError
/// unless the alignment has exactly two rows.
std::vector<Pattern> derive_patterns(const MultipleAlignment& al, FreshIds& ids);

/// One wrapped pattern per distinct corpus sentence, in first-seen order.
std::vector<Pattern> naive_patterns(std::span<const Pattern> corpus, FreshIds& ids);

/// Aligns every corpus pattern against the grammar, sets each pattern's
/// frequency to the number of sentences whose best alignment uses it, drops
/// unused patterns, then computes G and E for what is left. E charges each
/// sentence the code of its best alignment plus the corpus-model cost of any
/// New symbol that alignment leaves unmatched, or the whole sentence when
/// nothing aligns. Throws UsageError on an empty corpus.
CandidateGrammar evaluate_grammar(CandidateGrammar grammar, std::span<const Pattern> corpus,
                                  const LearnParams& params);

struct LearnResult {
  std::vector<CandidateGrammar> candidates;  // total ascending
  std::vector<double> best_totals;           // best total after each corpus pattern is processed
};

/// Beam search over grammars, presenting the corpus `iterations` times.
/// Throws UsageError on an empty corpus.
LearnResult learn(std::span<const Pattern> corpus, const LearnParams& params);

/// Ranking of grammars: total, then G, then the sorted pattern ids.
bool grammar_ranks_before(const CandidateGrammar& a, const CandidateGrammar& b);

}  // namespace spalign
