#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "spalign/alignment.hpp"
#include "spalign/learner.hpp"
#include "spalign/pattern.hpp"
#include "spalign/probability.hpp"

namespace spalign {

/// {"alignments":[{"rank","cd_bits","bn_bits","be_bits","probability","code",
/// "rows":[{"pattern_id","symbols":[{"name","role","column"}]}]}]}. With
/// `extras`, also "pattern_probabilities" (one per Old pattern of `store`)
/// and "inferences".
nlohmann::ordered_json alignments_json(std::span<const MultipleAlignment> alignments, const ProbabilityReport& report,
                               const KnowledgeStore& store, bool extras);

nlohmann::ordered_json learn_json(const LearnResult& result, const CandidateGrammar& naive);

}  // namespace spalign
