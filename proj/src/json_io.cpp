#include "spalign/json_io.hpp"

namespace spalign {

namespace {

const char* role_name(Role r) { return r == Role::Id ? "id" : "content"; }

nlohmann::ordered_json grammar_json(const CandidateGrammar& g) {
  nlohmann::ordered_json patterns = nlohmann::ordered_json::array();
  for (const auto& p : g.patterns) patterns.push_back(serialize_pattern(p));
  return {{"g_bits", g.g}, {"e_bits", g.e}, {"total_bits", g.total}, {"patterns", patterns}};
}

}  // namespace

nlohmann::ordered_json alignments_json(std::span<const MultipleAlignment> alignments, const ProbabilityReport& report,
                               const KnowledgeStore& store, bool extras) {
  std::vector<double> prob(alignments.size(), 0.0);
  for (const auto& e : report.entries) prob[e.index] = e.probability;

  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < alignments.size(); ++i) {
    const auto& al = alignments[i];
    nlohmann::ordered_json code = nlohmann::ordered_json::array();
    for (const auto& s : encoding_of(al)) code.push_back(s.name);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : al.rows()) {
      nlohmann::ordered_json syms = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < row.columns.size(); ++k)
        syms.push_back({{"name", row.syms()[k].name}, {"role", role_name(row.syms()[k].role)}, {"column", row.columns[k]}});
      rows.push_back({{"pattern_id", row.pattern_id}, {"symbols", syms}});
    }
    list.push_back({{"rank", i + 1},
                    {"cd_bits", al.score().cd},
                    {"bn_bits", al.score().bn},
                    {"be_bits", al.score().be},
                    {"probability", prob[i]},
                    {"code", code},
                    {"rows", rows}});
  }
  nlohmann::ordered_json out = {{"alignments", list}};
  if (!extras) return out;

  nlohmann::ordered_json pats = nlohmann::ordered_json::array();
  for (const auto& p : store.old_patterns()) {
    double pr = 0.0;
    for (const auto& pp : report.patterns)
      if (pp.pattern_id == p.id) pr = pp.probability;
    pats.push_back({{"pattern_id", p.id}, {"text", pattern_text(p.symbols)}, {"probability", pr}});
  }
  nlohmann::ordered_json infs = nlohmann::ordered_json::array();
  for (const auto& inf : report.inferences)
    infs.push_back({{"pattern_id", inf.pattern_id},
                    {"position", inf.first_pos},
                    {"symbols", inf.symbols},
                    {"probability", inf.probability}});
  out["pattern_probabilities"] = pats;
  out["inferences"] = infs;
  return out;
}

nlohmann::ordered_json learn_json(const LearnResult& result, const CandidateGrammar& naive) {
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    auto g = grammar_json(result.candidates[i]);
    g["rank"] = i + 1;
    cands.push_back(g);
  }
  return {{"candidates", cands}, {"naive", grammar_json(naive)}, {"best_totals", result.best_totals}};
}

}  // namespace spalign
