#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "spalign/alignment.hpp"
#include "spalign/cost_model.hpp"
#include "spalign/engine.hpp"
#include "spalign/fixtures.hpp"
#include "spalign/pattern.hpp"

namespace testing {

/// (position in the added pattern, existing row, position in that row).
using Link = std::tuple<int, int, int>;

inline spalign::MultipleAlignment attach(const spalign::MultipleAlignment& al, const spalign::KnowledgeStore& store,
                                         const std::string& id, const std::vector<Link>& links,
                                         const spalign::CostModel& model) {
  const int idx = store.find_old(id);
  spalign::MatchPath path;
  for (const auto& [d, row, pos] : links) path.pairs.push_back({d, al.rows()[row].columns[pos]});
  auto out = spalign::extend_alignment(al, store.old_patterns()[idx], idx, path);
  out.set_score(spalign::score_alignment(out, model));
  return out;
}

/// The two parses of the fruit-flies sentence, assembled row by row.
inline spalign::MultipleAlignment parse_a(const spalign::KnowledgeStore& st, const spalign::CostModel& m) {
  auto al = spalign::seed_alignment(st);
  al = attach(al, st, "O1", {{3, 0, 4}}, m);                                              // r1 N banana
  al = attach(al, st, "O3", {{3, 0, 3}}, m);                                              // r2 D a
  al = attach(al, st, "O2", {{3, 2, 0}, {4, 2, 1}, {5, 2, 4}, {6, 1, 0}, {7, 1, 1}, {8, 1, 4}}, m);  // r3 NP
  al = attach(al, st, "O4", {{3, 0, 2}}, m);                                              // r4 ADV like
  al = attach(al, st, "O5", {{2, 4, 0}, {3, 4, 1}, {4, 4, 4}, {5, 3, 0}, {6, 3, 1}, {7, 3, 9}}, m);  // r5 ADP
  al = attach(al, st, "O6", {{3, 0, 0}}, m);                                              // r6 N fruit
  al = attach(al, st, "O8", {{3, 0, 1}}, m);                                              // r7 V flies
  return attach(al, st, "O7",
                {{2, 6, 0}, {3, 6, 1}, {4, 6, 4}, {5, 7, 0}, {6, 7, 1}, {7, 7, 4}, {8, 5, 0}, {9, 5, 1}, {10, 5, 8}},
                m);  // r8 S 0
}

inline spalign::MultipleAlignment parse_b(const spalign::KnowledgeStore& st, const spalign::CostModel& m) {
  auto al = spalign::seed_alignment(st);
  al = attach(al, st, "O1", {{3, 0, 4}}, m);
  al = attach(al, st, "O3", {{3, 0, 3}}, m);
  al = attach(al, st, "O2", {{3, 2, 0}, {4, 2, 1}, {5, 2, 4}, {6, 1, 0}, {7, 1, 1}, {8, 1, 4}}, m);
  al = attach(al, st, "O11", {{3, 0, 0}}, m);  // r4 A fruit
  al = attach(al, st, "O13", {{3, 0, 1}}, m);  // r5 N flies
  al = attach(al, st, "O12", {{3, 4, 0}, {4, 4, 1}, {5, 4, 4}, {6, 5, 0}, {7, 5, 1}, {8, 5, 4}}, m);  // r6 NP
  al = attach(al, st, "O9", {{3, 0, 2}}, m);  // r7 V like
  return attach(al, st, "O10",
                {{2, 6, 0}, {3, 6, 1}, {4, 6, 9}, {5, 7, 0}, {6, 7, 1}, {7, 7, 4}, {8, 3, 0}, {9, 3, 1}, {10, 3, 9}},
                m);  // r8 S 1
}

inline spalign::Pattern pat(const std::string& line, spalign::Provenance prov = spalign::Provenance::Old) {
  return spalign::parse_patterns(line, prov, prov == spalign::Provenance::Old ? "O" : "N", "test").at(0);
}

}  // namespace testing
