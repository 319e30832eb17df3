#include "spalign/fixtures.hpp"

#include <algorithm>

#include "fixture_data.hpp"

namespace spalign {

namespace {

std::vector<std::string> sorted(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

KnowledgeStore Fixture::store() const { return load_store(old_text, new_text, old_file, new_file); }

Fixture fruit_flies_fixture() {
  Fixture f;
  f.name = "fruit_flies";
  f.old_file = "data/fruit_flies/old.sp";
  f.new_file = "data/fruit_flies/new.sp";
  f.old_text = fixture_data::kFruitFliesOld;
  f.new_text = fixture_data::kFruitFliesNew;
  // O1 N-banana, O2 NP(D N), O3 D-a, O4 ADV-like, O5 ADP, O6 N-fruit, O7 S 0,
  // O8 V-flies, O9 V-like, O10 S 1, O11 A-fruit, O12 NP(A N), O13 N-flies.
  f.expected = {sorted({"O7", "O6", "O8", "O5", "O4", "O2", "O3", "O1"}),
                sorted({"O10", "O12", "O11", "O13", "O9", "O2", "O3", "O1"})};
  return f;
}

Fixture diagnosis_fixture() {
  Fixture f;
  f.name = "diagnosis";
  f.old_file = "data/diagnosis/old.sp";
  f.new_file = "data/diagnosis/new.sp";
  f.old_text = fixture_data::kDiagnosisOld;
  f.new_text = fixture_data::kDiagnosisNew;
  // O1 framework, O2 influenza, O3 flu_symptoms, O4 fever, O5 t1 38-39.
  f.expected = {sorted({"O1", "O2", "O3", "O4", "O5"})};
  f.distractors = {"O6", "O7", "O8", "O9"};
  return f;
}

Fixture template_corpus_fixture() {
  Fixture f;
  f.name = "template_corpus";
  f.new_file = "data/learning/corpus.sp";
  f.new_text = fixture_data::kLearningCorpus;
  return f;
}

}  // namespace spalign
