#pragma once

#include <string>
#include <vector>

#include "spalign/pattern.hpp"

namespace spalign {

/// A worked example: pattern files plus the Old row-sets the expected
/// alignments must select. Row-sets are sorted pattern ids, repeated when a
/// pattern is used more than once.
struct Fixture {
  std::string name;
  std::string old_file;  // repository-relative path
  std::string new_file;
  std::string old_text;  // file contents, embedded at build time
  std::string new_text;
  std::vector<std::vector<std::string>> expected;
  std::vector<std::string> distractors;  // Old ids that must not appear in the best alignment

  KnowledgeStore store() const;
};

/// "fruit flies like a banana" with the two parses. expected[0] is the
/// N V ADP reading, expected[1] the NP V NP reading.
Fixture fruit_flies_fixture();

/// John Smith's symptoms against a small disease knowledge base.
/// expected[0] is the influenza explanation.
Fixture diagnosis_fixture();

/// Corpus for the learner: one sentence frame, two slots, two fillers each.
/// Only new_file/new_text are set.
Fixture template_corpus_fixture();

}  // namespace spalign
