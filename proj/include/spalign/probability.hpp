#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spalign/alignment.hpp"

namespace spalign {

/// A maximal run of adjacent CONTENT symbols of one Old row that sit in
/// single-member columns: material the alignment predicts but New lacks.
struct Inference {
  std::string pattern_id;
  int row = 0;
  std::size_t first_pos = 0;  // position of the run within the pattern
  std::vector<std::string> symbols;
  int first_column = 0;
  int last_column = 0;
};

std::vector<Inference> extract_inferences(const MultipleAlignment& al);

struct ProbabilityEntry {
  std::size_t index = 0;  // position in the list that was ranked
  double be = 0.0;
  double probability = 0.0;
};

/// Runs are identified across alignments by pattern, position and content.
struct InferenceProbability {
  std::string pattern_id;
  std::size_t first_pos = 0;
  std::vector<std::string> symbols;
  double probability = 0.0;
};

struct PatternProbability {
  std::string pattern_id;
  double probability = 0.0;
};

/// Probabilities relative to the delivered candidates only.
struct ProbabilityReport {
  std::vector<ProbabilityEntry> entries;                // probability descending, ties in list order
  std::vector<InferenceProbability> inferences;         // sorted by pattern id, position, symbols
  std::vector<PatternProbability> patterns;             // Old patterns used by any entry, sorted by id
};

/// p_i = 2^-BE_i / sum_j 2^-BE_j over `alignments`. Each inference and each
/// Old pattern gets the summed probability of the alignments containing it.
/// Throws ModelError("nothing to rank") on an empty list.
ProbabilityReport alignment_probabilities(std::span<const MultipleAlignment> alignments);

}  // namespace spalign
