#pragma once

#include <string>
#include <vector>

#include "spalign/alignment.hpp"

namespace spalign {

enum class Orientation { Rows, Columns };

struct RenderOptions {
  Orientation orientation = Orientation::Rows;
  int width = 80;  // hint only; lines are never broken inside an alignment
  bool show_scores = true;

  void validate() const;
};

/// ROWS: one line per row with its index on both sides; symbols sharing a
/// column start at the same character; a line of `|` between two rows marks
/// the columns they share. COLUMNS: the transpose, one line per column, rows
/// as character columns headed and footed by their indices, `-` joining
/// neighbouring rows that share the column.
std::string render_alignment(const MultipleAlignment& al, const RenderOptions& opts);

/// Recovers each row's symbol names from render_alignment output, in row
/// order. Assumes symbol names contain no spaces and do not end in `-`.
std::vector<std::vector<std::string>> parse_rendered(const std::string& text, Orientation orientation);

}  // namespace spalign
