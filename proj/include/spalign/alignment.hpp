#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spalign/cost_model.hpp"
#include "spalign/matcher.hpp"
#include "spalign/pattern.hpp"

namespace spalign {

/// BN: cost of New symbols that sit in match columns. BE: cost of the code
/// (unmatched ID-symbols of Old rows). CD = BN - BE.
struct CompressionDifference {
  double bn = 0.0;
  double be = 0.0;
  double cd = 0.0;
};

/// One New pattern's slice of row 0.
struct NewSegment {
  std::string pattern_id;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct AlignmentRow {
  std::string pattern_id;  // "new" for row 0
  int pattern_index = -1;  // index into the Old list of the store; -1 for row 0
  std::shared_ptr<const std::vector<Symbol>> symbols;
  std::vector<int> columns;  // strictly increasing, one per symbol

  std::span<const Symbol> syms() const { return *symbols; }
  bool is_new() const noexcept { return pattern_index < 0; }
};

struct ColumnInfo {
  int size = 0;
  bool has_id = false;       // some member is an ID-symbol of an Old row
  bool touches_new = false;  // row 0 has a symbol here
  int first_row = -1;        // any member, for the column's name
  int first_pos = -1;
};

/// Row 0 holds the New material; every further row is one instance of an Old
/// pattern. Columns are ordered left to right. Values are immutable once
/// built apart from the cached score.
class MultipleAlignment {
 public:
  MultipleAlignment(std::vector<AlignmentRow> rows, int column_count, std::vector<NewSegment> segments);

  const std::vector<AlignmentRow>& rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }
  int column_count() const noexcept { return column_count_; }
  const std::vector<NewSegment>& new_segments() const noexcept { return segments_; }
  const std::vector<ColumnInfo>& columns() const noexcept { return columns_; }
  const std::string& column_name(int column) const;

  const CompressionDifference& score() const noexcept { return score_; }
  void set_score(const CompressionDifference& cd) noexcept { score_ = cd; }

  /// Identical row multisets with identical column structure (which symbols
  /// share a column) give equal keys, whatever the order rows were added in.
  const std::vector<std::int32_t>& canonical_key() const noexcept { return key_; }

  /// Pattern ids of rows 1..k in row order.
  std::vector<std::string> old_row_ids() const;
  /// The same ids sorted, which does not depend on the order rows were added.
  const std::vector<std::string>& sorted_row_ids() const noexcept { return sorted_ids_; }

  /// Adjacent symbol pairs of Old rows that both sit in match columns but are
  /// not adjacent in any other row. Lower means rows were merged along
  /// matching runs rather than scattered pairings; used only to break ties.
  int scatter() const noexcept { return scatter_; }

 private:
  void build_key();

  std::vector<AlignmentRow> rows_;
  int column_count_ = 0;
  std::vector<NewSegment> segments_;
  std::vector<ColumnInfo> columns_;
  std::vector<std::int32_t> key_;
  std::vector<std::string> sorted_ids_;
  int scatter_ = 0;
  CompressionDifference score_;
};

/// One symbol per column, as seen by the next pairwise match.
struct Projection {
  std::vector<Symbol> symbols;  // role is ID if any member is an ID-symbol
  std::vector<bool> touches_new;
};

/// Reachability between columns: a column precedes another when some chain
/// of row-adjacent symbols leads from one to the other. Any valid column
/// order is a linear extension of this relation.
class Precedence {
 public:
  explicit Precedence(const MultipleAlignment& al);

  int column_count() const noexcept { return columns_; }
  std::size_t words() const noexcept { return words_; }
  bool reaches(int from, int to) const { return test(after_, from, to); }
  /// Some row has adjacent symbols in these two columns.
  bool adjacent(int from, int to) const { return test(next_, from, to); }
  /// Bitsets of `words()` 64-bit words.
  const std::uint64_t* ancestors(int column) const { return &before_[static_cast<std::size_t>(column) * words_]; }
  const std::uint64_t* descendants(int column) const { return &after_[static_cast<std::size_t>(column) * words_]; }

 private:
  bool test(const std::vector<std::uint64_t>& bits, int row, int col) const {
    return (bits[static_cast<std::size_t>(row) * words_ + static_cast<std::size_t>(col) / 64] >> (col % 64)) & 1U;
  }

  int columns_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> next_;
  std::vector<std::uint64_t> after_;
  std::vector<std::uint64_t> before_;
};

/// Row 0 only: all New patterns concatenated in load order. Throws ModelError
/// when there are no New patterns.
MultipleAlignment seed_alignment(const KnowledgeStore& store);

/// Adds one instance of `old` as a new row. Path pairs are (position in `old`,
/// column of `base`), increasing in position; the columns need not increase
/// in base's current order as long as no later pair's column precedes an
/// earlier one's. Unmatched symbols of `old` get fresh columns: leading ones
/// just before the first matched column, gap ones just before the next
/// matched column, trailing ones just after the last; an empty path appends
/// them at the end. Columns are then re-sorted into the stable topological
/// order closest to that placement. Throws std::logic_error when the path is
/// not a valid match.
MultipleAlignment extend_alignment(const MultipleAlignment& base, const Pattern& old, int pattern_index,
                                   const MatchPath& path);

/// Same, reusing a precedence relation already computed for `base`; it may be
/// null only when the path has fewer than two pairs.
MultipleAlignment extend_alignment(const MultipleAlignment& base, const Pattern& old, int pattern_index,
                                   const MatchPath& path, const Precedence* prec);

Projection projection(const MultipleAlignment& al);

/// Unmatched ID-symbols of Old rows, in column order.
std::vector<Symbol> encoding_of(const MultipleAlignment& al);

CompressionDifference score_alignment(const MultipleAlignment& al, const CostModel& model);

/// Human-readable invariant violations; empty when the alignment is valid.
std::vector<std::string> check_invariants(const MultipleAlignment& al);

/// Ordering used everywhere alignments are ranked: CD descending, then fewer
/// rows, then the sorted Old row-id sequence, then lower scatter. Remaining
/// ties keep generation order (callers sort stably).
bool alignment_ranks_before(const MultipleAlignment& a, const MultipleAlignment& b);

}  // namespace spalign
