#include "spalign/alignment.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "spalign/error.hpp"

namespace spalign {

namespace {

// Successor lists of the column graph in compressed form: the columns that
// follow column c in some row are adj[start[c]] .. adj[start[c + 1]].
struct ColumnGraph {
  std::vector<int> start;
  std::vector<int> adj;
  std::vector<int> indeg;
};

ColumnGraph column_graph(const std::vector<AlignmentRow>& rows, int C) {
  ColumnGraph g;
  g.start.assign(static_cast<std::size_t>(C) + 1, 0);
  g.indeg.assign(static_cast<std::size_t>(C), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i + 1 < row.columns.size(); ++i) {
      ++g.start[row.columns[i] + 1];
      ++g.indeg[row.columns[i + 1]];
    }
  for (int c = 0; c < C; ++c) g.start[c + 1] += g.start[c];
  g.adj.resize(static_cast<std::size_t>(g.start[C]));
  std::vector<int> fill(g.start.begin(), g.start.end() - 1);
  for (const auto& row : rows)
    for (std::size_t i = 0; i + 1 < row.columns.size(); ++i) g.adj[fill[row.columns[i]]++] = row.columns[i + 1];
  return g;
}

}  // namespace

MultipleAlignment::MultipleAlignment(std::vector<AlignmentRow> rows, int column_count,
                                     std::vector<NewSegment> segments)
    : rows_(std::move(rows)), column_count_(column_count), segments_(std::move(segments)) {
  columns_.assign(static_cast<std::size_t>(column_count_), ColumnInfo{});
  for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
    const auto& row = rows_[r];
    const auto syms = row.syms();
    for (int i = 0; i < static_cast<int>(row.columns.size()); ++i) {
      auto& col = columns_.at(static_cast<std::size_t>(row.columns[i]));
      ++col.size;
      if (row.is_new())
        col.touches_new = true;
      else if (syms[i].is_id())
        col.has_id = true;
      if (col.first_row < 0) {
        col.first_row = r;
        col.first_pos = i;
      }
    }
  }

  build_key();

  for (std::size_t r = 1; r < rows_.size(); ++r) sorted_ids_.push_back(rows_[r].pattern_id);
  std::sort(sorted_ids_.begin(), sorted_ids_.end());

  std::vector<std::pair<int, int>> links;
  for (const auto& row : rows_)
    for (std::size_t i = 0; i + 1 < row.columns.size(); ++i) links.emplace_back(row.columns[i], row.columns[i + 1]);
  std::sort(links.begin(), links.end());
  for (std::size_t r = 1; r < rows_.size(); ++r) {
    const auto& cs = rows_[r].columns;
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      if (columns_[cs[i]].size < 2 || columns_[cs[i + 1]].size < 2) continue;
      auto [lo, hi] = std::equal_range(links.begin(), links.end(), std::pair{cs[i], cs[i + 1]});
      if (hi - lo < 2) ++scatter_;
    }
  }
}

// The key must not depend on the order in which rows were added, so columns
// are renumbered by a canonical topological sort of the precedence graph the
// rows induce, breaking ties by each column's (pattern, position) members.
void MultipleAlignment::build_key() {
  const int C = column_count_;
  struct Member {
    int column, pattern, pos;
    auto operator<=>(const Member&) const = default;
  };
  std::vector<Member> members;
  for (const auto& row : rows_)
    for (std::size_t i = 0; i < row.columns.size(); ++i)
      members.push_back({row.columns[i], row.pattern_index, static_cast<int>(i)});
  std::sort(members.begin(), members.end());
  std::vector<int> sig_start(static_cast<std::size_t>(C) + 1, 0);
  for (const auto& m : members) ++sig_start[m.column + 1];
  for (int c = 0; c < C; ++c) sig_start[c + 1] += sig_start[c];
  auto sig_less = [&](int a, int b) {
    return std::lexicographical_compare(
        members.begin() + sig_start[a], members.begin() + sig_start[a + 1], members.begin() + sig_start[b],
        members.begin() + sig_start[b + 1],
        [](const Member& x, const Member& y) { return std::tie(x.pattern, x.pos) < std::tie(y.pattern, y.pos); });
  };
  auto later = [&](int a, int b) {
    if (sig_less(b, a)) return true;
    if (sig_less(a, b)) return false;
    return b < a;
  };

  auto g = column_graph(rows_, C);
  std::priority_queue<int, std::vector<int>, decltype(later)> ready(later);
  for (int c = 0; c < C; ++c)
    if (g.indeg[c] == 0) ready.push(c);
  std::vector<int> canon(static_cast<std::size_t>(C), -1);
  int next = 0;
  while (!ready.empty()) {
    int c = ready.top();
    ready.pop();
    canon[c] = next++;
    for (int k = g.start[c]; k < g.start[c + 1]; ++k)
      if (--g.indeg[g.adj[k]] == 0) ready.push(g.adj[k]);
  }

  std::vector<int> order(rows_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  auto canon_less = [&](int a, int b) {
    const auto& ca = rows_[a].columns;
    const auto& cb = rows_[b].columns;
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                        [&](int x, int y) { return canon[x] < canon[y]; });
  };
  std::sort(order.begin() + (order.empty() ? 0 : 1), order.end(), [&](int a, int b) {
    if (rows_[a].pattern_index != rows_[b].pattern_index) return rows_[a].pattern_index < rows_[b].pattern_index;
    return canon_less(a, b);
  });
  key_.clear();
  key_.reserve(members.size() + 2 * rows_.size() + 2);
  key_.push_back(C);
  key_.push_back(static_cast<std::int32_t>(rows_.size()));
  for (int r : order) {
    key_.push_back(rows_[r].pattern_index);
    key_.push_back(static_cast<std::int32_t>(rows_[r].columns.size()));
    for (int c : rows_[r].columns) key_.push_back(canon[c]);
  }
}

const std::string& MultipleAlignment::column_name(int column) const {
  const auto& col = columns_.at(static_cast<std::size_t>(column));
  return rows_[col.first_row].syms()[col.first_pos].name;
}

std::vector<std::string> MultipleAlignment::old_row_ids() const {
  std::vector<std::string> ids;
  for (std::size_t r = 1; r < rows_.size(); ++r) ids.push_back(rows_[r].pattern_id);
  return ids;
}

MultipleAlignment seed_alignment(const KnowledgeStore& store) {
  if (store.new_patterns().empty()) throw ModelError("no New patterns");
  auto symbols = std::make_shared<std::vector<Symbol>>();
  std::vector<NewSegment> segments;
  for (const auto& p : store.new_patterns()) {
    NewSegment seg{p.id, symbols->size(), 0};
    for (const auto& s : p.symbols) symbols->push_back({s.name, Role::Content});
    seg.end = symbols->size();
    segments.push_back(std::move(seg));
  }
  AlignmentRow row0;
  row0.pattern_id = "new";
  row0.columns.resize(symbols->size());
  for (std::size_t i = 0; i < symbols->size(); ++i) row0.columns[i] = static_cast<int>(i);
  const int n = static_cast<int>(symbols->size());
  row0.symbols = std::move(symbols);
  std::vector<AlignmentRow> rows;
  rows.push_back(std::move(row0));
  return MultipleAlignment(std::move(rows), n, std::move(segments));
}

Precedence::Precedence(const MultipleAlignment& al)
    : columns_(al.column_count()), words_((static_cast<std::size_t>(al.column_count()) + 63) / 64) {
  const auto C = static_cast<std::size_t>(columns_);
  next_.assign(C * words_, 0);
  after_.assign(C * words_, 0);
  before_.assign(C * words_, 0);
  std::vector<std::uint64_t> prev(C * words_, 0);
  for (const auto& row : al.rows())
    for (std::size_t i = 0; i + 1 < row.columns.size(); ++i) {
      const auto a = static_cast<std::size_t>(row.columns[i]), b = static_cast<std::size_t>(row.columns[i + 1]);
      next_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
      prev[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
    }
  // Column order is topological, so one sweep in each direction suffices.
  auto close = [&](const std::vector<std::uint64_t>& step, std::vector<std::uint64_t>& out, std::size_t c) {
    std::uint64_t* dst = &out[c * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = step[c * words_ + w];
      dst[w] |= bits;
      while (bits) {
        const std::size_t s = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
        bits &= bits - 1;
        const std::uint64_t* src = &out[s * words_];
        for (std::size_t v = 0; v < words_; ++v) dst[v] |= src[v];
      }
    }
  };
  for (std::size_t c = C; c-- > 0;) close(next_, after_, c);
  for (std::size_t c = 0; c < C; ++c) close(prev, before_, c);
}

MultipleAlignment extend_alignment(const MultipleAlignment& base, const Pattern& old, int pattern_index,
                                   const MatchPath& path) {
  if (path.pairs.size() < 2) return extend_alignment(base, old, pattern_index, path, nullptr);
  Precedence prec(base);
  return extend_alignment(base, old, pattern_index, path, &prec);
}

MultipleAlignment extend_alignment(const MultipleAlignment& base, const Pattern& old, int pattern_index,
                                   const MatchPath& path, const Precedence* prec) {
  const int C = base.column_count();
  const int L = static_cast<int>(old.symbols.size());
  const auto& cols = base.columns();

  std::vector<bool> used(static_cast<std::size_t>(C), false);
  for (std::size_t i = 0; i < path.pairs.size(); ++i) {
    const auto& pr = path.pairs[i];
    if (pr.driving < 0 || pr.driving >= L || pr.target < 0 || pr.target >= C)
      throw std::logic_error("extend_alignment: pair out of range");
    if (i > 0 && pr.driving <= path.pairs[i - 1].driving)
      throw std::logic_error("extend_alignment: path is not strictly monotonic");
    if (used[pr.target]) throw std::logic_error("extend_alignment: column used twice");
    used[pr.target] = true;
    if (old.symbols[pr.driving].name != base.column_name(pr.target))
      throw std::logic_error("extend_alignment: pair links different names");
    if (old.symbols[pr.driving].is_id() && cols[pr.target].has_id)
      throw std::logic_error("extend_alignment: column already holds an ID-symbol");
  }
  if (path.pairs.size() > 1) {
    if (prec == nullptr || prec->column_count() != C) throw std::logic_error("extend_alignment: precedence missing");
    for (std::size_t i = 0; i < path.pairs.size(); ++i)
      for (std::size_t j = i + 1; j < path.pairs.size(); ++j)
        if (prec->reaches(path.pairs[j].target, path.pairs[i].target))
          throw std::logic_error("extend_alignment: path crosses the column order");
  }

  // Provisional columns: base columns keep their ids, fresh ones follow. Each
  // gets a placement key; the final order is the topological order that
  // takes the smallest key whenever there is a choice.
  std::vector<double> key(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) key[c] = c;
  std::vector<int> row_cols(static_cast<std::size_t>(L), -1);
  for (const auto& pr : path.pairs) row_cols[pr.driving] = pr.target;
  auto fresh = [&](int d, double k) {
    row_cols[d] = static_cast<int>(key.size());
    key.push_back(k);
  };
  if (path.pairs.empty()) {
    for (int d = 0; d < L; ++d) fresh(d, C + d);
  } else {
    int next_pair = 0;
    for (int d = 0; d < L; ++d) {
      if (row_cols[d] >= 0) {
        ++next_pair;
        continue;
      }
      if (next_pair < static_cast<int>(path.pairs.size())) {
        const auto& nx = path.pairs[next_pair];
        fresh(d, nx.target - 1.0 / (2 + nx.driving - d));
      } else {
        const auto& last = path.pairs.back();
        fresh(d, last.target + 0.5 - 1.0 / (2 + d - last.driving));
      }
    }
  }

  std::vector<AlignmentRow> rows = base.rows();
  AlignmentRow added;
  added.pattern_id = old.id;
  added.pattern_index = pattern_index;
  added.symbols = std::make_shared<const std::vector<Symbol>>(old.symbols);
  added.columns = std::move(row_cols);
  rows.push_back(std::move(added));

  const int total = static_cast<int>(key.size());
  auto g = column_graph(rows, total);
  auto later = [&](int a, int b) { return key[a] != key[b] ? key[a] > key[b] : a > b; };
  std::priority_queue<int, std::vector<int>, decltype(later)> ready(later);
  for (int c = 0; c < total; ++c)
    if (g.indeg[c] == 0) ready.push(c);
  std::vector<int> remap(static_cast<std::size_t>(total), -1);
  int next = 0;
  while (!ready.empty()) {
    int c = ready.top();
    ready.pop();
    remap[c] = next++;
    for (int k = g.start[c]; k < g.start[c + 1]; ++k)
      if (--g.indeg[g.adj[k]] == 0) ready.push(g.adj[k]);
  }
  if (next != total) throw std::logic_error("extend_alignment: path creates a cycle");
  for (auto& row : rows)
    for (auto& c : row.columns) c = remap[c];
  return MultipleAlignment(std::move(rows), total, base.new_segments());
}

Projection projection(const MultipleAlignment& al) {
  Projection p;
  p.symbols.reserve(al.columns().size());
  for (int c = 0; c < al.column_count(); ++c) {
    const auto& col = al.columns()[c];
    p.symbols.push_back({al.column_name(c), col.has_id ? Role::Id : Role::Content});
    p.touches_new.push_back(col.touches_new);
  }
  return p;
}

std::vector<Symbol> encoding_of(const MultipleAlignment& al) {
  std::vector<std::pair<int, const Symbol*>> code;
  const auto& cols = al.columns();
  for (std::size_t r = 1; r < al.rows().size(); ++r) {
    const auto& row = al.rows()[r];
    const auto syms = row.syms();
    for (std::size_t i = 0; i < syms.size(); ++i)
      if (syms[i].is_id() && cols[row.columns[i]].size == 1) code.emplace_back(row.columns[i], &syms[i]);
  }
  std::sort(code.begin(), code.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Symbol> out;
  out.reserve(code.size());
  for (const auto& [c, s] : code) out.push_back(*s);
  return out;
}

CompressionDifference score_alignment(const MultipleAlignment& al, const CostModel& model) {
  CompressionDifference cd;
  const auto& row0 = al.rows().front();
  const auto syms = row0.syms();
  for (std::size_t i = 0; i < syms.size(); ++i)
    if (al.columns()[row0.columns[i]].size >= 2) cd.bn += model.cost(syms[i].name);
  for (const auto& s : encoding_of(al)) cd.be += model.cost(s.name);
  cd.cd = cd.bn - cd.be;
  return cd;
}

std::vector<std::string> check_invariants(const MultipleAlignment& al) {
  std::vector<std::string> problems;
  const int C = al.column_count();
  std::vector<int> size(static_cast<std::size_t>(C), 0), ids(static_cast<std::size_t>(C), 0);
  std::vector<const std::string*> name(static_cast<std::size_t>(C), nullptr);
  for (std::size_t r = 0; r < al.rows().size(); ++r) {
    const auto& row = al.rows()[r];
    const auto syms = row.syms();
    const std::string where = "row " + std::to_string(r);
    if (row.columns.size() != syms.size()) {
      problems.push_back(where + ": column list does not match symbol count");
      continue;
    }
    if (syms.empty()) problems.push_back(where + ": empty row");
    for (std::size_t i = 0; i < syms.size(); ++i) {
      int c = row.columns[i];
      if (c < 0 || c >= C) {
        problems.push_back(where + ": column out of range");
        continue;
      }
      if (i > 0 && row.columns[i - 1] >= c) problems.push_back(where + ": symbols out of order or sharing a column");
      ++size[c];
      if (!row.is_new() && syms[i].is_id()) ++ids[c];
      if (name[c] == nullptr)
        name[c] = &syms[i].name;
      else if (*name[c] != syms[i].name)
        problems.push_back("column " + std::to_string(c) + ": mismatched names");
    }
  }
  for (int c = 0; c < C; ++c) {
    if (size[c] == 0) problems.push_back("column " + std::to_string(c) + ": empty");
    if (ids[c] > 1) problems.push_back("column " + std::to_string(c) + ": more than one ID-symbol");
  }
  for (std::size_t r = 1; r < al.rows().size(); ++r) {
    const auto& row = al.rows()[r];
    bool shares = std::any_of(row.columns.begin(), row.columns.end(),
                              [&](int c) { return c >= 0 && c < C && size[c] >= 2; });
    if (!shares) problems.push_back("row " + std::to_string(r) + ": shares no match column");
  }
  return problems;
}

bool alignment_ranks_before(const MultipleAlignment& a, const MultipleAlignment& b) {
  auto ka = score_key(a.score().cd), kb = score_key(b.score().cd);
  if (ka != kb) return ka > kb;
  if (a.row_count() != b.row_count()) return a.row_count() < b.row_count();
  if (a.sorted_row_ids() != b.sorted_row_ids()) return a.sorted_row_ids() < b.sorted_row_ids();
  return a.scatter() < b.scatter();
}

}  // namespace spalign
