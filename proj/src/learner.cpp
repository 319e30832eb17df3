#include "spalign/learner.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "spalign/cost_model.hpp"
#include "spalign/error.hpp"

namespace spalign {

std::optional<std::string> FreshIds::take(char prefix) {
  if (used() >= budget_) return std::nullopt;
  std::string name = prefix + std::to_string(used() + 1);
  issued_.insert(name);
  return name;
}

void LearnParams::validate() const {
  if (grammar_beam < 1) throw UsageError("grammar_beam must be >= 1");
  if (iterations < 1) throw UsageError("iterations must be >= 1");
  if (id_symbol_budget < 1) throw UsageError("id_symbol_budget must be >= 1");
  if (!(symbol_bits > 0.0)) throw UsageError("symbol_bits must be > 0");
  if (derive_from < 1) throw UsageError("derive_from must be >= 1");
  build.validate();
}

namespace {

Pattern wrapped(const std::string& id, std::vector<std::string> discriminators, const std::vector<std::string>& body) {
  Pattern p;
  p.id = id;
  for (const auto& d : discriminators) p.id += "_" + d;
  p.symbols.push_back({"<", Role::Id});
  p.symbols.push_back({id, Role::Id});
  for (auto& d : discriminators) p.symbols.push_back({std::move(d), Role::Id});
  for (const auto& w : body) p.symbols.push_back({w, Role::Content});
  p.symbols.push_back({">", Role::Id});
  return p;
}

std::vector<std::string> words_of(const Pattern& p) {
  std::vector<std::string> out;
  for (const auto& s : p.symbols) out.push_back(s.name);
  return out;
}

}  // namespace

std::vector<Pattern> derive_patterns(const MultipleAlignment& al, FreshIds& ids) {
  if (al.row_count() != 2) throw UsageError("derive_patterns needs a 2-row alignment");
  // Per column: the symbol each row has there, if any.
  const int C = al.column_count();
  std::vector<const Symbol*> cell[2];
  for (int r = 0; r < 2; ++r) {
    cell[r].assign(static_cast<std::size_t>(C), nullptr);
    const auto& row = al.rows()[r];
    for (std::size_t i = 0; i < row.columns.size(); ++i) cell[r][row.columns[i]] = &row.syms()[i];
  }

  struct Segment {
    bool matched;
    std::vector<std::string> side[2];
  };
  std::vector<Segment> segs;
  for (int c = 0; c < C; ++c) {
    const bool matched = cell[0][c] && cell[1][c];
    if (!cell[0][c] && cell[1][c]->is_id()) continue;
    if (segs.empty() || segs.back().matched != matched) segs.push_back({matched, {}});
    for (int r = 0; r < 2; ++r) {
      if (!cell[r][c]) continue;
      if (matched && r == 1) continue;
      segs.back().side[r].push_back(cell[r][c]->name);
    }
  }

  std::vector<Pattern> out;
  std::vector<std::string> refs;
  for (const auto& seg : segs) {
    if (seg.matched) {
      auto name = ids.take('C');
      if (!name) return {};
      out.push_back(wrapped(*name, {}, seg.side[0]));
      refs.insert(refs.end(), {"<", *name, ">"});
      continue;
    }
    auto name = ids.take('K');
    if (!name) return {};
    int alt = 0;
    for (int r = 0; r < 2; ++r)
      if (!seg.side[r].empty()) out.push_back(wrapped(*name, {std::to_string(alt++)}, seg.side[r]));
    refs.insert(refs.end(), {"<", *name, ">"});
  }
  auto top = ids.take('S');
  if (!top) return {};
  out.push_back(wrapped(*top, {}, refs));
  return out;
}

std::vector<Pattern> naive_patterns(std::span<const Pattern> corpus, FreshIds& ids) {
  std::vector<Pattern> out;
  std::set<std::vector<std::string>> seen;
  for (const auto& s : corpus) {
    auto words = words_of(s);
    if (!seen.insert(words).second) continue;
    auto name = ids.take('S');
    if (!name) break;
    out.push_back(wrapped(*name, {}, words));
  }
  return out;
}

namespace {

struct SentenceFit {
  double bits = 0.0;
  std::set<std::string> used;
};

// Best-alignment cost of one sentence under `patterns`.
SentenceFit fit(const std::vector<Pattern>& patterns, const Pattern& sentence, const CostModel& corpus_model,
                const LearnParams& params) {
  SentenceFit out;
  if (patterns.empty()) {
    out.bits = raw_cost(sentence, corpus_model);
    return out;
  }
  Pattern s = sentence;
  s.id = "new";
  s.provenance = Provenance::New;
  for (auto& sym : s.symbols) sym.role = Role::Content;
  KnowledgeStore store(patterns, {s});
  const auto model = build_cost_model(store);
  auto build = params.build;
  build.top_k = 1;
  build.exec = ExecPolicy::Serial;
  auto res = build_alignments(store, model, build);
  if (res.empty()) {
    out.bits = raw_cost(sentence, corpus_model);
    return out;
  }
  const auto& best = res.front();
  out.bits = best.score().be;
  const auto& row0 = best.rows().front();
  for (std::size_t i = 0; i < row0.columns.size(); ++i)
    if (best.columns()[row0.columns[i]].size < 2) out.bits += corpus_model.cost(row0.syms()[i].name);
  out.used.insert(best.sorted_row_ids().begin(), best.sorted_row_ids().end());
  return out;
}

}  // namespace

CandidateGrammar evaluate_grammar(CandidateGrammar grammar, std::span<const Pattern> corpus,
                                  const LearnParams& params) {
  if (corpus.empty()) throw UsageError("empty corpus");
  const auto corpus_model = CostModel::from_patterns(corpus);
  // Repeated sentences fit identically; count them instead of re-aligning.
  std::map<std::vector<std::string>, std::pair<const Pattern*, std::int64_t>> distinct;
  for (const auto& s : corpus) {
    auto [it, fresh] = distinct.try_emplace(words_of(s), &s, 0);
    ++it->second.second;
  }

  std::map<std::string, std::int64_t> uses;
  for (const auto& [words, entry] : distinct)
    for (const auto& id : fit(grammar.patterns, *entry.first, corpus_model, params).used) uses[id] += entry.second;
  std::vector<Pattern> kept;
  for (auto& p : grammar.patterns) {
    auto it = uses.find(p.id);
    if (it == uses.end()) continue;
    p.frequency = it->second;
    kept.push_back(std::move(p));
  }
  grammar.patterns = std::move(kept);

  grammar.g = 0.0;
  for (const auto& p : grammar.patterns) grammar.g += params.symbol_bits * static_cast<double>(p.symbols.size());
  grammar.e = 0.0;
  for (const auto& [words, entry] : distinct)
    grammar.e += static_cast<double>(entry.second) * fit(grammar.patterns, *entry.first, corpus_model, params).bits;
  grammar.total = grammar.g + grammar.e;
  return grammar;
}

bool grammar_ranks_before(const CandidateGrammar& a, const CandidateGrammar& b) {
  auto ka = score_key(a.total), kb = score_key(b.total);
  if (ka != kb) return ka < kb;
  auto ga = score_key(a.g), gb = score_key(b.g);
  if (ga != gb) return ga < gb;
  auto ids = [](const CandidateGrammar& g) {
    std::vector<std::string> v;
    for (const auto& p : g.patterns) v.push_back(p.id);
    std::sort(v.begin(), v.end());
    return v;
  };
  return ids(a) < ids(b);
}

namespace {

// Grammars that differ only in the fresh names they were given are the same.
std::vector<std::string> shape_of(const CandidateGrammar& g, const FreshIds& ids) {
  std::map<std::string, std::string> rename;
  std::vector<std::string> lines;
  for (const auto& p : g.patterns) {
    std::string line;
    for (const auto& s : p.symbols) {
      std::string name = s.name;
      if (ids.issued(name)) {
        auto [it, fresh] = rename.try_emplace(name, "#" + std::to_string(rename.size()));
        name = it->second;
      }
      line += (s.is_id() ? "%" : "") + name + " ";
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

LearnResult learn(std::span<const Pattern> corpus, const LearnParams& params) {
  if (corpus.empty()) throw UsageError("empty corpus");
  params.validate();
  FreshIds ids(params.id_symbol_budget);
  LearnResult result;
  // Nothing to align the first sentence with, so it is stored as it is.
  CandidateGrammar first;
  if (auto name = ids.take('S')) first.patterns.push_back(wrapped(*name, {}, words_of(corpus.front())));
  std::vector<CandidateGrammar> beam{evaluate_grammar(std::move(first), corpus, params)};

  for (int it = 0; it < params.iterations; ++it) {
    for (const auto& sentence : corpus) {
      const auto words = words_of(sentence);
      std::vector<CandidateGrammar> fresh;
      for (const auto& g : beam) {
        const bool stored = std::any_of(g.patterns.begin(), g.patterns.end(), [&](const Pattern& p) {
          std::vector<std::string> body;
          for (const auto& s : p.symbols)
            if (!s.is_id()) body.push_back(s.name);
          return body == words;
        });
        if (!stored) {
          if (auto name = ids.take('S')) {
            auto next = g;
            next.patterns.push_back(wrapped(*name, {}, words));
            fresh.push_back(std::move(next));
          }
        }
        if (g.patterns.empty()) continue;

        // Pairwise alignments of the sentence with single grammar patterns.
        Pattern s = sentence;
        s.id = "new";
        s.provenance = Provenance::New;
        for (auto& sym : s.symbols) sym.role = Role::Content;
        KnowledgeStore store(g.patterns, {s});
        const auto model = build_cost_model(store);
        auto build = params.build;
        build.max_rows = 2;
        build.top_k = params.derive_from;
        build.exec = ExecPolicy::Serial;
        for (const auto& al : build_alignments(store, model, build)) {
          auto derived = derive_patterns(al, ids);
          if (derived.empty()) continue;
          auto next = g;
          next.patterns.insert(next.patterns.end(), derived.begin(), derived.end());
          fresh.push_back(std::move(next));
        }
      }

      const long n = static_cast<long>(fresh.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (long k = 0; k < n; ++k) fresh[k] = evaluate_grammar(std::move(fresh[k]), corpus, params);

      std::vector<CandidateGrammar> pool = beam;
      pool.insert(pool.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
      std::stable_sort(pool.begin(), pool.end(), grammar_ranks_before);
      std::set<std::vector<std::string>> shapes;
      beam.clear();
      for (auto& g : pool) {
        if (beam.size() >= static_cast<std::size_t>(params.grammar_beam)) break;
        auto shape = shape_of(g, ids);
        std::sort(shape.begin(), shape.end());
        if (!shapes.insert(std::move(shape)).second) continue;
        beam.push_back(std::move(g));
      }
      result.best_totals.push_back(beam.front().total);
    }
  }
  result.candidates = std::move(beam);
  return result;
}

}  // namespace spalign
