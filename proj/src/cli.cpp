#include "spalign/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "spalign/cost_model.hpp"
#include "spalign/engine.hpp"
#include "spalign/error.hpp"
#include "spalign/json_io.hpp"
#include "spalign/learner.hpp"
#include "spalign/probability.hpp"
#include "spalign/render.hpp"

namespace spalign {

namespace {

// Runs `body`, mapping library exceptions onto exit codes.
template <class F>
int guarded(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err, F&& body) {
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return body();
  } catch (const UsageError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const ModelError& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return kExitInput;
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string clip(std::string s, std::size_t n) {
  if (s.size() > n) s = s.substr(0, n - 3) + "...";
  return s;
}

}  // namespace

int run_align(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build multiple alignments of New patterns against Old knowledge", "align"};
  std::string old_path, new_path, format = "text", layout = "rows";
  BuildParams bp;
  bool no_partial = false, probs = false, serial = false;
  app.add_option("--old", old_path, "Old pattern file")->required();
  app.add_option("--new", new_path, "New pattern file")->required();
  app.add_option("--beam", bp.beam_width, "Alignments kept per stage")->capture_default_str();
  app.add_option("--max-rows", bp.max_rows, "Rows per alignment, row 0 included")->capture_default_str();
  app.add_option("--top", bp.top_k, "Alignments reported")->capture_default_str();
  app.add_flag("--no-partial", no_partial, "Every symbol of an added Old pattern must match");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_flag("--probs", probs, "Report probabilities of patterns and inferences");
  app.add_option("--layout", layout, "Text layout")->check(CLI::IsMember({"rows", "columns"}))->capture_default_str();
  app.add_flag("--serial", serial, "Use the serial reference kernels");

  return guarded(app, args, out, err, [&] {
    bp.match.allow_partial = !no_partial;
    bp.exec = serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
    bp.validate();
    const auto store = load_store_files(old_path, new_path);
    const auto model = build_cost_model(store);
    const auto alignments = build_alignments(store, model, bp);
    if (alignments.empty()) {
      err << "align: no alignment found\n";
      return static_cast<int>(kExitEmpty);
    }
    const auto report = alignment_probabilities(alignments);

    if (format == "json") {
      out << alignments_json(alignments, report, store, probs).dump(2) << "\n";
      return static_cast<int>(kExitOk);
    }
    std::vector<double> prob(alignments.size());
    for (const auto& e : report.entries) prob[e.index] = e.probability;
    RenderOptions ro;
    ro.orientation = layout == "columns" ? Orientation::Columns : Orientation::Rows;
    for (std::size_t i = 0; i < alignments.size(); ++i) {
      out << "Alignment " << i + 1 << " of " << alignments.size() << "\n";
      out << render_alignment(alignments[i], ro);
      out << "code:";
      for (const auto& s : encoding_of(alignments[i])) out << " " << s.name;
      out << "\n";
      if (probs) out << "probability: " << fixed(prob[i], 6) << "\n";
      out << "\n";
    }
    if (probs) {
      out << "Pattern probabilities (relative to the delivered alignments):\n";
      for (const auto& p : store.old_patterns()) {
        double pr = 0.0;
        for (const auto& pp : report.patterns)
          if (pp.pattern_id == p.id) pr = pp.probability;
        out << "  " << p.id << "  " << fixed(pr, 6) << "  " << clip(pattern_text(p.symbols), 60) << "\n";
      }
      out << "Inferences:\n";
      for (const auto& inf : report.inferences) {
        std::string run;
        for (const auto& s : inf.symbols) run += (run.empty() ? "" : " ") + s;
        out << "  " << inf.pattern_id << " @" << inf.first_pos << "  " << fixed(inf.probability, 6) << "  " << run
            << "\n";
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int run_learn(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn a grammar from a corpus of New patterns", "learn"};
  std::string corpus_path, out_path, format = "text";
  LearnParams lp;
  app.add_option("--corpus", corpus_path, "Corpus pattern file")->required();
  app.add_option("--beam", lp.build.beam_width, "Alignment beam per sentence")->capture_default_str();
  app.add_option("--grammar-beam", lp.grammar_beam, "Candidate grammars kept")->capture_default_str();
  app.add_option("--iterations", lp.iterations, "Passes over the corpus")->capture_default_str();
  app.add_option("--out", out_path, "Grammar output file (default: standard output)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  return guarded(app, args, out, err, [&] {
    lp.validate();
    const auto corpus = parse_patterns(read_text_file(corpus_path), Provenance::New, "N", corpus_path);
    if (corpus.empty()) throw UsageError("empty corpus");
    const auto result = learn(corpus, lp);
    FreshIds naive_ids(lp.id_symbol_budget);
    const auto naive = evaluate_grammar({naive_patterns(corpus, naive_ids), 0, 0, 0}, corpus, lp);
    const auto& best = result.candidates.front();
    const std::string grammar = serialize_patterns(best.patterns);

    if (!out_path.empty()) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ParseError(out_path, 0, "cannot write file");
      f << grammar;
    }
    if (format == "json") {
      out << learn_json(result, naive).dump(2) << "\n";
      return static_cast<int>(kExitOk);
    }
    // Summary lines are comments so that standard output stays loadable.
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      const auto& g = result.candidates[i];
      out << "# candidate " << i + 1 << ": G = " << fixed(g.g, 4) << "  E = " << fixed(g.e, 4)
          << "  total = " << fixed(g.total, 4) << "\n";
    }
    out << "# naive: G = " << fixed(naive.g, 4) << "  E = " << fixed(naive.e, 4) << "  total = " << fixed(naive.total, 4)
        << "\n";
    if (out_path.empty()) out << grammar;
    return static_cast<int>(kExitOk);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const char* kUsage = "usage: spalign align|learn [options]   (--help for details)\n";
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (args[0] == "align") return run_align(rest, out, err);
  if (args[0] == "learn") return run_learn(rest, out, err);
  if (args[0] == "--help" || args[0] == "-h") {
    out << kUsage;
    return kExitOk;
  }
  err << "spalign: unknown command '" << args[0] << "'\n" << kUsage;
  return kExitUsage;
}

}  // namespace spalign
