#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spalign/cli.hpp"
#include "spalign/json_io.hpp"
#include "spalign/probability.hpp"
#include "support.hpp"

using namespace spalign;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& rel) { return std::string(SPALIGN_DATA_DIR) + "/" + rel; }

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  auto dir = fs::temp_directory_path() / "spalign_unit_io";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("json: fields reconstruct rows, columns, scores and code") {
  auto fx = diagnosis_fixture();
  auto st = fx.store();
  BuildParams p;
  p.top_k = 2;
  auto res = build_alignments(st, build_cost_model(st), p);
  REQUIRE(!res.empty());
  auto rep = alignment_probabilities(res);
  auto j = nlohmann::json::parse(alignments_json(res, rep, st, true).dump());
  REQUIRE(j["alignments"].size() == res.size());
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& ja = j["alignments"][i];
    const auto& al = res[i];
    CHECK(ja["rank"] == i + 1);
    CHECK(ja["cd_bits"].get<double>() == al.score().cd);
    CHECK(ja["bn_bits"].get<double>() == al.score().bn);
    CHECK(ja["be_bits"].get<double>() == al.score().be);
    std::vector<std::string> code;
    for (const auto& s : encoding_of(al)) code.push_back(s.name);
    CHECK(ja["code"].get<std::vector<std::string>>() == code);
    REQUIRE(ja["rows"].size() == al.row_count());
    for (std::size_t r = 0; r < al.row_count(); ++r) {
      const auto& jr = ja["rows"][r];
      const auto& row = al.rows()[r];
      CHECK(jr["pattern_id"] == row.pattern_id);
      REQUIRE(jr["symbols"].size() == row.syms().size());
      for (std::size_t k = 0; k < row.syms().size(); ++k) {
        CHECK(jr["symbols"][k]["name"] == row.syms()[k].name);
        CHECK(jr["symbols"][k]["column"] == row.columns[k]);
        CHECK(jr["symbols"][k]["role"] == (row.syms()[k].is_id() && !row.is_new() ? "id" : "content"));
      }
    }
  }
  double sum = 0;
  for (const auto& ja : j["alignments"]) sum += ja["probability"].get<double>();
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK(j["pattern_probabilities"].size() == st.old_patterns().size());
  CHECK(j.contains("inferences"));
}

TEST_CASE("cli: align text and json agree") {
  auto text = cli({"align", "--old", data("diagnosis/old.sp"), "--new", data("diagnosis/new.sp"), "--top", "2", "--probs"});
  REQUIRE(text.code == 0);
  auto json = cli({"align", "--old", data("diagnosis/old.sp"), "--new", data("diagnosis/new.sp"), "--top", "2",
                   "--probs", "--format", "json"});
  REQUIRE(json.code == 0);
  auto j = nlohmann::json::parse(json.out);
  for (const auto& ja : j["alignments"]) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "CD = %.4f bits", ja["cd_bits"].get<double>());
    CHECK(text.out.find(buf) != std::string::npos);
    std::snprintf(buf, sizeof buf, "probability: %.6f", ja["probability"].get<double>());
    CHECK(text.out.find(buf) != std::string::npos);
  }
  CHECK(text.out.find("Pattern probabilities") != std::string::npos);
  CHECK(text.out.find("flu_treatment") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"align", "--help"}).code == kExitOk);
  CHECK(cli({"align", "--new", data("fruit_flies/new.sp")}).code == kExitUsage);
  CHECK(cli({"learn"}).code == kExitUsage);
  CHECK(cli({"align", "--old", data("fruit_flies/old.sp"), "--new", data("fruit_flies/new.sp"), "--beam", "0"}).code ==
        kExitUsage);
  CHECK(cli({"align", "--old", data("fruit_flies/old.sp"), "--new", data("fruit_flies/new.sp"), "--format", "xml"})
            .code == kExitUsage);

  auto empty = write("empty.sp", "# nothing here\n");
  auto x = write("x.sp", "x\n");
  auto r = cli({"align", "--old", empty, "--new", x});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("no Old knowledge") != std::string::npos);

  auto bad = write("bad.sp", "a b\nc @0\n");
  r = cli({"align", "--old", bad, "--new", x});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("bad.sp:2") != std::string::npos);

  r = cli({"align", "--old", (scratch_dir() / "missing.sp").string(), "--new", x});
  CHECK(r.code == kExitInput);

  auto other = write("other.sp", "y z\n");
  r = cli({"align", "--old", other, "--new", x});
  CHECK(r.code == kExitEmpty);
}

TEST_CASE("cli: learned grammar reloads and parses the corpus") {
  auto corpus = write("corpus.sp", "the old dog runs home\nthe old cat runs home\nthe old dog runs home\n");
  auto grammar = (scratch_dir() / "grammar.sp").string();
  auto r = cli({"learn", "--corpus", corpus, "--out", grammar});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# naive:") != std::string::npos);
  for (const char* sentence : {"the old dog runs home", "the old cat runs home"}) {
    auto one = write("sentence.sp", std::string(sentence) + "\n");
    auto a = cli({"align", "--old", grammar, "--new", one, "--format", "json"});
    REQUIRE(a.code == 0);
    CHECK(nlohmann::json::parse(a.out)["alignments"][0]["cd_bits"].get<double>() > 0);
  }
  // Without --out the grammar goes to standard output, after comment lines.
  auto s = cli({"learn", "--corpus", corpus});
  REQUIRE(s.code == 0);
  CHECK_NOTHROW(parse_patterns(s.out, Provenance::Old, "O", "stdout"));

  auto single = write("single.sp", "the dog runs\n");
  auto one = cli({"learn", "--corpus", single, "--format", "json"});
  REQUIRE(one.code == 0);
  auto j = nlohmann::json::parse(one.out);
  CHECK(j["candidates"][0]["patterns"].size() == 1);
  CHECK(j["candidates"][0]["total_bits"] == j["naive"]["total_bits"]);
}
