#include "spalign/pattern.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "spalign/error.hpp"

namespace spalign {

KnowledgeStore::KnowledgeStore(std::vector<Pattern> old_patterns, std::vector<Pattern> new_patterns)
    : old_(std::move(old_patterns)), new_(std::move(new_patterns)) {
  std::unordered_set<std::string> seen;
  auto check = [&](const Pattern& p, Provenance expected) {
    if (p.symbols.empty()) throw UsageError("pattern " + p.id + " has no symbols");
    if (p.frequency < 1) throw UsageError("pattern " + p.id + " has frequency < 1");
    if (p.provenance != expected) throw UsageError("pattern " + p.id + " has the wrong provenance");
    if (!seen.insert(p.id).second) throw UsageError("duplicate pattern id " + p.id);
  };
  for (const auto& p : old_) check(p, Provenance::Old);
  for (const auto& p : new_) check(p, Provenance::New);
}

int KnowledgeStore::find_old(std::string_view id) const {
  for (std::size_t i = 0; i < old_.size(); ++i)
    if (old_[i].id == id) return static_cast<int>(i);
  return -1;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

std::vector<Pattern> parse_patterns(std::string_view text, Provenance provenance,
                                    std::string_view id_prefix, std::string_view source) {
  std::vector<Pattern> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_tokens(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }

    auto fail = [&](const std::string& msg) { throw ParseError(std::string(source), line_no, msg); };

    Pattern p;
    p.provenance = provenance;
    bool have_frequency = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::string_view tok = tokens[i];
      if (tok.front() == '@') {
        if (have_frequency) fail("duplicate @ annotation");
        if (tok.size() == 1) fail("bare '@' token");
        std::int64_t n = 0;
        auto digits = tok.substr(1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
          fail("invalid frequency '" + std::string(tok) + "'");
        if (n < 1) fail("frequency must be >= 1");
        have_frequency = true;
        p.frequency = n;
        continue;
      }
      if (have_frequency) fail("@ annotation must be the final token");
      if (tok.front() == '%') {
        if (tok.size() == 1) fail("bare '%' token");
        p.symbols.push_back({std::string(tok.substr(1)), Role::Id});
      } else {
        p.symbols.push_back({std::string(tok), Role::Content});
      }
    }
    if (p.symbols.empty()) fail("empty pattern");
    p.id = std::string(id_prefix) + std::to_string(out.size() + 1);
    out.push_back(std::move(p));
    if (end == text.size()) break;
  }
  return out;
}

KnowledgeStore load_store(std::string_view old_source, std::string_view new_source,
                          std::string_view old_name, std::string_view new_name) {
  return KnowledgeStore(parse_patterns(old_source, Provenance::Old, "O", old_name),
                        parse_patterns(new_source, Provenance::New, "N", new_name));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeStore load_store_files(const std::string& old_path, const std::string& new_path) {
  const std::string old_text = read_text_file(old_path);
  const std::string new_text = read_text_file(new_path);
  return load_store(old_text, new_text, old_path, new_path);
}

std::string serialize_pattern(const Pattern& pattern) {
  std::string out;
  for (const auto& s : pattern.symbols) {
    if (!out.empty()) out += ' ';
    if (s.is_id()) out += '%';
    out += s.name;
  }
  if (pattern.frequency != 1) out += " @" + std::to_string(pattern.frequency);
  return out;
}

std::string serialize_patterns(std::span<const Pattern> patterns) {
  std::string out;
  for (const auto& p : patterns) {
    out += serialize_pattern(p);
    out += '\n';
  }
  return out;
}

std::string pattern_text(std::span<const Symbol> symbols) {
  std::string out;
  for (const auto& s : symbols) {
    if (!out.empty()) out += ' ';
    out += s.name;
  }
  return out;
}

}  // namespace spalign
