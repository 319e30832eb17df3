#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spalign {

enum class Role : std::uint8_t { Content, Id };
enum class Provenance : std::uint8_t { New, Old };

/// An atomic symbol occurrence. Matching compares names only; the role is a
/// property of this occurrence within its pattern.
struct Symbol {
  std::string name;
  Role role = Role::Content;

  bool is_id() const noexcept { return role == Role::Id; }
  bool matches(const Symbol& other) const noexcept { return name == other.name; }
  bool operator==(const Symbol&) const = default;
};

struct Pattern {
  std::string id;
  std::vector<Symbol> symbols;
  std::int64_t frequency = 1;
  Provenance provenance = Provenance::Old;

  std::size_t size() const noexcept { return symbols.size(); }
  bool operator==(const Pattern&) const = default;
};

/// Old and New patterns in load order. Ids are unique across both lists.
class KnowledgeStore {
 public:
  KnowledgeStore() = default;
  KnowledgeStore(std::vector<Pattern> old_patterns, std::vector<Pattern> new_patterns);

  const std::vector<Pattern>& old_patterns() const noexcept { return old_; }
  const std::vector<Pattern>& new_patterns() const noexcept { return new_; }

  /// Index of an Old pattern by id, or -1.
  int find_old(std::string_view id) const;

 private:
  std::vector<Pattern> old_;
  std::vector<Pattern> new_;
};

/// Parses the line-oriented pattern format. Ids are `<id_prefix><ordinal>`
/// with ordinals starting at 1. Throws ParseError naming `source` and line.
std::vector<Pattern> parse_patterns(std::string_view text, Provenance provenance,
                                    std::string_view id_prefix, std::string_view source);

KnowledgeStore load_store(std::string_view old_source, std::string_view new_source,
                          std::string_view old_name = "old", std::string_view new_name = "new");

/// Reads both files from disk; parse errors name the file path.
KnowledgeStore load_store_files(const std::string& old_path, const std::string& new_path);

std::string read_text_file(const std::string& path);

/// One line per pattern: `%` marks ID-symbols, ` @N` is written when N != 1.
std::string serialize_pattern(const Pattern& pattern);
std::string serialize_patterns(std::span<const Pattern> patterns);

/// Symbols joined by single spaces, without role markers or frequency.
std::string pattern_text(std::span<const Symbol> symbols);

}  // namespace spalign
