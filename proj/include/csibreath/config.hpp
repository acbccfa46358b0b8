#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csibreath {

/// Line-oriented `key = value` document with `[section]` headers.
///
///   # comment            ; comment
///   [radio]
///   snapshots = 297      # trailing comments allowed
///
/// Sections may repeat; each occurrence is kept in order. Keys before the
/// first header belong to an unnamed section. Errors carry the line number.
class ConfigDocument {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };

  struct Section {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;

    const Entry* find(std::string_view key) const;
  };

  static ConfigDocument parse(std::string_view text, std::string source = "<memory>");
  static ConfigDocument load(const std::string& path);

  const std::string& source() const { return source_; }
  const std::vector<Section>& sections() const { return sections_; }

  /// First section with the name, if any.
  const Section* section(std::string_view name) const;
  std::vector<const Section*> all(std::string_view name) const;

 private:
  std::string source_;
  std::vector<Section> sections_;
};

/// Typed reads from one section, raising ConfigError with file and line.
class SectionReader {
 public:
  SectionReader(const ConfigDocument& doc, const ConfigDocument::Section& section)
      : doc_(doc), section_(section) {}

  double number(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  long long integer(std::string_view key) const;
  long long integer(std::string_view key, long long fallback) const;
  bool boolean(std::string_view key, bool fallback) const;
  std::optional<std::string> text(std::string_view key) const;

  /// Rejects keys outside `allowed`.
  void only(std::initializer_list<std::string_view> allowed) const;

  [[noreturn]] void fail(int line, const std::string& what) const;
  int line_of(std::string_view key) const;

 private:
  const ConfigDocument::Entry& require(std::string_view key) const;

  const ConfigDocument& doc_;
  const ConfigDocument::Section& section_;
};

}  // namespace csibreath
