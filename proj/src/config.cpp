#include "csibreath/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "csibreath/error.hpp"

namespace csibreath {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

const ConfigDocument::Entry* ConfigDocument::Section::find(std::string_view key) const {
  for (const Entry& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string source) {
  ConfigDocument doc;
  doc.source_ = std::move(source);
  doc.sections_.push_back(Section{"", 0, {}});

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(doc.source_, line_no, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ConfigError(doc.source_, line_no, "invalid section name");
      doc.sections_.push_back(Section{std::string(name), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(doc.source_, line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError(doc.source_, line_no, "invalid key");
    if (value.empty()) throw ConfigError(doc.source_, line_no, "missing value for '" + std::string(key) + "'");
    Section& current = doc.sections_.back();
    if (current.find(key)) {
      throw ConfigError(doc.source_, line_no, "duplicate key '" + std::string(key) + "'");
    }
    current.entries.push_back(Entry{std::string(key), std::string(value), line_no});
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

const ConfigDocument::Section* ConfigDocument::section(std::string_view name) const {
  for (const Section& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const ConfigDocument::Section*> ConfigDocument::all(std::string_view name) const {
  std::vector<const Section*> out;
  for (const Section& s : sections_) {
    if (s.name == name) out.push_back(&s);
  }
  return out;
}

void SectionReader::fail(int line, const std::string& what) const {
  throw ConfigError(doc_.source(), line, "[" + section_.name + "] " + what);
}

int SectionReader::line_of(std::string_view key) const {
  const auto* e = section_.find(key);
  return e ? e->line : section_.line;
}

const ConfigDocument::Entry& SectionReader::require(std::string_view key) const {
  const auto* e = section_.find(key);
  if (!e) fail(section_.line, "missing key '" + std::string(key) + "'");
  return *e;
}

double SectionReader::number(std::string_view key) const {
  const auto& e = require(key);
  double value = 0.0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(e.line, "'" + e.key + "' is not a number: " + e.value);
  return value;
}

double SectionReader::number(std::string_view key, double fallback) const {
  return section_.find(key) ? number(key) : fallback;
}

long long SectionReader::integer(std::string_view key) const {
  const auto& e = require(key);
  long long value = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(e.line, "'" + e.key + "' is not an integer: " + e.value);
  return value;
}

long long SectionReader::integer(std::string_view key, long long fallback) const {
  return section_.find(key) ? integer(key) : fallback;
}

bool SectionReader::boolean(std::string_view key, bool fallback) const {
  const auto* e = section_.find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(e->line, "'" + e->key + "' is not a boolean: " + e->value);
}

std::optional<std::string> SectionReader::text(std::string_view key) const {
  const auto* e = section_.find(key);
  if (!e) return std::nullopt;
  return e->value;
}

void SectionReader::only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& e : section_.entries) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      fail(e.line, "unknown key '" + e.key + "'");
    }
  }
}

}  // namespace csibreath
