#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gllab/deviation_lab/mdp.hpp"
#include "gllab/matrix_walk/measure.hpp"

namespace gllab::cli {

/// A config problem, already formatted as "source:line: message".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// One [section] of the config. Accessors mark keys as used so that
/// finish() can reject anything misspelled.
class ConfigSection {
 public:
  ConfigSection(std::string source, std::string name, int line)
      : source_(std::move(source)), name_(std::move(name)), line_(line) {}

  const std::string& name() const noexcept { return name_; }
  int line() const noexcept { return line_; }
  void add(ConfigEntry entry) { entries_.push_back(std::move(entry)); }

  bool has(const std::string& key) const;
  const ConfigEntry& entry(const std::string& key) const;
  std::vector<const ConfigEntry*> all(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> find_double(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::vector<std::size_t> get_sizes(const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& key, std::vector<std::size_t> fallback) const;

  /// Throws ConfigError naming the first key no accessor asked for.
  void finish() const;

  /// "source:line: [section] message" for a key or for the section header.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;
  [[noreturn]] void fail_at(int line, const std::string& message) const;

 private:
  std::string source_;
  std::string name_;
  int line_;
  std::vector<ConfigEntry> entries_;
  mutable std::set<std::string> used_;
};

class ConfigFile {
 public:
  /// INI-style text: optional top-level keys, then [section] blocks of
  /// `key = value` lines; `#` and `;` start comments.
  static ConfigFile parse(const std::string& text, const std::string& source);
  static ConfigFile load(const std::string& path);

  const std::string& text() const noexcept { return text_; }
  const std::string& source() const noexcept { return source_; }
  /// Keys before the first section header.
  const ConfigSection& root() const { return sections_.front(); }
  bool has_section(const std::string& name) const;
  const ConfigSection& section(const std::string& name) const;

 private:
  std::string text_;
  std::string source_;
  std::vector<ConfigSection> sections_;
};

/// Reads [measure]. Matrix entries are row-major; finite supports repeat
/// `matrix` and `weight` once per atom.
MeasureSpec parse_measure(const ConfigSection& section);

/// `bn_alpha = a` or `bn_table = b_1 b_2 ...`.
BnSpec parse_bn(const ConfigSection& section);

}  // namespace gllab::cli
