#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aeropipe {

/// Sectioned `key = value` configuration (INI dialect). Section and key order
/// is preserved so dumps are stable. Lookups are exact-match.
class KeyValueConfig {
 public:
  using Entry = std::pair<std::string, std::string>;

  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  static KeyValueConfig parse(std::string_view text, const std::string& source = "<memory>");
  static KeyValueConfig load(const std::filesystem::path& path);

  /// Values in `overlay` replace values here; new sections/keys are appended.
  void merge(const KeyValueConfig& overlay);

  void set(const std::string& section, const std::string& key, std::string value);

  bool has(std::string_view section, std::string_view key) const;
  std::optional<std::string> get(std::string_view section, std::string_view key) const;

  std::string get_string(std::string_view section, std::string_view key,
                         std::string_view fallback) const;
  std::string require_string(std::string_view section, std::string_view key) const;
  double get_double(std::string_view section, std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view section, std::string_view key,
                       std::int64_t fallback) const;
  std::uint64_t get_uint(std::string_view section, std::string_view key,
                         std::uint64_t fallback) const;
  bool get_bool(std::string_view section, std::string_view key, bool fallback) const;
  /// Comma-separated list, entries trimmed, empties dropped.
  std::vector<std::string> get_list(std::string_view section, std::string_view key) const;

  const std::vector<Section>& sections() const noexcept { return sections_; }
  /// Sections whose name starts with `prefix` (e.g. "device:").
  std::vector<const Section*> sections_with_prefix(std::string_view prefix) const;

  std::string dump() const;

 private:
  const Section* find_section(std::string_view name) const;
  Section& ensure_section(const std::string& name);

  std::vector<Section> sections_;
  std::string source_ = "<memory>";
};

std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace aeropipe
