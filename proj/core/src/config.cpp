#include "aeropipe/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "aeropipe/errors.hpp"

namespace aeropipe {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  // The INI reader drops sections without keys; recover them from the headers
  // so "[device:hall]" alone still declares a device.
  std::vector<std::string> order;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    auto t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
      auto name = trim(std::string_view(t).substr(1, t.size() - 2));
      if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
    }
  }
  for (const auto& [name, child] : tree) {
    if (child.empty() && std::find(order.begin(), order.end(), name) == order.end()) {
      throw ParseError(source + ": key '" + name + "' appears outside any [section]");
    }
  }

  KeyValueConfig cfg;
  cfg.source_ = source;
  for (const auto& name : order) {
    Section section{name, {}};
    if (auto it = tree.find(name); it != tree.not_found()) {
      for (const auto& [key, value] : it->second) {
        section.entries.emplace_back(key, trim(value.data()));
      }
    }
    cfg.sections_.push_back(std::move(section));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void KeyValueConfig::merge(const KeyValueConfig& overlay) {
  for (const auto& section : overlay.sections_) {
    for (const auto& [key, value] : section.entries) set(section.name, key, value);
  }
}

const KeyValueConfig::Section* KeyValueConfig::find_section(std::string_view name) const {
  auto it = std::find_if(sections_.begin(), sections_.end(),
                         [&](const Section& s) { return s.name == name; });
  return it == sections_.end() ? nullptr : &*it;
}

KeyValueConfig::Section& KeyValueConfig::ensure_section(const std::string& name) {
  auto it = std::find_if(sections_.begin(), sections_.end(),
                         [&](const Section& s) { return s.name == name; });
  if (it != sections_.end()) return *it;
  sections_.push_back(Section{name, {}});
  return sections_.back();
}

void KeyValueConfig::set(const std::string& section, const std::string& key, std::string value) {
  auto& sec = ensure_section(section);
  auto it = std::find_if(sec.entries.begin(), sec.entries.end(),
                         [&](const Entry& e) { return e.first == key; });
  if (it != sec.entries.end()) {
    it->second = std::move(value);
  } else {
    sec.entries.emplace_back(key, std::move(value));
  }
}

bool KeyValueConfig::has(std::string_view section, std::string_view key) const {
  return get(section, key).has_value();
}

std::optional<std::string> KeyValueConfig::get(std::string_view section,
                                               std::string_view key) const {
  const auto* sec = find_section(section);
  if (!sec) return std::nullopt;
  for (const auto& [k, v] : sec->entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValueConfig::get_string(std::string_view section, std::string_view key,
                                       std::string_view fallback) const {
  auto v = get(section, key);
  return v ? *v : std::string(fallback);
}

std::string KeyValueConfig::require_string(std::string_view section, std::string_view key) const {
  auto v = get(section, key);
  if (!v) {
    throw ParseError(source_ + ": missing required key [" + std::string(section) + "] " +
                     std::string(key));
  }
  return *v;
}

namespace {

template <typename T>
T convert(const std::string& text, std::string_view section, std::string_view key,
          const std::string& source) {
  T value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(source + ": [" + std::string(section) + "] " + std::string(key) +
                     " = '" + text + "' is not a valid number");
  }
  return value;
}

}  // namespace

double KeyValueConfig::get_double(std::string_view section, std::string_view key,
                                  double fallback) const {
  auto v = get(section, key);
  return v ? convert<double>(*v, section, key, source_) : fallback;
}

std::int64_t KeyValueConfig::get_int(std::string_view section, std::string_view key,
                                     std::int64_t fallback) const {
  auto v = get(section, key);
  return v ? convert<std::int64_t>(*v, section, key, source_) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(std::string_view section, std::string_view key,
                                       std::uint64_t fallback) const {
  auto v = get(section, key);
  return v ? convert<std::uint64_t>(*v, section, key, source_) : fallback;
}

bool KeyValueConfig::get_bool(std::string_view section, std::string_view key,
                              bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ParseError(source_ + ": [" + std::string(section) + "] " + std::string(key) + " = '" +
                   *v + "' is not a boolean");
}

std::vector<std::string> KeyValueConfig::get_list(std::string_view section,
                                                  std::string_view key) const {
  auto v = get(section, key);
  return v ? split_list(*v) : std::vector<std::string>{};
}

std::vector<const KeyValueConfig::Section*> KeyValueConfig::sections_with_prefix(
    std::string_view prefix) const {
  std::vector<const Section*> out;
  for (const auto& s : sections_) {
    if (s.name.compare(0, prefix.size(), prefix) == 0) out.push_back(&s);
  }
  return out;
}

std::string KeyValueConfig::dump() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& s : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << s.name << "]\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << '\n';
  }
  return out.str();
}

}  // namespace aeropipe
