#include "aeropipe/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "json.hpp"

#include "aeropipe/errors.hpp"
#include "aeropipe/fileutil.hpp"

namespace aeropipe::ingest {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::vector<ChannelConfig> channels_from_config(const KeyValueConfig& cfg) {
  std::vector<ChannelConfig> out;
  for (const auto* section : cfg.sections_with_prefix("channel:")) {
    const auto& name = section->name;
    ChannelConfig ch;
    auto id_text = name.substr(std::string_view("channel:").size());
    double id = 0;
    if (!parse_double(id_text, id) || id < 1 || id != std::floor(id)) {
      throw ParseError("[" + name + "]: channel id must be a positive integer");
    }
    ch.id = static_cast<std::int64_t>(id);
    ch.name = cfg.get_string(name, "name", "Channel " + id_text);
    ch.write_api_key = cfg.require_string(name, "write_api_key");
    for (int f = 1; f <= 8; ++f) {
      auto label = cfg.get(name, "field" + std::to_string(f));
      if (!label) break;
      ch.field_names.push_back(*label);
    }
    ch.min_update_interval =
        std::chrono::milliseconds(cfg.get_int(name, "min_update_interval_ms", 1000));
    out.push_back(std::move(ch));
  }
  return out;
}

bool valid_pin_name(std::string_view pin) {
  if (pin.size() < 2 || pin[0] != 'V') return false;
  return std::all_of(pin.begin() + 1, pin.end(), [](char c) { return c >= '0' && c <= '9'; });
}

namespace {

struct Channel {
  ChannelConfig config;
  mutable std::shared_mutex mutex;
  std::vector<ChannelEntry> entries;
  std::ofstream log;  // open when persistent
};

json entry_to_json(const ChannelEntry& e) {
  json j;
  j["entry_id"] = e.entry_id;
  j["created_at"] = format_timestamp(e.created_at);
  j["field1"] = e.field1 ? json(*e.field1) : json(nullptr);
  j["field2"] = e.field2 ? json(*e.field2) : json(nullptr);
  return j;
}

ChannelEntry entry_from_json(const json& j) {
  ChannelEntry e;
  e.entry_id = j.at("entry_id").get<std::int64_t>();
  e.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  if (!j.at("field1").is_null()) e.field1 = j["field1"].get<double>();
  if (!j.at("field2").is_null()) e.field2 = j["field2"].get<double>();
  return e;
}

json config_to_json(const ChannelConfig& c) {
  return json{{"id", c.id},
              {"name", c.name},
              {"write_api_key", c.write_api_key},
              {"field_names", c.field_names},
              {"min_update_interval_ms", c.min_update_interval.count()}};
}

ChannelConfig config_from_json(const json& j) {
  ChannelConfig c;
  c.id = j.at("id").get<std::int64_t>();
  c.name = j.at("name").get<std::string>();
  c.write_api_key = j.at("write_api_key").get<std::string>();
  c.field_names = j.at("field_names").get<std::vector<std::string>>();
  c.min_update_interval = std::chrono::milliseconds(j.at("min_update_interval_ms").get<long long>());
  return c;
}

/// Reads a JSON-lines log. A torn final line (crash mid-append) is dropped
/// and the file truncated back to the last complete record.
std::vector<ChannelEntry> load_log(const fs::path& path) {
  std::vector<ChannelEntry> out;
  if (!fs::exists(path)) return out;
  std::string text = read_file(path);
  std::size_t pos = 0, good_end = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // torn tail
    std::string_view line(text.data() + pos, nl - pos);
    if (!trim(line).empty()) {
      ChannelEntry e;
      try {
        e = entry_from_json(json::parse(line));
      } catch (const std::exception& ex) {
        throw IoError(path.string() + ": corrupt record at byte " + std::to_string(pos) + ": " +
                      ex.what());
      }
      if (e.entry_id != static_cast<std::int64_t>(out.size()) + 1) {
        throw IoError(path.string() + ": entry ids are not dense at id " +
                      std::to_string(e.entry_id));
      }
      out.push_back(e);
    }
    pos = nl + 1;
    good_end = pos;
  }
  if (good_end != text.size()) fs::resize_file(path, good_end);
  return out;
}

std::optional<double> parse_field(std::optional<std::string_view> text, const char* name,
                                  std::string& error) {
  if (!text || trim(*text).empty()) return std::nullopt;
  double v = 0;
  auto t = trim(*text);
  if (!parse_double(t, v) || !std::isfinite(v)) {
    error = std::string(name) + " '" + t + "' is not a number";
    return std::nullopt;
  }
  if (v < 0) {
    error = std::string(name) + " must be >= 0";
    return std::nullopt;
  }
  return v;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

struct IngestService::Impl {
  std::optional<fs::path> data_dir;
  mutable std::shared_mutex registry_mutex;
  std::map<std::int64_t, std::unique_ptr<Channel>> channels;
  std::map<std::string, std::int64_t, std::less<>> by_key;

  mutable std::shared_mutex pin_mutex;
  std::map<std::string, PinValue, std::less<>> pins;

  fs::path manifest_path() const { return *data_dir / "channels.json"; }
  fs::path log_path(std::int64_t id) const {
    return *data_dir / ("channel_" + std::to_string(id) + ".jsonl");
  }

  void save_manifest() const {
    json arr = json::array();
    for (const auto& [id, ch] : channels) arr.push_back(config_to_json(ch->config));
    write_file_atomic(manifest_path(), arr.dump(2) + "\n");
  }

  void open_log(Channel& ch) {
    ch.log.open(log_path(ch.config.id), std::ios::binary | std::ios::app);
    if (!ch.log) throw IoError("cannot open " + log_path(ch.config.id).string());
  }

  Channel& install(const ChannelConfig& config) {
    auto ch = std::make_unique<Channel>();
    ch->config = config;
    if (data_dir) {
      ch->entries = load_log(log_path(config.id));
      open_log(*ch);
    }
    auto& ref = *ch;
    channels[config.id] = std::move(ch);
    by_key[config.write_api_key] = config.id;
    return ref;
  }

  const Channel& find(std::int64_t id) const {
    std::shared_lock lock(registry_mutex);
    auto it = channels.find(id);
    if (it == channels.end()) throw NotFound("channel " + std::to_string(id) + " not found");
    return *it->second;
  }
};

IngestService::IngestService(std::optional<fs::path> data_dir) : impl_(std::make_unique<Impl>()) {
  impl_->data_dir = std::move(data_dir);
  if (!impl_->data_dir) return;
  fs::create_directories(*impl_->data_dir);
  if (fs::exists(impl_->manifest_path())) {
    json manifest;
    try {
      manifest = json::parse(read_file(impl_->manifest_path()));
    } catch (const json::exception& e) {
      throw IoError(impl_->manifest_path().string() + ": " + e.what());
    }
    for (const auto& j : manifest) impl_->install(config_from_json(j));
  }
}

IngestService::~IngestService() = default;

void IngestService::add_channel(const ChannelConfig& config) {
  if (config.id < 1) throw InvalidArgument("channel id must be positive");
  if (config.write_api_key.empty()) throw InvalidArgument("channel needs a write API key");
  if (config.field_names.size() > 8) throw InvalidArgument("a channel has at most 8 fields");
  if (config.min_update_interval.count() < 0) {
    throw InvalidArgument("min_update_interval must be >= 0");
  }
  std::unique_lock lock(impl_->registry_mutex);
  if (auto k = impl_->by_key.find(config.write_api_key);
      k != impl_->by_key.end() && k->second != config.id) {
    throw InvalidArgument("write API key already used by channel " + std::to_string(k->second));
  }
  auto it = impl_->channels.find(config.id);
  if (it != impl_->channels.end()) {
    std::unique_lock ch_lock(it->second->mutex);
    impl_->by_key.erase(it->second->config.write_api_key);
    it->second->config = config;
    impl_->by_key[config.write_api_key] = config.id;
  } else {
    impl_->install(config);
  }
  if (impl_->data_dir) impl_->save_manifest();
}

std::vector<ChannelConfig> IngestService::channels() const {
  std::shared_lock lock(impl_->registry_mutex);
  std::vector<ChannelConfig> out;
  for (const auto& [id, ch] : impl_->channels) {
    std::shared_lock ch_lock(ch->mutex);
    out.push_back(ch->config);
  }
  return out;
}

std::optional<std::int64_t> IngestService::channel_for_key(std::string_view api_key) const {
  std::shared_lock lock(impl_->registry_mutex);
  auto it = impl_->by_key.find(api_key);
  if (it == impl_->by_key.end()) return std::nullopt;
  return it->second;
}

UpdateResult IngestService::handle_update(std::string_view api_key,
                                          std::optional<std::string_view> field1,
                                          std::optional<std::string_view> field2,
                                          Timestamp received_at) {
  Channel* channel = nullptr;
  {
    std::shared_lock lock(impl_->registry_mutex);
    auto it = impl_->by_key.find(api_key);
    if (it == impl_->by_key.end()) return {401, 0, "unknown api_key"};
    channel = impl_->channels.at(it->second).get();
  }

  std::string error;
  auto f1 = parse_field(field1, "field1", error);
  if (!error.empty()) return {400, 0, error};
  auto f2 = parse_field(field2, "field2", error);
  if (!error.empty()) return {400, 0, error};

  std::unique_lock lock(channel->mutex);
  if (!channel->entries.empty()) {
    // Absolute gap: devices on independent clocks may arrive slightly out of order.
    auto gap = received_at - channel->entries.back().created_at;
    if (gap < gap.zero()) gap = -gap;
    if (gap < channel->config.min_update_interval) return {200, 0, "rate limited"};
  }
  ChannelEntry entry{static_cast<std::int64_t>(channel->entries.size()) + 1, received_at, f1, f2};
  if (channel->log.is_open()) {
    channel->log << entry_to_json(entry).dump() << '\n';
    channel->log.flush();
    if (!channel->log) return {500, 0, "persistence failure"};
  }
  channel->entries.push_back(entry);
  return {200, entry.entry_id, "ok"};
}

std::string IngestService::export_csv(std::int64_t channel_id, std::optional<Timestamp> start,
                                      std::optional<Timestamp> end) const {
  const Channel& ch = impl_->find(channel_id);
  std::shared_lock lock(ch.mutex);
  std::string out = "created_at,entry_id,field1,field2\n";
  for (const auto& e : ch.entries) {
    if (start && e.created_at < *start) continue;
    if (end && e.created_at > *end) continue;
    out += format_timestamp(e.created_at);
    out += ',' + std::to_string(e.entry_id) + ',' + opt_text(e.field1) + ',' +
           opt_text(e.field2) + '\n';
  }
  return out;
}

std::string IngestService::read_feed_json(std::int64_t channel_id, std::size_t results) const {
  if (results == 0) throw InvalidArgument("results must be >= 1");
  const Channel& ch = impl_->find(channel_id);
  std::shared_lock lock(ch.mutex);

  ordered_json channel;
  channel["id"] = ch.config.id;
  channel["name"] = ch.config.name;
  for (std::size_t f = 0; f < ch.config.field_names.size(); ++f) {
    channel["field" + std::to_string(f + 1)] = ch.config.field_names[f];
  }
  if (ch.entries.empty()) {
    channel["last_entry_id"] = nullptr;
  } else {
    channel["updated_at"] = format_timestamp(ch.entries.back().created_at);
    channel["last_entry_id"] = ch.entries.back().entry_id;
  }

  ordered_json feeds = ordered_json::array();
  const std::size_t n = ch.entries.size();
  for (std::size_t i = n - std::min(n, results); i < n; ++i) {
    const auto& e = ch.entries[i];
    ordered_json row;
    row["created_at"] = format_timestamp(e.created_at);
    row["entry_id"] = e.entry_id;
    row["field1"] = e.field1 ? ordered_json(format_double(*e.field1)) : ordered_json(nullptr);
    row["field2"] = e.field2 ? ordered_json(format_double(*e.field2)) : ordered_json(nullptr);
    feeds.push_back(std::move(row));
  }
  ordered_json doc;
  doc["channel"] = std::move(channel);
  doc["feeds"] = std::move(feeds);
  return doc.dump();
}

std::vector<ChannelEntry> IngestService::entries(std::int64_t channel_id) const {
  const Channel& ch = impl_->find(channel_id);
  std::shared_lock lock(ch.mutex);
  return ch.entries;
}

void IngestService::write_virtual_pin(std::string_view pin, double value, Timestamp at) {
  if (!valid_pin_name(pin)) throw InvalidArgument("malformed pin name '" + std::string(pin) + "'");
  std::unique_lock lock(impl_->pin_mutex);
  impl_->pins.insert_or_assign(std::string(pin), PinValue{value, at});
}

PinValue IngestService::read_virtual_pin(std::string_view pin) const {
  if (!valid_pin_name(pin)) throw InvalidArgument("malformed pin name '" + std::string(pin) + "'");
  std::shared_lock lock(impl_->pin_mutex);
  auto it = impl_->pins.find(pin);
  if (it == impl_->pins.end()) throw NotFound("pin " + std::string(pin) + " was never written");
  return it->second;
}

std::vector<ChannelEntry> parse_channel_csv(std::string_view csv) {
  std::vector<ChannelEntry> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != "created_at,entry_id,field1,field2") {
    throw ParseError("channel CSV must start with 'created_at,entry_id,field1,field2'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 4) {
      throw ParseError("channel CSV line " + std::to_string(line_no) + ": expected 4 fields");
    }
    ChannelEntry e;
    e.created_at = parse_timestamp(trim(cells[0]));
    double id = 0;
    if (!parse_double(trim(cells[1]), id)) {
      throw ParseError("channel CSV line " + std::to_string(line_no) + ": bad entry_id");
    }
    e.entry_id = static_cast<std::int64_t>(id);
    for (int f = 0; f < 2; ++f) {
      auto text = trim(cells[2 + f]);
      if (text.empty()) continue;
      double v = 0;
      if (!parse_double(text, v)) {
        throw ParseError("channel CSV line " + std::to_string(line_no) + ": bad field" +
                         std::to_string(f + 1));
      }
      (f == 0 ? e.field1 : e.field2) = v;
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace aeropipe::ingest
