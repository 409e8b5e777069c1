#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aeropipe/config.hpp"
#include "aeropipe/model.hpp"

namespace aeropipe::ingest {

struct ChannelConfig {
  std::int64_t id = 1;
  std::string name;
  std::string write_api_key;
  std::vector<std::string> field_names;  ///< at most 8
  std::chrono::milliseconds min_update_interval{1000};

  bool operator==(const ChannelConfig&) const = default;
};

/// Every `[channel:<id>]` section: name, write_api_key, field1..field8,
/// min_update_interval_ms.
std::vector<ChannelConfig> channels_from_config(const KeyValueConfig& cfg);

/// Outcome of an /update call. `entry_id` is 0 when nothing was stored;
/// the HTTP body is always the decimal entry id.
struct UpdateResult {
  int status = 200;
  std::int64_t entry_id = 0;
  std::string message;
};

struct PinValue {
  double value = 0.0;
  Timestamp updated_at{};
};

/// Pin names are `V` followed by one or more digits.
bool valid_pin_name(std::string_view pin);

/// ThingSpeak-style channel store with a Blynk-style latest-value pin map.
///
/// Channels persist as `<data_dir>/channels.json` plus one append-only
/// `channel_<id>.jsonl` per channel. With no data directory everything lives
/// in memory. Updates to one channel are serialized; reads see a consistent
/// prefix of the entry log. All member functions are thread-safe.
class IngestService {
 public:
  explicit IngestService(std::optional<std::filesystem::path> data_dir = std::nullopt);
  ~IngestService();
  IngestService(const IngestService&) = delete;
  IngestService& operator=(const IngestService&) = delete;

  /// Registers or reconfigures a channel. Persisted entries of a channel with
  /// the same id are kept. Throws InvalidArgument on a duplicate write key.
  void add_channel(const ChannelConfig& config);

  std::vector<ChannelConfig> channels() const;
  std::optional<std::int64_t> channel_for_key(std::string_view api_key) const;

  /// Unknown key: 401. Unparseable or negative field: 400. Inside the rate
  /// window: 200 with id 0. Otherwise the entry is appended and its id returned.
  UpdateResult handle_update(std::string_view api_key, std::optional<std::string_view> field1,
                             std::optional<std::string_view> field2, Timestamp received_at);

  /// Header `created_at,entry_id,field1,field2`, rows in entry order,
  /// optionally limited to created_at in [start, end]. Throws NotFound.
  std::string export_csv(std::int64_t channel_id, std::optional<Timestamp> start = std::nullopt,
                         std::optional<Timestamp> end = std::nullopt) const;

  /// The newest `results` entries, oldest first, inside a channel envelope.
  /// Throws NotFound, or InvalidArgument when results == 0.
  std::string read_feed_json(std::int64_t channel_id, std::size_t results) const;

  std::vector<ChannelEntry> entries(std::int64_t channel_id) const;

  /// Throws InvalidArgument on a malformed pin name.
  void write_virtual_pin(std::string_view pin, double value, Timestamp at);
  /// Throws InvalidArgument (malformed) or NotFound (never written).
  PinValue read_virtual_pin(std::string_view pin) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Parses an export_csv document back into entries.
std::vector<ChannelEntry> parse_channel_csv(std::string_view csv);

}  // namespace aeropipe::ingest
