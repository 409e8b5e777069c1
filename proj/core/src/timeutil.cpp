#include "aeropipe/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "aeropipe/errors.hpp"

namespace aeropipe {

namespace {

using namespace std::chrono;

template <typename Int>
bool read_int(std::string_view text, std::size_t pos, std::size_t len, Int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return res.ec == std::errc{};
}

Date parse_date_prefix(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
      !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
    throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  Date date{year{y}, month{m}, day{d}};
  if (!date.ok()) throw ParseError("invalid calendar date '" + std::string(text) + "'");
  return date;
}

}  // namespace

std::string format_timestamp(Timestamp ts) {
  auto day_point = floor<days>(ts);
  year_month_day ymd{day_point};
  hh_mm_ss<milliseconds> tod{ts - day_point};
  char buf[40];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02lld", int(ymd.year()),
                        unsigned(ymd.month()), unsigned(ymd.day()), int(tod.hours().count()),
                        int(tod.minutes().count()), static_cast<long long>(tod.seconds().count()));
  std::string out(buf, static_cast<std::size_t>(n));
  if (auto ms = tod.subseconds().count(); ms != 0) {
    std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(ms));
    out += buf;
  }
  out += 'Z';
  return out;
}

Timestamp parse_timestamp(std::string_view text) {
  auto fail = [&] {
    return ParseError("invalid timestamp '" + std::string(text) +
                      "', expected YYYY-MM-DDTHH:MM:SSZ");
  };
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ')) throw fail();
  Date date = parse_date_prefix(text.substr(0, 10));
  int hh = 0, mm = 0, ss = 0;
  if (text[13] != ':' || text[16] != ':' || !read_int(text, 11, 2, hh) ||
      !read_int(text, 14, 2, mm) || !read_int(text, 17, 2, ss) || hh > 23 || mm > 59 || ss > 60) {
    throw fail();
  }
  std::size_t pos = 19;
  long long millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) throw fail();
    for (int d = digits; d < 3; ++d) millis *= 10;
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) throw fail();
  return sys_days{date} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
}

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                unsigned(d.day()));
  return buf;
}

Date parse_date(std::string_view text) {
  if (text.size() != 10) {
    throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  return parse_date_prefix(text);
}

Timestamp now_utc() { return floor<milliseconds>(system_clock::now()); }

}  // namespace aeropipe
