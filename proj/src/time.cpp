#include "hlem/time.hpp"

#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>

namespace hlem {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  void skip() { ++pos_; }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Reads exactly `width` decimal digits.
  std::optional<int> digits(int width) {
    if (pos_ + static_cast<std::size_t>(width) > text_.size()) return std::nullopt;
    int value = 0;
    for (int i = 0; i < width; ++i) {
      const char c = text_[pos_ + static_cast<std::size_t>(i)];
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      value = value * 10 + (c - '0');
    }
    pos_ += static_cast<std::size_t>(width);
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  Cursor in(trim(text));

  const auto y = in.digits(4);
  if (!y || !in.accept('-')) return std::nullopt;
  const auto mo = in.digits(2);
  if (!mo || !in.accept('-')) return std::nullopt;
  const auto d = in.digits(2);
  if (!d) return std::nullopt;

  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  sys_time<milliseconds> t = sys_days{ymd};
  if (in.done()) return t;

  if (!in.accept('T') && !in.accept(' ')) return std::nullopt;
  const auto hh = in.digits(2);
  if (!hh || !in.accept(':')) return std::nullopt;
  const auto mm = in.digits(2);
  if (!mm) return std::nullopt;
  int ss = 0;
  if (in.accept(':')) {
    const auto s = in.digits(2);
    if (!s) return std::nullopt;
    ss = *s;
  }
  if (*hh > 23 || *mm > 59 || ss > 60) return std::nullopt;
  t += hours{*hh} + minutes{*mm} + seconds{ss};

  if (in.accept('.') || in.accept(',')) {
    int ms = 0;
    int count = 0;
    while (std::isdigit(static_cast<unsigned char>(in.peek()))) {
      if (count < 3) ms = ms * 10 + (in.peek() - '0');
      ++count;
      in.skip();
    }
    if (count == 0) return std::nullopt;
    for (int i = count; i < 3; ++i) ms *= 10;
    t += milliseconds{ms};
  }

  if (in.done()) return t;
  if (in.accept('Z') || in.accept('z')) return in.done() ? std::optional{t} : std::nullopt;

  int sign = 0;
  if (in.accept('+')) sign = 1;
  else if (in.accept('-')) sign = -1;
  else return std::nullopt;
  const auto oh = in.digits(2);
  if (!oh) return std::nullopt;
  in.accept(':');
  int om = 0;
  if (!in.done()) {
    const auto m = in.digits(2);
    if (!m) return std::nullopt;
    om = *m;
  }
  if (!in.done()) return std::nullopt;
  // Local time = UTC + offset.
  t -= sign * (hours{*oh} + minutes{om});
  return t;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<milliseconds> tod{t - day_point};
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()),
                static_cast<int>(tod.subseconds().count()));
  return buf.data();
}

std::optional<Duration> parse_duration(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::int64_t total = 0;
  std::size_t pos = 0;
  bool bare = true;
  while (pos < text.size()) {
    std::int64_t n = 0;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      n = n * 10 + (text[pos] - '0');
      ++pos;
    }
    if (pos == start) return std::nullopt;
    std::int64_t unit = 1000;
    if (pos < text.size()) {
      bare = false;
      const std::string_view rest = text.substr(pos);
      if (rest.starts_with("ms")) {
        unit = 1;
        pos += 2;
      } else {
        switch (text[pos]) {
          case 'w': unit = 7LL * 86'400'000; break;
          case 'd': unit = 86'400'000; break;
          case 'h': unit = 3'600'000; break;
          case 'm': unit = 60'000; break;
          case 's': unit = 1000; break;
          default: return std::nullopt;
        }
        ++pos;
      }
    } else if (!bare) {
      return std::nullopt;  // trailing number without unit, e.g. "1d5"
    }
    total += n * unit;
  }
  return Duration{total};
}

std::string format_duration(Duration d) {
  const std::int64_t ms = d.count();
  struct Unit {
    std::int64_t size;
    const char* suffix;
  };
  constexpr std::array<Unit, 5> units{{{86'400'000, "d"}, {3'600'000, "h"}, {60'000, "m"},
                                       {1000, "s"}, {1, "ms"}}};
  for (const auto& u : units) {
    if (ms != 0 && ms % u.size == 0) return std::to_string(ms / u.size) + u.suffix;
  }
  return std::to_string(ms) + "ms";
}

Timestamp floor_to_day(Timestamp t) {
  return std::chrono::floor<std::chrono::days>(t);
}

}  // namespace hlem
