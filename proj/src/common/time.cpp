// Copyright 2026 The Learning Context Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lc/common/time.h"

#include <cctype>
#include <cstdio>

#include "lc/common/error.h"

namespace lc {

namespace {

using namespace std::chrono;

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw Error(ErrorCode::kParseError,
              "invalid RFC 3339 timestamp '" + std::string(text) + "': " + why);
}

int digits(std::string_view text, std::size_t pos, std::size_t n) {
  if (pos + n > text.size()) bad(text, "truncated");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad(text, "expected digit");
    v = v * 10 + (text[i] - '0');
  }
  return v;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad(text, "unexpected separator");
}

}  // namespace

std::string format_rfc3339(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<milliseconds> tod{t - day};
  char buf[40];
  const long long ms = tod.subseconds().count();
  if (ms == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()), ms);
  }
  return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
  const int y = digits(text, 0, 4);
  expect(text, 4, '-');
  const int mo = digits(text, 5, 2);
  expect(text, 7, '-');
  const int d = digits(text, 8, 2);
  if (text.size() < 11 || (text[10] != 'T' && text[10] != 't')) bad(text, "missing 'T'");
  const int hh = digits(text, 11, 2);
  expect(text, 13, ':');
  const int mi = digits(text, 14, 2);
  expect(text, 16, ':');
  const int ss = digits(text, 17, 2);

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad(text, "calendar date out of range");
  if (hh > 23 || mi > 59 || ss > 60) bad(text, "time of day out of range");

  std::size_t pos = 19;
  long long ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (n < 3) ms = ms * 10 + (text[pos] - '0');
      ++n;
      ++pos;
    }
    if (n == 0) bad(text, "empty fraction");
    for (int i = n; i < 3; ++i) ms *= 10;
  }

  long long offset_minutes = 0;
  if (pos >= text.size()) bad(text, "missing zone designator");
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '+' ? 1 : -1;
    const int oh = digits(text, pos + 1, 2);
    expect(text, pos + 3, ':');
    const int om = digits(text, pos + 4, 2);
    offset_minutes = sign * (oh * 60 + om);
    pos += 6;
  } else {
    bad(text, "bad zone designator");
  }
  if (pos != text.size()) bad(text, "trailing characters");

  const auto local = sys_days{ymd} + hours{hh} + minutes{mi} + seconds{ss} + milliseconds{ms};
  return Timestamp{local - minutes{offset_minutes}};
}

double elapsed_days(Timestamp from, Timestamp to) {
  return static_cast<double>((to - from).count()) / 86'400'000.0;
}

Timestamp SystemClock::now() const {
  return floor<milliseconds>(system_clock::now());
}

}  // namespace lc
