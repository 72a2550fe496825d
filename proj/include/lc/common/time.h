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

#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

namespace lc {

// UTC instant at millisecond resolution. All stored and wire timestamps use it.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// RFC 3339 in UTC with a trailing 'Z'. Milliseconds are emitted only when
// non-zero, so the rendering of a given instant is unique.
std::string format_rfc3339(Timestamp t);

// Accepts "YYYY-MM-DDTHH:MM:SS[.fraction](Z|+HH:MM|-HH:MM)". Fractions beyond
// milliseconds are truncated. Throws Error(kParseError).
Timestamp parse_rfc3339(std::string_view text);

// Signed elapsed time in days (86400 s).
double elapsed_days(Timestamp from, Timestamp to);

inline Timestamp from_days(double days) {
  return Timestamp(std::chrono::milliseconds(static_cast<std::int64_t>(days * 86'400'000.0)));
}

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
};

class FixedClock final : public Clock {
 public:
  explicit FixedClock(Timestamp t) : t_(t) {}
  Timestamp now() const override { return t_; }
  void set(Timestamp t) { t_ = t; }

 private:
  Timestamp t_;
};

}  // namespace lc
