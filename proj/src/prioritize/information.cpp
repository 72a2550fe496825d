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

#include "lc/prioritize/information.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "lc/common/error.h"

namespace lc::prioritize {

double mutual_information(const std::vector<std::pair<std::string, std::string>>& samples) {
  if (samples.empty()) throw Error(ErrorCode::kEmptySamples, "mutual information needs samples");
  std::map<std::pair<std::string, std::string>, double> joint;
  std::map<std::string, double> px;
  std::map<std::string, double> py;
  for (const auto& s : samples) {
    ++joint[s];
    ++px[s.first];
    ++py[s.second];
  }
  const double n = static_cast<double>(samples.size());
  double mi = 0;
  for (const auto& [xy, c] : joint) {
    // c/n * log2( (c/n) / (cx/n * cy/n) ) = c/n * log2(c * n / (cx * cy))
    mi += c / n * std::log2(c * n / (px[xy.first] * py[xy.second]));
  }
  return std::max(0.0, mi);
}

double entropy(const std::vector<std::string>& samples) {
  if (samples.empty()) throw Error(ErrorCode::kEmptySamples, "entropy needs samples");
  std::map<std::string, double> counts;
  for (const auto& s : samples) ++counts[s];
  const double n = static_cast<double>(samples.size());
  double h = 0;
  for (const auto& [label, c] : counts) h -= c / n * std::log2(c / n);
  return h;
}

std::vector<std::string> discretize_equal_width(std::span<const double> values, int bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bins must be positive");
  std::vector<std::string> out;
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / bins;
  out.reserve(values.size());
  for (const double v : values) {
    int b = width > 0 ? static_cast<int>((v - lo) / width) : 0;
    b = std::clamp(b, 0, bins - 1);
    out.push_back("bin" + std::to_string(b));
  }
  return out;
}

}  // namespace lc::prioritize
