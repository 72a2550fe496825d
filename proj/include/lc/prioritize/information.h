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

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lc::prioritize {

// Plug-in estimate of I(X;Y) in bits from the empirical joint table.
// Throws Error(kEmptySamples) when `samples` is empty.
double mutual_information(const std::vector<std::pair<std::string, std::string>>& samples);

// Plug-in Shannon entropy in bits.
double entropy(const std::vector<std::string>& samples);

// Equal-width binning over [min, max] into labels "bin0".."bin{bins-1}".
std::vector<std::string> discretize_equal_width(std::span<const double> values, int bins = 5);

}  // namespace lc::prioritize
