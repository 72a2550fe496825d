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

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "lc/model/context.h"

namespace lc::store {

// Append-only, versioned snapshot history on the filesystem:
//   <root>/<learner_id>/<version>.jsonld
// Each file holds the canonical bytes of one version and is written via a
// temporary file plus rename, so readers never see a partial snapshot.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path root);

  // Stores ctx under its own version number and returns it. Saving the same
  // bytes again is a no-op; a version that is not newer than the latest one
  // (with different bytes) is rejected with Error(kStorageFailure).
  std::uint64_t save(const model::LearnerContext& ctx);

  model::LearnerContext load(const std::string& learner_id, std::uint64_t version) const;
  model::LearnerContext load_latest(const std::string& learner_id) const;
  std::vector<std::uint64_t> versions(const std::string& learner_id) const;
  bool has_learner(const std::string& learner_id) const;
  std::vector<std::string> learners() const;

  // Throws Error(kStorageFailure) for ids that are unsafe as path components.
  std::filesystem::path learner_dir(const std::string& learner_id) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
};

bool is_safe_learner_id(std::string_view id);

// Writes `bytes` to `path` through a sibling temporary file and rename.
void write_atomically(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace lc::store
