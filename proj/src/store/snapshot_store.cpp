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

#include "lc/store/snapshot_store.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lc/common/error.h"
#include "lc/store/canonical.h"

namespace lc::store {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kExtension = ".jsonld";

fs::path version_path(const fs::path& dir, std::uint64_t version) {
  return dir / (std::to_string(version) + std::string(kExtension));
}

std::vector<std::uint64_t> scan_versions(const fs::path& dir) {
  std::vector<std::uint64_t> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.size() <= kExtension.size() || !name.ends_with(kExtension)) continue;
    const auto stem = std::string_view(name).substr(0, name.size() - kExtension.size());
    std::uint64_t v = 0;
    const auto [ptr, err] = std::from_chars(stem.data(), stem.data() + stem.size(), v);
    if (err == std::errc() && ptr == stem.data() + stem.size()) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool is_safe_learner_id(std::string_view id) {
  if (id.empty() || id == "." || id == ".." || id.size() > 200) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

void write_atomically(const fs::path& path, std::string_view bytes) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kStorageFailure, "cannot create " + path.parent_path().string());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kStorageFailure, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kStorageFailure, "cannot rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kStorageFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::kStorageFailure, "cannot create store root " + root_.string());
}

fs::path SnapshotStore::learner_dir(const std::string& learner_id) const {
  if (!is_safe_learner_id(learner_id)) {
    throw Error(ErrorCode::kStorageFailure, "unsafe learner id '" + learner_id + "'");
  }
  return root_ / learner_id;
}

std::uint64_t SnapshotStore::save(const model::LearnerContext& ctx) {
  const auto dir = learner_dir(ctx.learner_id());
  const auto doc = canonical_serialize(ctx);
  std::lock_guard lock(mu_);
  const auto path = version_path(dir, ctx.version());
  std::error_code ec;
  if (fs::exists(path, ec)) {
    if (read_file(path) == doc.bytes) return ctx.version();
    throw Error(ErrorCode::kStorageFailure,
                "version " + std::to_string(ctx.version()) + " already stored with other content");
  }
  const auto existing = scan_versions(dir);
  if (!existing.empty() && existing.back() >= ctx.version()) {
    throw Error(ErrorCode::kStorageFailure, "version " + std::to_string(ctx.version()) +
                                                " is not newer than " +
                                                std::to_string(existing.back()));
  }
  write_atomically(path, doc.bytes);
  return ctx.version();
}

model::LearnerContext SnapshotStore::load(const std::string& learner_id,
                                          std::uint64_t version) const {
  const auto path = version_path(learner_dir(learner_id), version);
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(ErrorCode::kVersionNotFound,
                learner_id + " has no version " + std::to_string(version));
  }
  auto ctx = deserialize(read_file(path));
  if (ctx.learner_id() != learner_id || ctx.version() != version) {
    throw Error(ErrorCode::kStorageFailure, "snapshot " + path.string() + " is misfiled");
  }
  return ctx;
}

model::LearnerContext SnapshotStore::load_latest(const std::string& learner_id) const {
  const auto v = versions(learner_id);
  if (v.empty()) throw Error(ErrorCode::kVersionNotFound, learner_id + " has no stored versions");
  return load(learner_id, v.back());
}

std::vector<std::uint64_t> SnapshotStore::versions(const std::string& learner_id) const {
  return scan_versions(learner_dir(learner_id));
}

bool SnapshotStore::has_learner(const std::string& learner_id) const {
  return is_safe_learner_id(learner_id) && !scan_versions(root_ / learner_id).empty();
}

std::vector<std::string> SnapshotStore::learners() const {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && has_learner(name)) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lc::store
