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

#include <cstdlib>
#include <filesystem>
#include <functional>

#include <doctest.h>

#include "generators.h"
#include "lc/common/digest.h"
#include "lc/common/error.h"
#include "lc/privacy/audit.h"
#include "lc/store/canonical.h"
#include "lc/store/diff.h"
#include "lc/store/merge.h"
#include "lc/store/snapshot_store.h"

using namespace lc;
using namespace lc::store;
using lc::testing::diverge;
using lc::testing::epoch;
using lc::testing::make_feature;
using lc::testing::random_context;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an lc::Error");
  return ErrorCode::kInvalidArgument;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "lc-store-XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

// Merge outputs compared without their version, which depends on the inputs'.
std::string content_without_version(const model::LearnerContext& ctx) {
  auto j = context_to_json(ctx);
  j.erase("version");
  return j.dump();
}

}  // namespace

TEST_CASE("canonical bytes of the empty context") {
  const auto doc = canonical_serialize(model::new_context("sarah-g10", epoch()));
  CHECK(doc.media_type == "application/ld+json");
  CHECK(doc.bytes.find(' ') == std::string::npos);
  CHECK(doc.bytes.find("\"@type\":\"LearnerContext\"") != std::string::npos);
  // Keys appear in sorted order.
  CHECK(doc.bytes.find("\"@context\"") < doc.bytes.find("\"beliefs\""));
  CHECK(doc.bytes.find("\"beliefs\"") < doc.bytes.find("\"version\""));
  const auto h = content_hash(model::new_context("sarah-g10", epoch()));
  CHECK(h.hex == sha256_hex(doc.bytes));
  CHECK(h.hex.size() == 64);
}

TEST_CASE("serialize/deserialize byte identity") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto ctx = random_context(seed);
    const auto bytes = canonical_serialize(ctx).bytes;
    const auto back = deserialize(bytes);
    CHECK(back == ctx);
    CHECK(canonical_serialize(back).bytes == bytes);
  }
}

TEST_CASE("reals round-trip through the shortest representation") {
  auto ctx = model::new_context("l", epoch());
  ctx.set_feature(make_feature("who.x", model::Real{0.1 + 0.2}, epoch()));
  ctx.set_feature(make_feature("who.y", model::Real{1e-300}, epoch()));
  ctx.set_feature(make_feature("who.z", model::Text{"naïve – ü 😀"}, epoch()));
  const auto back = deserialize(canonical_serialize(ctx).bytes);
  CHECK(back == ctx);
}

TEST_CASE("deserialize rejects malformed documents") {
  CHECK(code_of([] { deserialize("{"); }) == ErrorCode::kInvalidContext);
  CHECK(code_of([] { deserialize("{}"); }) == ErrorCode::kInvalidContext);
  auto j = context_to_json(random_context(1));
  j["profile"] = "lc/v0";
  CHECK(code_of([&] { context_from_json(j); }) == ErrorCode::kInvalidContext);
  auto k = context_to_json(model::new_context("l", epoch()));
  k["nodes"].push_back(k["nodes"][0]);
  CHECK(code_of([&] { context_from_json(k); }) == ErrorCode::kInvalidContext);
  auto m = context_to_json(model::new_context("l", epoch()));
  m["nodes"][0]["kind"] = "peer";
  CHECK(code_of([&] { context_from_json(m); }) == ErrorCode::kInvalidContext);
}

TEST_CASE("snapshot store") {
  TempDir dir;
  SnapshotStore store(dir.path);
  auto ctx = model::new_context("l", epoch());
  CHECK(store.save(ctx) == 1);
  CHECK(store.save(ctx) == 1);
  ctx.set_feature(make_feature("who.a", model::Real{1}, epoch()));
  CHECK(store.save(ctx) == 2);
  CHECK(store.versions("l") == std::vector<std::uint64_t>{1, 2});
  CHECK(store.load("l", 1) == model::new_context("l", epoch()));
  CHECK(store.load_latest("l") == ctx);
  CHECK(code_of([&] { store.load("l", 9); }) == ErrorCode::kVersionNotFound);
  CHECK(store.learners() == std::vector<std::string>{"l"});

  auto stale = model::new_context("l", epoch());
  stale.set_feature(make_feature("who.b", model::Real{1}, epoch()));
  CHECK(code_of([&] { store.save(stale); }) == ErrorCode::kStorageFailure);

  CHECK_FALSE(is_safe_learner_id(".."));
  CHECK_FALSE(is_safe_learner_id("a/b"));
  CHECK(is_safe_learner_id("sarah-g10"));
  CHECK(code_of([&] { store.learner_dir("../x"); }) == ErrorCode::kStorageFailure);
  CHECK(code_of([&] { store.load_latest("ghost"); }) == ErrorCode::kVersionNotFound);
}

TEST_CASE("diff and apply") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto a = random_context(seed);
    const auto b = diverge(a, seed + 1);
    const auto cs = diff(a, b);
    CHECK(apply(a, cs) == b);
    CHECK(diff(a, a).empty());
    CHECK(change_set_from_json(to_json(cs)) == cs);
    CHECK(context_from_entries(a.learner_id(), context_entries(a)) == a);
  }
  CHECK(code_of([] { diff(model::new_context("a"), model::new_context("b")); }) == ErrorCode::kLearnerMismatch);
  const auto a = random_context(5);
  const auto cs = diff(a, diverge(a, 6));
  CHECK(code_of([&] { apply(random_context(77), cs); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("merge properties") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto base = random_context(seed);
    const auto a = diverge(base, seed * 2 + 1);
    const auto b = diverge(base, seed * 2 + 2);

    const auto ab = sync_merge(a, b).context;
    const auto ba = sync_merge(b, a).context;
    CHECK(canonical_serialize(ab).bytes == canonical_serialize(ba).bytes);

    CHECK(sync_merge(a, a).context == a);
    CHECK(content_without_version(sync_merge(ab, b).context) == content_without_version(ab));
    CHECK(content_without_version(sync_merge(ab, a).context) == content_without_version(ab));

    // Equal hashes: nothing to do.
    const auto copy = deserialize(canonical_serialize(a).bytes);
    const auto r = sync_merge(a, copy);
    CHECK(r.context == a);
    CHECK(r.local_changes.empty());

    if (!(a == b)) CHECK(ab.version() == std::max(a.version(), b.version()) + 1);
    CHECK(ab.clock() == std::max(a.clock(), b.clock()));
  }
}

TEST_CASE("merge resolves by timestamp then source") {
  auto local = model::new_context("l", epoch());
  auto remote = local;
  local.set_feature(make_feature("who.a", model::Real{1}, epoch(), model::FeatureKind::kState,
                                 model::Sensitivity::kNone, model::ConsentScope::kInstruction, "lms"));
  remote.set_feature(make_feature("who.a", model::Real{2}, epoch() + std::chrono::hours(1)));
  CHECK(std::get<model::Real>(sync_merge(local, remote).context.find_feature("who.a")->value).value == 2);

  auto r2 = model::new_context("l", epoch());
  r2.set_feature(make_feature("who.a", model::Real{3}, epoch(), model::FeatureKind::kState,
                              model::Sensitivity::kNone, model::ConsentScope::kInstruction, "aaa"));
  CHECK(std::get<model::Real>(sync_merge(local, r2).context.find_feature("who.a")->value).value == 3);
  CHECK(std::get<model::Real>(sync_merge(r2, local).context.find_feature("who.a")->value).value == 3);

  auto trait = make_feature("who.a", model::Real{4}, epoch() + std::chrono::hours(2), model::FeatureKind::kTrait);
  trait.decay.lambda = 0.005;
  auto r3 = model::new_context("l", epoch());
  r3.set_feature(trait);
  privacy::AuditChain audit;
  const auto m = sync_merge(local, r3, &audit);
  CHECK(m.kind_conflicts == std::vector<std::string>{"who.a"});
  REQUIRE(audit.size() == 1);
  CHECK(audit.records()[0].action == privacy::AuditAction::kMergeConflict);

  CHECK(code_of([] { sync_merge(model::new_context("a"), model::new_context("b")); }) ==
        ErrorCode::kLearnerMismatch);
}
