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

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lc/common/error.h"
#include "lc/common/random.h"
#include "lc/model/json.h"
#include "lc/model/validate.h"
#include "lc/prioritize/distribution.h"
#include "lc/prioritize/salience.h"
#include "lc/protocol/transport.h"
#include "lc/sim/trial.h"
#include "lc/store/canonical.h"
#include "lc/store/merge.h"
#include "lc/store/snapshot_store.h"
#include "lc/protocol/service.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lc::Error(lc::ErrorCode::kStorageFailure, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw lc::Error(lc::ErrorCode::kParseError, path + ": " + e.what());
  }
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text << '\n';
    return;
  }
  lc::store::write_atomically(out, text + "\n");
}

lc::protocol::ServingConfig load_config(const std::string& config_path,
                                        const std::string& policy_path) {
  lc::protocol::ServingConfig c;
  if (!config_path.empty()) c = lc::protocol::serving_config_from_json(read_json_file(config_path));
  if (!policy_path.empty()) {
    c.policy = lc::privacy::policy_from_json(read_json_file(policy_path));
    lc::privacy::check_policy(c.policy);
  }
  return c;
}

lc::Timestamp now_or(const std::string& at) {
  return at.empty() ? lc::SystemClock().now() : lc::parse_rfc3339(at);
}

lc::model::LearnerContext load_context(const std::string& store, const std::string& learner,
                                       std::int64_t version) {
  lc::store::SnapshotStore s(store);
  return version < 0 ? s.load_latest(learner)
                     : s.load(learner, static_cast<std::uint64_t>(version));
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

std::vector<lc::model::LearnerContext> load_context_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonld") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<lc::model::LearnerContext> out;
  for (const auto& f : files) out.push_back(lc::store::deserialize(lc::store::read_file(f)));
  return out;
}

void on_signal(int) { lc::protocol::stop_http(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning context server and toolkit"};
  app.require_subcommand(1);

  std::string store = "lc-store";
  std::string learner;
  std::string at;
  std::string config_path;
  std::string policy_path;
  std::string out;
  std::int64_t version = -1;

  auto* cmd_new = app.add_subcommand("new", "Create an empty context and store version 1");
  cmd_new->add_option("--store", store, "Store directory");
  cmd_new->add_option("--learner", learner, "Learner id")->required();
  cmd_new->add_option("--at", at, "Creation time (RFC 3339), default now");

  std::string events_path;
  auto* cmd_ingest = app.add_subcommand("ingest", "Apply JSON Lines evidence and store a new version");
  cmd_ingest->add_option("--store", store, "Store directory");
  cmd_ingest->add_option("--learner", learner, "Learner id")->required();
  cmd_ingest->add_option("--file,--events", events_path, "Evidence file, one event per line")->required();
  cmd_ingest->add_option("--config", config_path, "Server config JSON");
  cmd_ingest->add_option("--now", at, "Ingestion clock (RFC 3339), default now");

  auto* cmd_export = app.add_subcommand("export", "Print the canonical document of a version");
  cmd_export->add_option("--store", store, "Store directory");
  cmd_export->add_option("--learner", learner, "Learner id")->required();
  cmd_export->add_option("--version", version, "Version, default latest");

  auto* cmd_hash = app.add_subcommand("hash", "Print the content digest of a version");
  cmd_hash->add_option("--store", store, "Store directory");
  cmd_hash->add_option("--learner", learner, "Learner id")->required();
  cmd_hash->add_option("--version", version, "Version, default latest");

  auto* cmd_validate = app.add_subcommand("validate", "Run the validation checks on a version");
  cmd_validate->add_option("--store", store, "Store directory");
  cmd_validate->add_option("--learner", learner, "Learner id")->required();
  cmd_validate->add_option("--version", version, "Version, default latest");
  cmd_validate->add_option("--now", at, "Reference time (RFC 3339), default now");

  std::string remote_path;
  auto* cmd_merge = app.add_subcommand("merge", "Merge a remote canonical document into the latest version");
  cmd_merge->add_option("--store", store, "Store directory");
  cmd_merge->add_option("--learner", learner, "Learner id")->required();
  cmd_merge->add_option("--remote", remote_path, "Remote canonical document")->required();

  auto* cmd_audit = app.add_subcommand("audit", "Verify a learner's audit chain");
  cmd_audit->add_option("--store", store, "Store directory");
  cmd_audit->add_option("--learner", learner, "Learner id")->required();

  std::string full_path;
  std::string variants_dir;
  std::string relevance_path;
  double threshold = lc::prioritize::kDefaultMisalignmentThreshold;
  auto* cmd_salience = app.add_subcommand("salience", "Leave-one-out impact and misalignment report");
  cmd_salience->add_option("--full", full_path, "Full-context distribution JSON")->required();
  cmd_salience->add_option("--variants", variants_dir,
                           "Directory of <feature>.json leave-one-out distributions")
      ->required();
  cmd_salience->add_option("--relevance", relevance_path, "JSON map feature -> relevance")->required();
  cmd_salience->add_option("--threshold", threshold, "Invisible-trait threshold");
  cmd_salience->add_option("--out", out, "Report path, default stdout");

  bool stdio = false;
  std::string http_addr;
  auto* cmd_serve = app.add_subcommand("serve", "Run the JSON-RPC server");
  auto* stdio_flag = cmd_serve->add_flag("--stdio", stdio, "Newline-delimited JSON-RPC on stdin/stdout");
  cmd_serve->add_option("--http", http_addr, "HTTP listen address host:port (port 0 picks one)")
      ->excludes(stdio_flag);
  cmd_serve->add_option("--store", store, "Store directory");
  cmd_serve->add_option("--policy", policy_path, "Disclosure policy JSON");
  cmd_serve->add_option("--config", config_path, "Server config JSON");
  cmd_serve->add_option("--now", at, "Pin the server clock (RFC 3339)");

  auto* cmd_sim = app.add_subcommand("sim", "Closed-loop and trial simulations");
  cmd_sim->require_subcommand(1);
  int n = 35;
  int turns = 10;
  std::uint64_t seed = 7;
  auto* cmd_loop = cmd_sim->add_subcommand("closed-loop", "Generate, simulate, recover, score");
  cmd_loop->add_option("--n", n, "Number of random belief models");
  cmd_loop->add_option("--turns", turns, "Dialogue length (even)");
  cmd_loop->add_option("--seed", seed, "Base seed");
  cmd_loop->add_option("--out", out, "Report path, default stdout");

  std::string arms = "aware,blind";
  std::string contexts_dir;
  std::string seeds = "1,2,3,4,5";
  auto* cmd_trial = cmd_sim->add_subcommand("trial", "Warm-start trial over stored contexts");
  cmd_trial->add_option("--arms", arms, "Two comma-separated conditions (aware, blind)");
  cmd_trial->add_option("--contexts", contexts_dir, "Directory of .jsonld contexts")->required();
  cmd_trial->add_option("--turns", turns, "Dialogue length (even)");
  cmd_trial->add_option("--seeds", seeds, "Comma-separated seeds");
  cmd_trial->add_option("--config", config_path, "Server config JSON");
  cmd_trial->add_option("--out", out, "Report path, default stdout");

  int points = 5;
  int replicates = 100;
  double delta = 0.2;
  auto* cmd_mrt = cmd_sim->add_subcommand("mrt", "Micro-randomized injection trial");
  cmd_mrt->add_option("--contexts", contexts_dir, "Directory of .jsonld contexts")->required();
  cmd_mrt->add_option("--points", points, "Decision points");
  cmd_mrt->add_option("--replicates", replicates, "Units per context");
  cmd_mrt->add_option("--delta", delta, "Success gain when aligned");
  cmd_mrt->add_option("--seed", seed, "Base seed");
  cmd_mrt->add_option("--out", out, "Report path, default stdout");

  std::string fixtures_dir;
  auto* cmd_fixtures = cmd_sim->add_subcommand("fixtures", "Write random reference contexts as .jsonld files");
  cmd_fixtures->add_option("--n", n, "Number of contexts");
  cmd_fixtures->add_option("--seed", seed, "Base seed");
  cmd_fixtures->add_option("--at", at, "Context clock (RFC 3339), default now");
  cmd_fixtures->add_option("--out", fixtures_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_new) {
      const auto ctx = lc::model::LearnerContext::create(learner, now_or(at));
      lc::store::SnapshotStore(store).save(ctx);
      std::cout << lc::store::content_hash(ctx).hex << '\n';
    } else if (*cmd_ingest) {
      // Same path as the push_evidence tool, so ingestion is audited identically.
      std::ifstream in(events_path);
      if (!in) throw lc::Error(lc::ErrorCode::kStorageFailure, "cannot open " + events_path);
      std::vector<json> events;
      std::string line;
      for (int n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
          events.push_back(json::parse(line));
        } catch (const json::exception& e) {
          throw lc::Error(lc::ErrorCode::kParseError, "line " + std::to_string(n) + ": " + e.what());
        }
      }
      lc::protocol::LcService service(store, load_config(config_path, ""),
                                      std::make_shared<lc::FixedClock>(now_or(at)));
      std::cout << lc::protocol::to_json(service.push_evidence(learner, events, "lc-cli")).dump() << '\n';
    } else if (*cmd_export) {
      // Exact canonical bytes, no trailing newline: `lc export | sha256sum` equals `lc hash`.
      std::cout << lc::store::canonical_serialize(load_context(store, learner, version)).bytes;
    } else if (*cmd_hash) {
      std::cout << lc::store::content_hash(load_context(store, learner, version)).hex << '\n';
    } else if (*cmd_validate) {
      const auto report = lc::model::validate(load_context(store, learner, version), now_or(at));
      std::cout << lc::model::to_json(report).dump(2) << '\n';
      return report.valid() ? 0 : 1;
    } else if (*cmd_merge) {
      lc::store::SnapshotStore s(store);
      const auto local = s.load_latest(learner);
      const auto remote = lc::store::deserialize(lc::store::read_file(remote_path));
      auto audit = lc::privacy::AuditChain::open(s.learner_dir(learner) / "audit.jsonl");
      const auto result = lc::store::sync_merge(local, remote, &audit, "lc-cli");
      if (!result.local_changes.empty()) s.save(result.context);
      std::cout << json{{"version", result.context.version()},
                        {"changes", lc::store::to_json(result.local_changes)},
                        {"kind_conflicts", result.kind_conflicts},
                        {"context_digest", lc::store::content_hash(result.context).hex}}
                       .dump(2)
                << '\n';
    } else if (*cmd_audit) {
      lc::store::SnapshotStore s(store);
      const auto chain = lc::privacy::AuditChain::open(s.learner_dir(learner) / "audit.jsonl");
      std::cout << json{{"records", chain.size()}, {"ok", true}, {"tail_hash", chain.tail_hash()}}.dump()
                << '\n';
    } else if (*cmd_salience) {
      const auto full = lc::prioritize::distribution_from_json(read_json_file(full_path));
      std::map<std::string, lc::prioritize::Distribution> loo;
      for (const auto& e : fs::directory_iterator(variants_dir)) {
        if (e.path().extension() != ".json") continue;
        loo.emplace(e.path().stem().string(),
                    lc::prioritize::distribution_from_json(read_json_file(e.path().string())));
      }
      const auto relevance = read_json_file(relevance_path).get<std::map<std::string, double>>();
      const auto report = lc::prioritize::rank_misalignment(
          lc::prioritize::loo_impact(full, loo), relevance, threshold);
      write_output(out, lc::prioritize::to_json(report).dump(2));
    } else if (*cmd_serve) {
      std::shared_ptr<lc::Clock> clock;
      if (at.empty()) {
        clock = std::make_shared<lc::SystemClock>();
      } else {
        clock = std::make_shared<lc::FixedClock>(lc::parse_rfc3339(at));
      }
      lc::protocol::LcService service(store, load_config(config_path, policy_path), clock);
      lc::protocol::RpcHandler handler(service);
      if (!http_addr.empty()) {
        const auto colon = http_addr.rfind(':');
        if (colon == std::string::npos) throw lc::Error(lc::ErrorCode::kInvalidArgument, "--http wants host:port");
        const auto host = http_addr.substr(0, colon);
        const int port = std::stoi(http_addr.substr(colon + 1));
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        lc::protocol::serve_http(handler, host, port, [&](int bound) {
          std::cout << "listening on http://" << host << ':' << bound << "/rpc" << std::endl;
        });
      } else {
        lc::protocol::serve_stdio(handler, std::cin, std::cout);
      }
    } else if (*cmd_loop) {
      write_output(out, lc::sim::to_json(lc::sim::run_closed_loop(n, turns, seed)).dump(2));
    } else if (*cmd_trial) {
      lc::sim::TrialConfig config;
      config.sim.serving = load_config(config_path, "");
      std::vector<lc::sim::TrialArm> trial_arms;
      std::stringstream ss(arms);
      std::string label;
      while (std::getline(ss, label, ',')) trial_arms.push_back({label, lc::sim::parse_condition(label)});
      const auto report = lc::sim::warmstart_trial(load_context_dir(contexts_dir), trial_arms, turns,
                                                   parse_seeds(seeds), config);
      write_output(out, lc::sim::to_json(report).dump(2));
    } else if (*cmd_fixtures) {
      fs::create_directories(fixtures_dir);
      for (int i = 0; i < n; ++i) {
        const auto id = "learner-" + std::to_string(i);
        const auto beliefs = lc::sim::random_beliefs(lc::derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        const auto ctx = lc::sim::context_for(id, beliefs, now_or(at));
        lc::store::write_atomically(fs::path(fixtures_dir) / (id + ".jsonld"),
                                    lc::store::canonical_serialize(ctx).bytes);
      }
    } else if (*cmd_mrt) {
      lc::sim::TrialConfig config;
      config.outcome.aligned_delta = delta;
      lc::sim::TrialPlan plan;
      plan.decision_points = points;
      plan.injection_schedule.assign(points, true);
      plan.seed = seed;
      plan.replicates = replicates;
      write_output(out, lc::sim::to_json(lc::sim::micro_randomized_run(
                                             plan, load_context_dir(contexts_dir), config))
                            .dump(2));
    }
  } catch (const lc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
