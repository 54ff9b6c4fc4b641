#pragma once

#include <atomic>
#include <chrono>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "varapps/agents.hpp"
#include "varapps/engine.hpp"
#include "varapps/version.hpp"

namespace varapps {

struct RunSpec {
  std::string agent;
  std::string task;
  std::vector<std::string> variations;
  uint64_t seed = 0;
  std::string viewport = "hd";
  int horizon = 30;
};

struct TrajStep {
  int index = 1;  // 1-based
  std::string action_text;
  std::string parse;  // "ok" or the invalid category
  std::string rejection;
  std::string control;
  std::string route_after;
  std::string digest;
  double reward = 0;
};

struct TrajectoryRecord {
  int format_version = kTrajectoryFormatVersion;
  std::string engine_version = kEngineVersion;
  RunSpec spec;
  std::string goal;
  std::string initial_digest;
  std::vector<TrajStep> steps;
  RewardResult result;
  double duration_ms = 0;
  std::string error_category;  // connect | protocol | internal; empty when healthy
  std::string error_message;

  bool failed() const { return !error_category.empty(); }
};

// Shared immutable inputs for a batch of runs.
struct RunContext {
  AppConfigSet base_config;
  VariationCatalog variations;
  TaskCatalog tasks;
};

// ---- episode execution -----------------------------------------------------

inline TrajectoryRecord run_one(const RunContext& ctx, const RunSpec& spec) {
  TrajectoryRecord rec;
  rec.spec = spec;
  auto start = std::chrono::steady_clock::now();
  try {
    auto vp = viewport_from_name(spec.viewport);
    if (!vp) throw std::runtime_error("unknown viewport '" + spec.viewport + "'");
    AppConfigSet cfg = config_for_variations(ctx.base_config, ctx.variations, spec.variations);
    const TaskSpec& task = catalog_task(ctx.tasks, spec.task);
    Session session(cfg, task, ProfileId::full, *vp, spec.seed, spec.horizon);
    rec.goal = session.goal();
    rec.initial_digest = state_digest(session.initial_state());
    std::unique_ptr<Agent> agent = make_agent(spec.agent, spec.seed);
    while (session.status() == SessionStatus::running) {
      StepRecord sr = session.act(agent->next_action(session));
      TrajStep ts;
      ts.index = sr.index + 1;
      ts.action_text = sr.raw;
      ts.parse = sr.invalid ? sr.invalid_category : "ok";
      ts.rejection = sr.rejection_reason;
      ts.control = sr.control;
      ts.route_after = sr.route_after;
      ts.digest = state_digest(session.state());
      ts.reward = sr.reward;
      rec.steps.push_back(std::move(ts));
    }
    rec.result = session.outcome();
  } catch (const std::exception& e) {
    rec.error_category = "internal";
    rec.error_message = e.what();
  }
  auto end = std::chrono::steady_clock::now();
  rec.duration_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return rec;
}

// Worker pool over independent runs; output order follows spec order.
inline std::vector<TrajectoryRecord> run_matrix(const RunContext& ctx,
                                                const std::vector<RunSpec>& specs,
                                                int parallelism = 1) {
  std::vector<TrajectoryRecord> out(specs.size());
  if (parallelism < 1) parallelism = 1;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= specs.size()) break;
      out[i] = run_one(ctx, specs[i]);
    }
  };
  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < parallelism; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

// ---- ndjson persistence ----------------------------------------------------

inline ojson record_to_json(const TrajectoryRecord& r) {
  ojson j;
  j["format_version"] = r.format_version;
  j["engine_version"] = r.engine_version;
  j["agent"] = r.spec.agent;
  j["task"] = r.spec.task;
  j["variations"] = r.spec.variations;
  j["seed"] = r.spec.seed;
  j["viewport"] = r.spec.viewport;
  j["horizon"] = r.spec.horizon;
  j["goal"] = r.goal;
  j["initial_digest"] = r.initial_digest;
  ojson steps = ojson::array();
  for (const auto& s : r.steps) {
    ojson sj;
    sj["index"] = s.index;
    sj["action"] = s.action_text;
    sj["parse"] = s.parse;
    if (!s.rejection.empty()) sj["rejection"] = s.rejection;
    if (!s.control.empty()) sj["control"] = s.control;
    sj["route_after"] = s.route_after;
    sj["digest"] = s.digest;
    sj["reward"] = s.reward;
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  j["reward"] = r.result.reward;
  j["success"] = r.result.success;
  j["steps_completed"] = r.result.steps_completed;
  j["at_least_one_step"] = r.result.at_least_one_step;
  j["achieved_at"] = r.result.achieved_at;
  j["duration_ms"] = r.duration_ms;
  if (r.failed()) {
    j["error_category"] = r.error_category;
    j["error_message"] = r.error_message;
  }
  return j;
}

inline TrajectoryRecord record_from_json(const ojson& j) {
  TrajectoryRecord r;
  r.format_version = j.at("format_version").get<int>();
  r.engine_version = j.at("engine_version").get<std::string>();
  r.spec.agent = j.at("agent").get<std::string>();
  r.spec.task = j.at("task").get<std::string>();
  for (const auto& v : j.at("variations")) r.spec.variations.push_back(v.get<std::string>());
  r.spec.seed = j.at("seed").get<uint64_t>();
  r.spec.viewport = j.at("viewport").get<std::string>();
  r.spec.horizon = j.at("horizon").get<int>();
  r.goal = j.value("goal", "");
  r.initial_digest = j.value("initial_digest", "");
  for (const auto& sj : j.at("steps")) {
    TrajStep s;
    s.index = sj.at("index").get<int>();
    s.action_text = sj.at("action").get<std::string>();
    s.parse = sj.at("parse").get<std::string>();
    s.rejection = sj.value("rejection", "");
    s.control = sj.value("control", "");
    s.route_after = sj.at("route_after").get<std::string>();
    s.digest = sj.at("digest").get<std::string>();
    s.reward = sj.at("reward").get<double>();
    r.steps.push_back(std::move(s));
  }
  r.result.reward = j.at("reward").get<double>();
  r.result.success = j.at("success").get<bool>();
  r.result.steps_completed = j.at("steps_completed").get<int>();
  r.result.at_least_one_step = j.at("at_least_one_step").get<bool>();
  r.result.achieved_at = j.at("achieved_at").get<int>();
  r.duration_ms = j.at("duration_ms").get<double>();
  r.error_category = j.value("error_category", "");
  r.error_message = j.value("error_message", "");
  return r;
}

inline std::string records_to_ndjson(const std::vector<TrajectoryRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

inline std::vector<TrajectoryRecord> records_from_ndjson(const std::string& text) {
  std::vector<TrajectoryRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim_copy(line).empty()) continue;
    out.push_back(record_from_json(ojson::parse(line)));
  }
  return out;
}

// ---- replay ----------------------------------------------------------------

struct ReplayVerdict {
  bool ok = false;
  int first_divergence = -1;  // 1-based step index, -1 when none
  std::string message;
};

inline ReplayVerdict replay(const RunContext& ctx, const TrajectoryRecord& record) {
  ReplayVerdict v;
  if (record.engine_version != kEngineVersion) {
    v.message = "engine version mismatch: record " + record.engine_version + ", engine " +
                kEngineVersion;
    return v;
  }
  if (record.failed()) {
    v.message = "record is an error record (" + record.error_category + ")";
    return v;
  }
  try {
    auto vp = viewport_from_name(record.spec.viewport);
    AppConfigSet cfg =
        config_for_variations(ctx.base_config, ctx.variations, record.spec.variations);
    const TaskSpec& task = catalog_task(ctx.tasks, record.spec.task);
    Session session(cfg, task, ProfileId::full, *vp, record.spec.seed, record.spec.horizon);
    if (state_digest(session.initial_state()) != record.initial_digest) {
      v.first_divergence = 0;
      v.message = "initial state digest differs";
      return v;
    }
    for (const auto& step : record.steps) {
      session.act(step.action_text);
      std::string got = state_digest(session.state());
      if (got != step.digest) {
        v.first_divergence = step.index;
        v.message = "digest diverges at step " + std::to_string(step.index) + ": recorded " +
                    step.digest + ", replayed " + got;
        return v;
      }
    }
    RewardResult out = session.outcome();
    if (out.reward != record.result.reward || out.success != record.result.success) {
      v.message = "final reward diverges";
      return v;
    }
    v.ok = true;
    v.message = "exact match";
  } catch (const std::exception& e) {
    v.message = std::string("replay error: ") + e.what();
  }
  return v;
}

}  // namespace varapps
