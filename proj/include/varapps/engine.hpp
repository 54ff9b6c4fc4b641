#pragma once

#include <string>
#include <vector>

#include "varapps/actions.hpp"
#include "varapps/layout.hpp"
#include "varapps/tasks.hpp"
#include "varapps/transition.hpp"
#include "varapps/variations.hpp"

namespace varapps {

enum class SessionStatus { running, succeeded, exhausted };

inline const char* status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::running: return "running";
    case SessionStatus::succeeded: return "succeeded";
    case SessionStatus::exhausted: return "exhausted";
  }
  return "running";
}

// Everything recorded about one action, valid or not.
struct StepRecord {
  int index = 0;
  std::string raw;
  bool invalid = false;             // failed to parse against the grammar
  std::string invalid_category;     // malformed | unknown_action | bad_arguments
  std::string invalid_detail;
  bool rejected = false;            // parsed but could not be applied
  std::string rejection_reason;
  std::string control;              // resolved control, when any
  std::string route_after;
  double reward = 0;
  bool success = false;
};

// One episode: an initial state, a task, and a budget of actions. Invalid and
// rejected actions consume steps but never change state.
class Session {
 public:
  Session(AppConfigSet config, TaskSpec task, ProfileId profile, Viewport viewport,
          uint64_t seed, int horizon = 30)
      : config_(std::move(config)),
        task_(std::move(task)),
        profile_(profile),
        viewport_(viewport),
        seed_(seed),
        horizon_(horizon),
        s0_(init_state(config_)),
        state_(s0_) {
    trajectory_.push_back(state_);
    obs_ = render(state_, config_, viewport_);
  }

  const AppConfigSet& config() const { return config_; }
  const TaskSpec& task() const { return task_; }
  ProfileId profile() const { return profile_; }
  Viewport viewport() const { return viewport_; }
  uint64_t seed() const { return seed_; }
  int horizon() const { return horizon_; }
  const EnvState& initial_state() const { return s0_; }
  const EnvState& state() const { return state_; }
  const Observation& observation() const { return obs_; }
  SessionStatus status() const { return status_; }
  int step_count() const { return static_cast<int>(records_.size()); }
  const std::vector<StepRecord>& records() const { return records_; }
  const std::vector<EnvState>& trajectory() const { return trajectory_; }
  const std::string& goal() const { return sample_goal(task_, seed_); }

  RewardResult outcome() const { return episode_outcome(trajectory_, task_); }

  StepRecord act(const std::string& raw) {
    StepRecord rec;
    rec.index = static_cast<int>(records_.size());
    rec.raw = raw;

    if (status_ == SessionStatus::running) {
      ParseResult parsed = parse_action(raw, profile_);
      if (const InvalidAction* inv = std::get_if<InvalidAction>(&parsed)) {
        rec.invalid = true;
        rec.invalid_category = invalid_category_name(inv->category);
        rec.invalid_detail = inv->detail;
      } else {
        const Action& action = std::get<Action>(parsed);
        Resolution res = resolve(obs_, state_, action);
        if (res.control) {
          rec.control = control_name(*res.control);
          ApplyResult applied = apply_control(state_, *res.control);
          if (const Rejection* rej = std::get_if<Rejection>(&applied)) {
            rec.rejected = true;
            rec.rejection_reason = rej->reason;
          } else {
            state_ = std::get<EnvState>(std::move(applied));
          }
        } else {
          rec.rejected = true;
          rec.rejection_reason = res.rejection->reason;
          if (!res.rejection->external_url.empty()) leave_app(res.rejection->external_url);
        }
      }

      trajectory_.push_back(state_);
      obs_ = render(state_, config_, viewport_);

      RewardResult r = evaluate(s0_, state_, task_);
      rec.reward = r.reward;
      rec.success = r.success;
      if (r.success)
        status_ = SessionStatus::succeeded;
      else if (static_cast<int>(records_.size()) + 1 >= horizon_)
        status_ = SessionStatus::exhausted;
    }

    rec.route_after = state_.nav.route == Route::external
                          ? "external(" + state_.nav.external_url + ")"
                          : route_name(state_.nav.route);
    records_.push_back(rec);
    return rec;
  }

 private:
  // rejected external navigation still moves the page off the app
  void leave_app(const std::string& url) {
    state_.nav.back_stack.push_back(state_.nav.route);
    state_.nav.forward_stack.clear();
    state_.nav.route = Route::external;
    state_.nav.external_url = url;
    state_.nav.scroll_offset = 0;
    state_.nav.pending_form.clear();
    state_.nav.focused_field.reset();
    state_.logical_clock += 1;
  }

  AppConfigSet config_;
  TaskSpec task_;
  ProfileId profile_;
  Viewport viewport_;
  uint64_t seed_;
  int horizon_;
  EnvState s0_;
  EnvState state_;
  Observation obs_;
  SessionStatus status_ = SessionStatus::running;
  std::vector<StepRecord> records_;
  std::vector<EnvState> trajectory_;
};

// Compose a session's config from a base config and catalog variation ids.
inline AppConfigSet config_for_variations(const AppConfigSet& base,
                                          const VariationCatalog& catalog,
                                          const std::vector<std::string>& variation_ids) {
  std::vector<Variation> vs;
  for (const auto& id : variation_ids) vs.push_back(catalog_get(catalog, id));
  return compose_variations(base, vs);
}

}  // namespace varapps
