#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "varapps/engine.hpp"

namespace varapps {

// A scripted policy: one raw action per call, driven by the live session.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string next_action(const Session& session) = 0;
};

namespace agentdetail {

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += "'";
  return out;
}

inline const UiNode* find_control(const UiNode& n, const SemanticControl& target) {
  if (n.control && *n.control == target) return &n;
  for (const UiNode& c : n.children)
    if (const UiNode* hit = find_control(c, target)) return hit;
  return nullptr;
}

inline const UiNode* find_field(const UiNode& n, const std::string& field) {
  if (n.role == UiRole::textbox && n.field_id == field) return &n;
  for (const UiNode& c : n.children)
    if (const UiNode* hit = find_field(c, field)) return hit;
  return nullptr;
}

}  // namespace agentdetail

// ---- oracle ----------------------------------------------------------------
//
// The oracle compiles the task's declarative diff into UI gestures: navigate
// to the owning app, fill the form, press the button. Targets are located by
// their semantic binding rather than their label, so the plan survives
// appearance and language variations.

class OracleAgent : public Agent {
 public:
  std::string next_action(const Session& session) override {
    if (!planned_) build_plan(session);
    if (cursor_ >= plan_.size()) return "noop()";  // plan exhausted; should not happen
    const PlanStep& step = plan_[cursor_++];
    const Observation& obs = session.observation();
    switch (step.kind) {
      case PlanStep::go: return "goto(" + agentdetail::quote(step.url) + ")";
      case PlanStep::activate: {
        const UiNode* n = agentdetail::find_control(obs.root, step.control);
        if (!n) return "noop()";
        return "click(" + agentdetail::quote(n->bid) + ")";
      }
      case PlanStep::fill: {
        const UiNode* n = agentdetail::find_field(obs.root, step.field);
        if (!n) return "noop()";
        return "fill(" + agentdetail::quote(n->bid) + ", " + agentdetail::quote(step.value) + ")";
      }
    }
    return "noop()";
  }

 private:
  struct PlanStep {
    enum Kind { go, activate, fill } kind = go;
    std::string url;
    SemanticControl control = NoEffect{};
    std::string field;
    std::string value;

    static PlanStep goto_route(Route r) {
      PlanStep s;
      s.kind = go;
      NavState nav;
      nav.route = r;
      s.url = route_url(nav);
      return s;
    }
    static PlanStep click(SemanticControl c) {
      PlanStep s;
      s.kind = activate;
      s.control = std::move(c);
      return s;
    }
    static PlanStep enter(std::string field, std::string value) {
      PlanStep s;
      s.kind = fill;
      s.field = std::move(field);
      s.value = std::move(value);
      return s;
    }
  };

  void go_once(Route r) {
    if (at_route_ != r) {
      plan_.push_back(PlanStep::goto_route(r));
      at_route_ = r;
    }
  }

  // Translate one diff op into gestures against the simulated state, then
  // advance the simulation so later ops see updated indices.
  void compile_op(EnvState& sim, const ojson& op) {
    std::string kind = op.at("op").get<std::string>();

    if (kind == "add_todo") {
      go_once(Route::todo);
      plan_.push_back(PlanStep::enter("todo-text", op.at("text").get<std::string>()));
      plan_.push_back(PlanStep::click(ActivateButton{"add-todo", ""}));
    } else if (kind == "remove_todo") {
      go_once(Route::todo);
      size_t i = taskdetail::todo_index(sim, op);
      plan_.push_back(PlanStep::click(ActivateButton{"delete-todo", std::to_string(i)}));
    } else if (kind == "set_todo_done") {
      go_once(Route::todo);
      size_t i = taskdetail::todo_index(sim, op);
      bool want = op.value("done", true);
      if (sim.todos.at(i).done != want)
        plan_.push_back(PlanStep::click(ActivateButton{"toggle-todo", std::to_string(i)}));
    } else if (kind == "add_event") {
      go_once(Route::calendar);
      plan_.push_back(PlanStep::enter("event-title", op.at("title").get<std::string>()));
      plan_.push_back(PlanStep::enter("event-date", op.at("date").get<std::string>()));
      if (op.contains("description"))
        plan_.push_back(PlanStep::enter("event-description", op["description"].get<std::string>()));
      if (op.contains("url"))
        plan_.push_back(PlanStep::enter("event-url", op["url"].get<std::string>()));
      if (op.contains("location"))
        plan_.push_back(PlanStep::enter("event-location", op["location"].get<std::string>()));
      plan_.push_back(PlanStep::click(ActivateButton{"add-event", ""}));
    } else if (kind == "remove_event") {
      go_once(Route::calendar);
      std::string title = op.at("title").get<std::string>();
      std::string date = op.value("date", std::string());
      auto order = calendar_display_order(sim);
      for (size_t di = 0; di < order.size(); ++di) {
        const CalendarEvent& e = sim.calendar[order[di]];
        if (e.title == title && (date.empty() || e.date == date)) {
          plan_.push_back(PlanStep::click(ActivateButton{"delete-event", std::to_string(di)}));
          break;
        }
      }
    } else if (kind == "duplicate_event") {
      go_once(Route::calendar);
      std::string title = op.at("title").get<std::string>();
      for (const auto& e : sim.calendar)
        if (e.title == title) {
          plan_.push_back(PlanStep::enter("event-title", e.title));
          plan_.push_back(PlanStep::enter("event-date", op.at("new_date").get<std::string>()));
          plan_.push_back(PlanStep::enter("event-description", e.description));
          plan_.push_back(PlanStep::enter("event-url", e.url));
          plan_.push_back(PlanStep::enter("event-location", e.location));
          plan_.push_back(PlanStep::click(ActivateButton{"add-event", ""}));
          break;
        }
    } else if (kind == "send_message" || kind == "forward_last") {
      go_once(Route::messenger);
      std::string peer =
          kind == "send_message" ? op.at("peer").get<std::string>() : op.at("to").get<std::string>();
      std::string body = kind == "send_message"
                             ? op.at("body").get<std::string>()
                             : sim.conversations.at(op.at("from").get<std::string>()).back().body;
      plan_.push_back(PlanStep::click(SelectOption{"msg-peer", peer}));
      plan_.push_back(PlanStep::enter("msg-body", body));
      plan_.push_back(PlanStep::click(ActivateButton{"send-message", ""}));
    } else if (kind == "save_place") {
      go_once(Route::maps);
      plan_.push_back(PlanStep::enter("place-query", op.value("query", op.at("name").get<std::string>())));
      plan_.push_back(PlanStep::click(ActivateButton{"save-place", ""}));
    } else if (kind == "remove_place") {
      go_once(Route::maps);
      plan_.push_back(PlanStep::click(ActivateButton{"delete-place", op.at("name").get<std::string>()}));
    } else if (kind == "create_file") {
      go_once(Route::codeeditor);
      plan_.push_back(PlanStep::enter("file-name", op.at("name").get<std::string>()));
      plan_.push_back(PlanStep::click(SelectOption{"file-folder", op.value("folder", std::string("/"))}));
      plan_.push_back(PlanStep::click(ActivateButton{"create-file", ""}));
    } else if (kind == "remove_node") {
      go_once(Route::codeeditor);
      plan_.push_back(PlanStep::click(ActivateButton{"delete-node", op.at("path").get<std::string>()}));
    } else if (kind == "add_cart") {
      go_once(Route::shop);
      std::string pid = op.at("product_id").get<std::string>();
      if (op.contains("options"))
        for (const auto& [opt, val] : op["options"].items())
          plan_.push_back(
              PlanStep::click(SelectOption{"opt:" + pid + ":" + opt, val.get<std::string>()}));
      int qty = op.value("quantity", 1);
      for (int k = 0; k < qty; ++k)
        plan_.push_back(PlanStep::click(ActivateButton{"add-to-cart", pid}));
    } else if (kind == "remove_cart_index") {
      go_once(Route::cart);
      plan_.push_back(PlanStep::click(
          ActivateButton{"remove-cart-item", std::to_string(op.at("index").get<size_t>())}));
    } else if (kind == "clear_cart") {
      go_once(Route::cart);
      plan_.push_back(PlanStep::click(ActivateButton{"clear-cart", ""}));
    } else if (kind == "navigate") {
      auto r = route_from_name(op.at("route").get<std::string>());
      if (r) go_once(*r);
    }

    taskdetail::apply_op(sim, op);
  }

  void build_plan(const Session& session) {
    planned_ = true;
    at_route_ = Route::home;
    EnvState sim = session.initial_state();
    const TaskSpec& task = session.task();
    if (task.multi_step()) {
      for (const auto& step : task.steps)
        for (const auto& op : step.ops) compile_op(sim, op);
    } else {
      for (const auto& op : task.ops) compile_op(sim, op);
    }
  }

  bool planned_ = false;
  Route at_route_ = Route::home;
  std::vector<PlanStep> plan_;
  size_t cursor_ = 0;
};

// ---- random ----------------------------------------------------------------

class RandomAgent : public Agent {
 public:
  explicit RandomAgent(uint64_t seed) : rng_(seed) {}

  std::string next_action(const Session& session) override {
    std::vector<const UiNode*> targets;
    collect_interactive(session.observation().root, targets);
    std::uniform_int_distribution<int> pick_kind(0, 4);
    int kind = pick_kind(rng_);
    if (targets.empty() || kind == 4) {
      std::uniform_int_distribution<int> dy(-200, 600);
      return "scroll(0, " + std::to_string(dy(rng_)) + ")";
    }
    std::uniform_int_distribution<size_t> pick(0, targets.size() - 1);
    const UiNode* n = targets[pick(rng_)];
    switch (kind) {
      case 0:
      case 1: return "click(" + agentdetail::quote(n->bid) + ")";
      case 2:
        if (n->role == UiRole::textbox)
          return "fill(" + agentdetail::quote(n->bid) + ", 'lorem ipsum')";
        return "hover(" + agentdetail::quote(n->bid) + ")";
      default: return "dblclick(" + agentdetail::quote(n->bid) + ")";
    }
  }

 private:
  std::mt19937_64 rng_;
};

// ---- looper ----------------------------------------------------------------

// Repeats a short gesture cycle forever; exists to exercise loop detection.
class LooperAgent : public Agent {
 public:
  explicit LooperAgent(int period = 2) {
    for (int i = 0; i < period; ++i)
      cycle_.push_back(i % 2 == 0 ? "scroll(0, 120)" : "scroll(0, -120)");
  }

  std::string next_action(const Session&) override {
    return cycle_[step_++ % cycle_.size()];
  }

 private:
  std::vector<std::string> cycle_;
  size_t step_ = 0;
};

inline std::unique_ptr<Agent> make_agent(const std::string& id, uint64_t seed) {
  if (id == "oracle") return std::make_unique<OracleAgent>();
  if (id == "random") return std::make_unique<RandomAgent>(seed);
  if (id == "looper") return std::make_unique<LooperAgent>();
  throw std::runtime_error("unknown agent id '" + id + "'");
}

}  // namespace varapps
