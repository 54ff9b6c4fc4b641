#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "varapps/canonical.hpp"
#include "varapps/transition.hpp"
#include "varapps/yaml_io.hpp"

namespace varapps {

struct TaskError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One sub-goal of a multi-step task. The scope names the canonical section
// the step is allowed to touch; everything else must stay at s_0.
struct TaskStep {
  std::string scope;        // canonical top-level key, e.g. "todos"
  std::vector<ojson> ops;
  friend bool operator==(const TaskStep&, const TaskStep&) = default;
};

struct TaskSpec {
  std::string id;
  std::vector<std::string> goal_prompts;
  std::vector<Route> relevant_apps;
  std::vector<ojson> ops;       // single-goal expected diff
  std::vector<TaskStep> steps;  // multi-step only

  bool multi_step() const { return !steps.empty(); }
};

struct RewardResult {
  double reward = 0;
  bool success = false;
  int steps_completed = 0;
  bool at_least_one_step = false;
  int achieved_at = -1;  // trajectory index of first full success
};

using TaskCatalog = std::map<std::string, TaskSpec>;

// ---- declarative diff ops --------------------------------------------------

namespace taskdetail {

inline size_t todo_index(const EnvState& s, const ojson& op) {
  if (op.contains("index")) return op["index"].get<size_t>();
  std::string text = op.at("text").get<std::string>();
  for (size_t i = 0; i < s.todos.size(); ++i)
    if (s.todos[i].text == text) return i;
  throw TaskError("diff op: no todo named '" + text + "'");
}

inline void apply_op(EnvState& s, const ojson& op) {
  std::string kind = op.at("op").get<std::string>();

  if (kind == "add_todo") {
    s.todos.push_back({op.at("text").get<std::string>(),
                       op.value("done", false)});
  } else if (kind == "remove_todo") {
    size_t i = todo_index(s, op);
    if (i >= s.todos.size()) throw TaskError("diff op: todo index out of range");
    s.todos.erase(s.todos.begin() + static_cast<long>(i));
  } else if (kind == "set_todo_done") {
    size_t i = todo_index(s, op);
    if (i >= s.todos.size()) throw TaskError("diff op: todo index out of range");
    s.todos[i].done = op.value("done", true);
  } else if (kind == "add_event") {
    CalendarEvent e;
    e.title = op.at("title").get<std::string>();
    e.date = op.at("date").get<std::string>();
    e.description = op.value("description", std::string());
    e.url = op.value("url", std::string());
    e.location = op.value("location", std::string());
    if (op.contains("invitees"))
      for (const auto& v : op["invitees"]) e.invitees.push_back(v.get<std::string>());
    if (!valid_iso_date(e.date)) throw TaskError("diff op: bad date '" + e.date + "'");
    s.calendar.push_back(std::move(e));
  } else if (kind == "remove_event") {
    std::string title = op.at("title").get<std::string>();
    std::string date = op.value("date", std::string());
    for (size_t i = 0; i < s.calendar.size(); ++i)
      if (s.calendar[i].title == title && (date.empty() || s.calendar[i].date == date)) {
        s.calendar.erase(s.calendar.begin() + static_cast<long>(i));
        return;
      }
    throw TaskError("diff op: no event '" + title + "'");
  } else if (kind == "duplicate_event") {
    std::string title = op.at("title").get<std::string>();
    for (const auto& e : s.calendar)
      if (e.title == title) {
        CalendarEvent copy = e;
        copy.date = op.at("new_date").get<std::string>();
        s.calendar.push_back(std::move(copy));
        return;
      }
    throw TaskError("diff op: no event '" + title + "'");
  } else if (kind == "send_message") {
    std::string peer = op.at("peer").get<std::string>();
    auto it = s.conversations.find(peer);
    if (it == s.conversations.end()) throw TaskError("diff op: no conversation '" + peer + "'");
    Message m;
    m.direction = MsgDirection::sent;
    m.body = op.at("body").get<std::string>();
    m.seq = it->second.empty() ? 1 : it->second.back().seq + 1;
    it->second.push_back(std::move(m));
  } else if (kind == "forward_last") {
    std::string from = op.at("from").get<std::string>();
    std::string to = op.at("to").get<std::string>();
    auto src = s.conversations.find(from);
    if (src == s.conversations.end() || src->second.empty())
      throw TaskError("diff op: no messages from '" + from + "'");
    auto dst = s.conversations.find(to);
    if (dst == s.conversations.end()) throw TaskError("diff op: no conversation '" + to + "'");
    Message m;
    m.direction = MsgDirection::sent;
    m.body = src->second.back().body;
    m.seq = dst->second.empty() ? 1 : dst->second.back().seq + 1;
    dst->second.push_back(std::move(m));
  } else if (kind == "save_place") {
    std::string name = op.at("name").get<std::string>();
    for (const auto& p : s.places)
      if (p.name == name) throw TaskError("diff op: place '" + name + "' exists");
    s.places.push_back({name, op.value("query", name)});
  } else if (kind == "remove_place") {
    std::string name = op.at("name").get<std::string>();
    for (size_t i = 0; i < s.places.size(); ++i)
      if (s.places[i].name == name) {
        s.places.erase(s.places.begin() + static_cast<long>(i));
        return;
      }
    throw TaskError("diff op: no place '" + name + "'");
  } else if (kind == "create_file") {
    std::string folder = op.value("folder", std::string("/"));
    std::string name = op.at("name").get<std::string>();
    FileNode* parent = find_node(s.files, folder);
    if (!parent || parent->kind != FileKind::folder)
      throw TaskError("diff op: no folder '" + folder + "'");
    for (const auto& c : parent->children)
      if (c.name == name) throw TaskError("diff op: '" + name + "' exists");
    parent->children.push_back(FileNode{FileKind::file, name, {}});
  } else if (kind == "remove_node") {
    std::string path = op.at("path").get<std::string>();
    size_t slash = path.find_last_of('/');
    std::string parent_path = slash == 0 ? "/" : path.substr(0, slash);
    std::string leaf = path.substr(slash + 1);
    FileNode* parent = find_node(s.files, parent_path);
    if (!parent) throw TaskError("diff op: no node '" + path + "'");
    for (size_t i = 0; i < parent->children.size(); ++i)
      if (parent->children[i].name == leaf) {
        parent->children.erase(parent->children.begin() + static_cast<long>(i));
        return;
      }
    throw TaskError("diff op: no node '" + path + "'");
  } else if (kind == "add_cart") {
    CartItem item;
    item.product_id = op.at("product_id").get<std::string>();
    item.quantity = op.value("quantity", 1);
    const Product* prod = nullptr;
    for (const auto& p : s.catalog)
      if (p.id == item.product_id) prod = &p;
    if (!prod) throw TaskError("diff op: no product '" + item.product_id + "'");
    for (const auto& [opt, vals] : prod->options)
      item.chosen_options[opt] = vals.empty() ? "" : vals.front();
    if (op.contains("options"))
      for (const auto& [k, v] : op["options"].items())
        item.chosen_options[k] = v.get<std::string>();
    for (auto& line : s.cart)
      if (line.product_id == item.product_id && line.chosen_options == item.chosen_options) {
        line.quantity += item.quantity;
        return;
      }
    s.cart.push_back(std::move(item));
  } else if (kind == "remove_cart_index") {
    size_t i = op.at("index").get<size_t>();
    auto order = cart_display_order(s);
    if (i >= order.size()) throw TaskError("diff op: cart index out of range");
    s.cart.erase(s.cart.begin() + static_cast<long>(order[i]));
  } else if (kind == "clear_cart") {
    s.cart.clear();
  } else if (kind == "navigate") {
    // handled by evaluate; state content is untouched
  } else {
    throw TaskError("unknown diff op '" + kind + "'");
  }
}

inline std::optional<Route> navigate_target(const std::vector<ojson>& ops) {
  for (const auto& op : ops)
    if (op.at("op").get<std::string>() == "navigate") {
      auto r = route_from_name(op.at("route").get<std::string>());
      if (!r) throw TaskError("navigate op: unknown route");
      return r;
    }
  return std::nullopt;
}

}  // namespace taskdetail

inline EnvState apply_expected_diff(const EnvState& s0, const std::vector<ojson>& ops) {
  EnvState target = s0;
  for (const auto& op : ops) taskdetail::apply_op(target, op);
  return target;
}

// ---- evaluation ------------------------------------------------------------

inline RewardResult evaluate(const EnvState& s0, const EnvState& st, const TaskSpec& task) {
  RewardResult out;

  if (!task.multi_step()) {
    if (auto route = taskdetail::navigate_target(task.ops)) {
      bool content_clean = canonicalize(st, false).yaml == canonicalize(s0, false).yaml;
      out.success = content_clean && st.nav.route == *route;
    } else {
      EnvState target = apply_expected_diff(s0, task.ops);
      out.success = canonicalize(st, false).yaml == canonicalize(target, false).yaml;
    }
    out.reward = out.success ? 1.0 : 0.0;
    out.steps_completed = out.success ? 1 : 0;
    out.at_least_one_step = out.success;
    return out;
  }

  // Multi-step: each step owns one canonical section. A step counts iff its
  // section matches the full target; any change outside all step scopes
  // voids the attempt.
  EnvState target = s0;
  std::set<std::string> scopes;
  std::vector<ojson> section_targets;
  for (const auto& step : task.steps) {
    for (const auto& op : step.ops) taskdetail::apply_op(target, op);
    scopes.insert(step.scope);
  }
  ojson cs0 = canonical_json(s0, false);
  ojson cst = canonical_json(st, false);
  ojson ctg = canonical_json(target, false);

  for (auto& [key, val] : cs0.items()) {
    if (scopes.count(key)) continue;
    if (cst.contains(key) && cst[key] != val) {
      out.reward = 0;
      return out;  // out-of-scope side effect
    }
  }
  for (const auto& step : task.steps)
    if (cst.at(step.scope) == ctg.at(step.scope)) ++out.steps_completed;

  out.reward = static_cast<double>(out.steps_completed) / static_cast<double>(task.steps.size());
  out.success = out.steps_completed == static_cast<int>(task.steps.size());
  out.at_least_one_step = out.steps_completed >= 1;
  return out;
}

// First-hit success over a trajectory; reward is the best value attained.
inline RewardResult episode_outcome(const std::vector<EnvState>& trajectory,
                                    const TaskSpec& task) {
  if (trajectory.empty()) throw TaskError("empty trajectory");
  RewardResult best;
  for (size_t t = 0; t < trajectory.size(); ++t) {
    RewardResult r = evaluate(trajectory.front(), trajectory[t], task);
    if (r.reward > best.reward || t == 0) {
      int at = best.achieved_at;
      best = r;
      best.achieved_at = at;
    }
    if (r.success) {
      best.achieved_at = static_cast<int>(t);
      break;  // first hit ends the episode
    }
  }
  return best;
}

inline const std::string& sample_goal(const TaskSpec& task, uint64_t seed) {
  if (task.goal_prompts.empty()) throw TaskError("task '" + task.id + "' has no prompts");
  return task.goal_prompts[seed % task.goal_prompts.size()];
}

// ---- catalog loading -------------------------------------------------------

inline const std::vector<std::string>& single_task_ids() {
  static const std::vector<std::string> ids = {
      "Add2CartASingleItemTask", "AddEventTask",         "AddFiles2CodeEditorTask",
      "AddItem2ToDoListTask",    "DuplicateEventTask",   "ForwardMessageTask",
      "MarkItemAsDoneTask",      "MessageXTask",         "NavigateToPageTask",
      "RemoveEventTask",         "RemoveFromCodeEditorTask",
      "RemoveItemFromToDoListTask", "RemoveItemsFromCartTask", "RemoveSavedPlace",
      "SavePlace"};
  return ids;
}

inline TaskCatalog load_tasks(const std::string& yaml_text) {
  TaskCatalog catalog;
  ojson root = parse_yaml(yaml_text);
  for (const auto& tj : root.at("tasks")) {
    TaskSpec t;
    t.id = tj.at("id").get<std::string>();
    for (const auto& p : tj.at("goal_prompts")) t.goal_prompts.push_back(p.get<std::string>());
    for (const auto& a : tj.at("relevant_apps")) {
      auto r = route_from_name(a.get<std::string>());
      if (!r) throw TaskError("task '" + t.id + "': unknown app '" + a.get<std::string>() + "'");
      t.relevant_apps.push_back(*r);
    }
    if (tj.contains("expected_diff"))
      for (const auto& op : tj["expected_diff"]) t.ops.push_back(op);
    if (tj.contains("steps"))
      for (const auto& sj : tj["steps"]) {
        TaskStep step;
        step.scope = sj.at("scope").get<std::string>();
        for (const auto& op : sj.at("ops")) step.ops.push_back(op);
        t.steps.push_back(std::move(step));
      }
    if (t.goal_prompts.size() < 2)
      throw TaskError("task '" + t.id + "' needs at least two goal prompts");
    if (t.relevant_apps.empty()) throw TaskError("task '" + t.id + "' lists no relevant apps");
    if (t.ops.empty() && t.steps.empty())
      throw TaskError("task '" + t.id + "' has neither expected_diff nor steps");
    if (catalog.count(t.id)) throw TaskError("duplicate task id '" + t.id + "'");
    catalog[t.id] = std::move(t);
  }
  return catalog;
}

inline const TaskSpec& catalog_task(const TaskCatalog& c, const std::string& id) {
  auto it = c.find(id);
  if (it == c.end()) throw TaskError("unknown task id '" + id + "'");
  return it->second;
}

}  // namespace varapps
