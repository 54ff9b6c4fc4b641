#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "varapps/tasks.hpp"
#include "varapps/transition.hpp"

using namespace varapps;

namespace {

EnvState base() {
  static const EnvState s0 = init_state(testutil::default_config());
  return s0;
}

const TaskSpec& task(const std::string& id) {
  static const TaskCatalog cat = testutil::tasks();
  return catalog_task(cat, id);
}

// nudge one random piece of content; used to prove rewards reject side effects
void inject(EnvState& s, std::mt19937_64& rng) {
  switch (rng() % 8) {
    case 0: s.todos.push_back({"sneaky extra todo", false}); break;
    case 1:
      if (!s.todos.empty()) s.todos[rng() % s.todos.size()].done ^= true;
      else s.todos.push_back({"x", false});
      break;
    case 2:
      if (!s.todos.empty()) s.todos[rng() % s.todos.size()].text += "!";
      else s.todos.push_back({"y", false});
      break;
    case 3: {
      CalendarEvent ev;
      ev.title = "Phantom meeting";
      ev.date = "2025-08-01";
      s.calendar.push_back(ev);
      break;
    }
    case 4:
      if (!s.calendar.empty()) s.calendar.back().title += "?";
      break;
    case 5: s.conversations["Bob"].push_back({MsgDirection::sent, "oops"}); break;
    case 6: s.places.push_back({"Atlantis", "lost city"}); break;
    case 7:
      if (!s.cart.empty()) s.cart.back().quantity += 1;
      else s.cart.push_back({"owyn-protein-shakes", {}, 1});
      break;
  }
}

}  // namespace

TEST_CASE("the catalog ships the fifteen single tasks and ten multi-step tasks") {
  TaskCatalog cat = testutil::tasks();
  int multi = 0;
  for (const auto& id : single_task_ids()) {
    const TaskSpec& t = catalog_task(cat, id);
    CHECK(!t.multi_step());
    CHECK(t.goal_prompts.size() >= 2);
    CHECK(!t.relevant_apps.empty());
  }
  for (const auto& [id, t] : cat)
    if (t.multi_step()) ++multi;
  CHECK(multi >= 10);
  CHECK(cat.size() == single_task_ids().size() + multi);
}

TEST_CASE("the untouched initial state earns zero on every task") {
  for (const auto& [id, t] : testutil::tasks()) {
    RewardResult r = evaluate(base(), base(), t);
    CHECK_MESSAGE(r.reward == 0.0, id);
    CHECK(!r.success);
  }
}

TEST_CASE("the exact expected diff earns full reward") {
  for (const auto& [id, t] : testutil::tasks()) {
    EnvState target = base();
    if (t.multi_step()) {
      for (const auto& step : t.steps)
        for (const auto& op : step.ops) taskdetail::apply_op(target, op);
    } else if (auto route = taskdetail::navigate_target(t.ops)) {
      target.nav.route = *route;
    } else {
      target = apply_expected_diff(base(), t.ops);
    }
    RewardResult r = evaluate(base(), target, t);
    CHECK_MESSAGE(r.success, id);
    CHECK(r.reward == 1.0);
  }
}

TEST_CASE("adding the todo with different phrasing still counts") {
  // the reward cares about the resulting state, not how the agent got there
  EnvState s = base();
  s.nav.route = Route::todo;  // route is excluded from comparison
  s.todos.push_back({"Buy milk", false});
  TaskSpec t = task("AddItem2ToDoListTask");
  REQUIRE(t.ops[0].at("text") == "Buy milk");
  CHECK(evaluate(base(), s, t).success);
}

TEST_CASE("a correct diff plus a side effect earns zero") {
  TaskSpec t = task("MarkItemAsDoneTask");
  EnvState target = apply_expected_diff(base(), t.ops);
  REQUIRE(evaluate(base(), target, t).success);
  EnvState dirty = target;
  dirty.places.push_back({"Atlantis", "lost city"});
  CHECK(evaluate(base(), dirty, t).reward == 0.0);
}

TEST_CASE("anti-hacking: random injections always zero the reward") {
  std::mt19937_64 rng(20250701);
  TaskCatalog cat = testutil::tasks();
  std::vector<const TaskSpec*> single;
  for (const auto& id : single_task_ids())
    if (id != "NavigateToPageTask") single.push_back(&catalog_task(cat, id));
  for (int i = 0; i < 300; ++i) {
    const TaskSpec& t = *single[rng() % single.size()];
    EnvState target = apply_expected_diff(base(), t.ops);
    EnvState before = target;
    inject(target, rng);
    if (canonicalize(target, false).yaml == canonicalize(before, false).yaml) continue;
    CHECK(evaluate(base(), target, t).reward == 0.0);
  }
}

TEST_CASE("navigation task wants the route and nothing else") {
  TaskSpec t = task("NavigateToPageTask");
  EnvState s = base();
  s.nav.route = Route::todo;
  CHECK(evaluate(base(), s, t).success);
  s.nav.route = Route::maps;
  CHECK(!evaluate(base(), s, t).success);
  s.nav.route = Route::todo;
  s.todos.push_back({"stray", false});
  CHECK(!evaluate(base(), s, t).success);
}

TEST_CASE("multi-step tasks pay partial rewards per completed scope") {
  TaskSpec t = task("PlanSubmissionTask");
  REQUIRE(t.steps.size() == 2);
  EnvState s = base();
  for (const auto& op : t.steps[0].ops) taskdetail::apply_op(s, op);
  RewardResult half = evaluate(base(), s, t);
  CHECK(half.reward == doctest::Approx(0.5));
  CHECK(half.at_least_one_step);
  CHECK(!half.success);
  for (const auto& op : t.steps[1].ops) taskdetail::apply_op(s, op);
  RewardResult full = evaluate(base(), s, t);
  CHECK(full.reward == doctest::Approx(1.0));
  CHECK(full.success);
}

TEST_CASE("multi-step rewards are monotone along a correct plan") {
  TaskSpec t = task("DeadlineReminderTask");
  REQUIRE(t.steps.size() == 3);
  EnvState s = base();
  double prev = evaluate(base(), s, t).reward;
  for (const auto& step : t.steps) {
    for (const auto& op : step.ops) taskdetail::apply_op(s, op);
    double cur = evaluate(base(), s, t).reward;
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK(prev == doctest::Approx(1.0));
}

TEST_CASE("an out-of-scope change voids a multi-step attempt") {
  TaskSpec t = task("PlanSubmissionTask");  // scopes calendar and todos
  EnvState s = base();
  for (const auto& step : t.steps)
    for (const auto& op : step.ops) taskdetail::apply_op(s, op);
  s.places.push_back({"Atlantis", "lost city"});
  CHECK(evaluate(base(), s, t).reward == 0.0);
}

TEST_CASE("episode outcome uses the first success") {
  TaskSpec t = task("AddItem2ToDoListTask");
  EnvState hit = apply_expected_diff(base(), t.ops);
  EnvState overshoot = hit;
  overshoot.todos.push_back({"extra", false});
  RewardResult r = episode_outcome({base(), hit, overshoot}, t);
  CHECK(r.success);
  CHECK(r.achieved_at == 1);
  CHECK(r.reward == 1.0);

  RewardResult miss = episode_outcome({base(), overshoot}, t);
  CHECK(!miss.success);
  CHECK(miss.achieved_at == -1);
}

TEST_CASE("episode outcome keeps the best partial reward") {
  TaskSpec t = task("PlanSubmissionTask");
  EnvState half = base();
  for (const auto& op : t.steps[0].ops) taskdetail::apply_op(half, op);
  EnvState ruined = half;
  ruined.places.push_back({"Atlantis", "lost city"});
  RewardResult r = episode_outcome({base(), half, ruined}, t);
  CHECK(r.reward == doctest::Approx(0.5));
  CHECK(!r.success);
}

TEST_CASE("goal prompts rotate with the seed") {
  TaskSpec t = task("AddEventTask");
  REQUIRE(t.goal_prompts.size() >= 2);
  CHECK(sample_goal(t, 0) == t.goal_prompts[0]);
  CHECK(sample_goal(t, 1) == t.goal_prompts[1]);
  CHECK(sample_goal(t, t.goal_prompts.size()) == t.goal_prompts[0]);
}

TEST_CASE("task loading rejects malformed catalogs") {
  CHECK_THROWS_AS(
      load_tasks("tasks:\n  - id: X\n    goal_prompts: ['only one']\n    relevant_apps: [todo]\n"
                 "    expected_diff:\n      - op: add_todo\n        text: t\n"),
      TaskError);
  std::string dup =
      "tasks:\n"
      "  - id: X\n    goal_prompts: ['a', 'b']\n    relevant_apps: [todo]\n"
      "    expected_diff:\n      - op: add_todo\n        text: t\n"
      "  - id: X\n    goal_prompts: ['a', 'b']\n    relevant_apps: [todo]\n"
      "    expected_diff:\n      - op: add_todo\n        text: t\n";
  CHECK_THROWS_AS(load_tasks(dup), TaskError);
}
