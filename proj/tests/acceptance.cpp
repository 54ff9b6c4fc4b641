// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <thread>
#include <unistd.h>

#include "helpers.hpp"
#include "varapps/analytics.hpp"
#include "varapps/server.hpp"

using namespace varapps;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

void criterion(int index, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(index, name, ok, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

long resident_bytes() {
  std::ifstream statm("/proc/self/statm");
  long pages = 0, resident = 0;
  statm >> pages >> resident;
  return resident * sysconf(_SC_PAGESIZE);
}

const std::vector<Route> kRoutes = {Route::home,  Route::calendar,   Route::todo, Route::messenger,
                                    Route::maps,  Route::codeeditor, Route::shop, Route::cart};

std::multiset<std::string> role_label_set(const AppConfigSet& cfg) {
  std::multiset<std::string> out;
  EnvState s = init_state(cfg);
  std::function<void(const UiNode&)> walk = [&](const UiNode& n) {
    out.insert(std::string(role_name(n.role)) + "|" + n.label);
    for (const UiNode& c : n.children) walk(c);
  };
  for (Route r : kRoutes) {
    s.nav.route = r;
    walk(render(s, cfg, *viewport_from_name("hd")).root);
  }
  return out;
}

void mutate(EnvState& s, std::mt19937_64& rng) {
  switch (rng() % 9) {
    case 0: s.todos.push_back({"injected todo", false}); break;
    case 1:
      if (!s.todos.empty()) s.todos[rng() % s.todos.size()].done ^= true;
      break;
    case 2:
      if (!s.todos.empty()) s.todos[rng() % s.todos.size()].text += "!";
      break;
    case 3: {
      CalendarEvent ev;
      ev.title = "Injected event";
      ev.date = "2025-08-02";
      s.calendar.push_back(ev);
      break;
    }
    case 4:
      if (!s.calendar.empty()) s.calendar[rng() % s.calendar.size()].description += ".";
      break;
    case 5: s.conversations["Bob"].push_back({MsgDirection::sent, "injected"}); break;
    case 6: s.places.push_back({"Injected place", "query"}); break;
    case 7: s.files.children.push_back({FileKind::file, "injected.txt", {}}); break;
    case 8:
      if (!s.cart.empty())
        s.cart[rng() % s.cart.size()].quantity += 1;
      else
        s.cart.push_back({"owyn-protein-shakes", {}, 1});
      break;
  }
}

int brute_force_loops(const std::vector<std::string>& raw) {
  std::vector<std::string> a;
  for (const auto& s : raw) a.push_back(trim_copy(s));
  const int n = static_cast<int>(a.size());
  int runs = 0;
  int i = 0;
  while (i < n) {
    int advance = 0;
    for (int unit = 1; advance == 0 && i + 2 * unit <= n; ++unit) {
      int k = 1;
      while (i + (k + 1) * unit <= n) {
        bool same = true;
        for (int j = 0; j < unit; ++j)
          if (a[i + j] != a[i + k * unit + j]) same = false;
        if (!same) break;
        ++k;
      }
      if (k >= 2) advance = k * unit;
    }
    if (advance > 0) {
      ++runs;
      i += advance;
    } else {
      ++i;
    }
  }
  return runs;
}

std::string fingerprint(const std::vector<TrajectoryRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.initial_digest;
    for (const auto& s : r.steps) out += "," + s.digest;
    out += ";";
  }
  return out;
}

}  // namespace

int main() {
  const RunContext ctx = testutil::context();

  criterion(1, "structural fidelity (apps, tasks, prompts, variations)", [&] {
    if (app_names().size() != 6) return std::make_pair(false, std::string("app count"));
    if (single_task_ids().size() != 15) return std::make_pair(false, std::string("task id count"));
    for (const auto& id : single_task_ids()) {
      const TaskSpec& t = catalog_task(ctx.tasks, id);
      if (t.multi_step()) return std::make_pair(false, "task " + id + " is multi-step");
      if (t.goal_prompts.size() < 2) return std::make_pair(false, "task " + id + " prompts");
    }
    for (const auto& vid : testutil::shipped_variations())
      if (!ctx.variations.count(vid)) return std::make_pair(false, "missing variation " + vid);
    for (const char* vid : {"font_inter", "font_roboto", "font_open_sans"})
      if (!ctx.variations.count(vid))
        return std::make_pair(false, std::string("missing catalog font ") + vid);
    return std::make_pair(true, std::string("6 apps, 15 tasks, ") +
                                    std::to_string(ctx.variations.size()) + " variations");
  });

  criterion(2, "oracle solvability matrix (360 runs, one core, <10MB/session)", [&] {
    std::vector<RunSpec> specs;
    for (const auto& id : single_task_ids())
      for (const auto& vid : testutil::shipped_variations())
        for (uint64_t seed : {0ull, 1ull, 2ull}) {
          RunSpec s;
          s.agent = "oracle";
          s.task = id;
          s.variations = {vid};
          s.seed = seed;
          specs.push_back(std::move(s));
        }
    auto start = std::chrono::steady_clock::now();
    auto records = run_matrix(ctx, specs, 1);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int solved = 0;
    for (const auto& r : records)
      if (!r.failed() && r.result.success && r.result.reward == 1.0) ++solved;
    if (solved != 360)
      return std::make_pair(false, std::to_string(solved) + "/360 solved");
    if (secs > 300)
      return std::make_pair(false, "wall time " + std::to_string(secs) + "s exceeds 5 minutes");

    long before = resident_bytes();
    std::vector<std::unique_ptr<Session>> sessions;
    for (int i = 0; i < 8; ++i)
      sessions.push_back(std::make_unique<Session>(
          ctx.base_config, catalog_task(ctx.tasks, "AddEventTask"), ProfileId::full,
          *viewport_from_name("fhd"), 0, 30));
    long per_session = (resident_bytes() - before) / 8;
    if (per_session >= 10 * 1024 * 1024)
      return std::make_pair(false, "session memory " + std::to_string(per_session) + " bytes");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "360/360 reward 1.0 in %.1fs, ~%ldKB/session", secs,
                  per_session / 1024);
    return std::make_pair(true, std::string(buf));
  });

  criterion(3, "reward anti-hacking (>=1000 randomized injections)", [&] {
    std::mt19937_64 rng(0xACCE97);
    EnvState s0 = init_state(ctx.base_config);
    std::vector<const TaskSpec*> tasks;
    for (const auto& [id, t] : ctx.tasks)
      if (id != "NavigateToPageTask") tasks.push_back(&t);
    int tried = 0;
    while (tried < 1000) {
      const TaskSpec& t = *tasks[rng() % tasks.size()];
      EnvState target = s0;
      if (t.multi_step()) {
        for (const auto& step : t.steps)
          for (const auto& op : step.ops) taskdetail::apply_op(target, op);
      } else {
        target = apply_expected_diff(s0, t.ops);
      }
      if (!evaluate(s0, target, t).success)
        return std::make_pair(false, "clean target not rewarded for " + t.id);
      EnvState before = target;
      mutate(target, rng);
      if (canonicalize(target, false).yaml == canonicalize(before, false).yaml) continue;
      ++tried;
      RewardResult r = evaluate(s0, target, t);
      if (t.multi_step() ? r.success : r.reward != 0.0)
        return std::make_pair(false, "injection rewarded on " + t.id);
    }
    return std::make_pair(true, std::string("1000/1000 injections scored 0"));
  });

  criterion(4, "metric exactness (MAD, pass@1, std, d=1 identity)", [&] {
    std::vector<RewardSample> quad = {{"a", "T", "v1", 0, 1.0},
                                      {"a", "T", "v1", 1, 0.0},
                                      {"a", "T", "v2", 0, 1.0},
                                      {"a", "T", "v2", 1, 0.0}};
    ReliabilityReport rep = reliability(quad);
    if (rep.rows[0].overall_mad != 0.5 || rep.rows[0].cells[0].mad != 0.5)
      return std::make_pair(false, std::string("[1,0,1,0] MAD != 0.5"));

    std::vector<RewardSample> nine;
    for (int i = 0; i < 9; ++i) nine.push_back({"a", "T", "v", (uint64_t)i, i < 5 ? 1.0 : 0.0});
    const CellStats& cell = reliability(nine).rows[0].cells[0];
    if (std::fabs(cell.pass1 - 0.5556) > 0.0001)
      return std::make_pair(false, "pass@1 " + std::to_string(cell.pass1));
    if (!cell.stddev || std::fabs(*cell.stddev - 0.527) > 0.001)
      return std::make_pair(false, std::string("sample std off"));

    std::mt19937_64 rng(11);
    std::vector<RewardSample> solo;
    for (int i = 0; i < 16; ++i) solo.push_back({"a", "T", "only", (uint64_t)i, (rng() % 5) / 4.0});
    const ReliabilityRow& row = reliability(solo).rows[0];
    if (!row.within_std || !row.overall_std ||
        std::fabs(*row.within_std - *row.overall_std) > 1e-12 ||
        std::fabs(row.within_mad - row.overall_mad) > 1e-12)
      return std::make_pair(false, std::string("d=1 identity violated"));
    return std::make_pair(true, std::string("0.5556 / 0.527 reproduced, identity to 1e-12"));
  });

  criterion(5, "loop detector equals the brute-force oracle", [&] {
    for (int reps : {7, 20, 2}) {
      std::vector<std::string> seq(
          (size_t)reps, reps == 2 ? "keyboard_press(key='ctrl a')"
                                  : (reps == 7 ? "click(47)" : "click(17)"));
      if (count_loops(seq) != 1)
        return std::make_pair(false, "verbatim loop string x" + std::to_string(reps));
    }
    std::mt19937_64 rng(5150);
    const std::vector<std::string> alphabet = {"w", "x", "y", "z"};
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<std::string> seq;
      size_t len = rng() % 31;
      for (size_t i = 0; i < len; ++i) seq.push_back(alphabet[rng() % alphabet.size()]);
      if (count_loops(seq) != brute_force_loops(seq))
        return std::make_pair(false, "divergence at trial " + std::to_string(trial));
    }
    return std::make_pair(true, std::string("1000 random sequences + 3 verbatim strings agree"));
  });

  criterion(6, "parser corpus (invalid taxonomy + action name arity)", [&] {
    const std::vector<std::pair<std::string, InvalidCategory>> corpus = {
        {"noop", InvalidCategory::malformed},
        {"check_ax_tree()", InvalidCategory::unknown_action},
        {"mouse_click(x=612 y)", InvalidCategory::malformed},
        {"click(bid)\n```", InvalidCategory::malformed},
        {"click(bid)\n<\\action>", InvalidCategory::malformed},
        {"click(bid)\n<\\action>\n```python\npyautogui.click(x=0.523, y=0.466)\n```",
         InvalidCategory::malformed},
        {"click(bid)\n```\n```python\npyautogui.click(x=0.000, y=0.000)\n```",
         InvalidCategory::malformed},
        {"click(bid)\n```python\npyautogui.click(x=0.000, y=0.000)\n```",
         InvalidCategory::malformed},
        {"remove_item(water plants)", InvalidCategory::unknown_action},
        {"duplicate(17)", InvalidCategory::unknown_action},
        {"click([67] link 'main-page'", InvalidCategory::malformed},
        {"enter(searchInput, Bockelwitz, Germany)", InvalidCategory::unknown_action},
        {"no-op", InvalidCategory::malformed},
        {"go_to('https://www.example.com/maps')", InvalidCategory::unknown_action},
        {"type(OWYN - 100% Vegan Plant-Based Protein Shakes | Cold Brew Coffee, 12 Fl Oz )",
         InvalidCategory::unknown_action},
        {"finished()", InvalidCategory::unknown_action},
        {"wait()", InvalidCategory::unknown_action},
        {"scroll(direction='down', point='(966,546)')", InvalidCategory::bad_arguments},
        {"finished", InvalidCategory::malformed},
        {"None", InvalidCategory::malformed},
        {"click(bid)", InvalidCategory::bad_arguments},
    };
    for (const auto& [raw, want] : corpus) {
      ParseResult r = parse_action(raw, ProfileId::full);
      const InvalidAction* inv = std::get_if<InvalidAction>(&r);
      if (!inv) return std::make_pair(false, "parsed as valid: " + raw);
      if (inv->category != want)
        return std::make_pair(false, "category mismatch for: " + raw);
    }

    // verbatim Appendix A.3 listings, duplicates preserved (25 and 18 tokens)
    const std::vector<std::string> full_tokens = {
        "click", "fill", "dblclick", "clear", "select_option", "drag_and_drop", "hover",
        "go_back", "go_forward", "goto", "scroll", "mouse_click", "mouse_dblclick",
        "mouse_move", "mouse_down", "mouse_up", "mouse_click", "mouse_dblclick",
        "mouse_drag_and_drop", "mouse_upload_file", "keyboard_down", "keyboard_up",
        "keyboard_press", "keyboard_type", "keyboard_insert_text"};
    const std::vector<std::string> visual_tokens = {
        "go_back", "go_forward", "goto", "mouse_click", "mouse_dblclick", "scroll",
        "mouse_move", "mouse_down", "mouse_up", "mouse_click", "mouse_dblclick",
        "mouse_drag_and_drop", "mouse_upload_file", "keyboard_down", "keyboard_up",
        "keyboard_press", "keyboard_type", "keyboard_insert_text"};
    if (full_tokens.size() != 25 || visual_tokens.size() != 18)
      return std::make_pair(false, std::string("token list sizes off"));
    const std::map<std::string, std::string> minimal = {
        {"click", "click('7')"},
        {"fill", "fill('7', 'text')"},
        {"dblclick", "dblclick('7')"},
        {"clear", "clear('7')"},
        {"select_option", "select_option('7', 'red')"},
        {"drag_and_drop", "drag_and_drop('7', '9')"},
        {"hover", "hover('7')"},
        {"go_back", "go_back()"},
        {"go_forward", "go_forward()"},
        {"goto", "goto('/todo')"},
        {"scroll", "scroll(0, 120)"},
        {"mouse_click", "mouse_click(10, 20)"},
        {"mouse_dblclick", "mouse_dblclick(10, 20)"},
        {"mouse_move", "mouse_move(10, 20)"},
        {"mouse_down", "mouse_down(10, 20)"},
        {"mouse_up", "mouse_up(10, 20)"},
        {"mouse_drag_and_drop", "mouse_drag_and_drop(1, 2, 3, 4)"},
        {"mouse_upload_file", "mouse_upload_file(1, 2, '/tmp/f.txt')"},
        {"keyboard_down", "keyboard_down('Shift')"},
        {"keyboard_up", "keyboard_up('Shift')"},
        {"keyboard_press", "keyboard_press('Enter')"},
        {"keyboard_type", "keyboard_type('hello')"},
        {"keyboard_insert_text", "keyboard_insert_text('hello')"},
    };
    auto parses = [&](const std::string& name, ProfileId profile) {
      ParseResult r = parse_action(minimal.at(name), profile);
      return std::holds_alternative<Action>(r);
    };
    for (const auto& name : full_tokens)
      if (!parses(name, ProfileId::full))
        return std::make_pair(false, "full-profile token fails: " + name);
    for (const auto& name : visual_tokens)
      if (!parses(name, ProfileId::visual_only))
        return std::make_pair(false, "visual-profile token fails: " + name);
    if (action_signatures(ProfileId::full).size() != 23 ||
        action_signatures(ProfileId::visual_only).size() != 16)
      return std::make_pair(false, std::string("unique signature counts off"));
    return std::make_pair(true,
                          std::string("21 invalid strings classified; 25 full + 18 visual "
                                      "tokens (23/16 unique) parse"));
  });

  criterion(7, "determinism, isolation, and byte-exact replay", [&] {
    std::vector<RunSpec> specs;
    for (const auto& agent : {"oracle", "random"})
      for (const auto& task : {"AddEventTask", "ForwardMessageTask", "RemoveItemFromToDoListTask",
                               "Add2CartASingleItemTask"})
        for (const auto& vid : {"default", "dark_theme", "german", "long_descriptions"})
          for (uint64_t seed : {3ull, 4ull}) {
            RunSpec s;
            s.agent = agent;
            s.task = task;
            s.variations = {vid};
            s.seed = seed;
            s.horizon = 12;
            specs.push_back(std::move(s));
          }
    if (specs.size() != 64) return std::make_pair(false, std::string("matrix size"));
    auto serial = run_matrix(ctx, specs, 1);
    auto parallel = run_matrix(ctx, specs, 8);
    if (fingerprint(serial) != fingerprint(parallel))
      return std::make_pair(false, std::string("digest chains differ across parallelism"));
    auto roundtrip = records_from_ndjson(records_to_ndjson(serial));
    for (const auto& rec : roundtrip) {
      ReplayVerdict v = replay(ctx, rec);
      if (!v.ok) return std::make_pair(false, "replay failed: " + v.message);
    }
    return std::make_pair(true, std::string("64 runs identical at p=1/p=8; all replays exact"));
  });

  criterion(8, "variation algebra and the >=1000 variant space", [&] {
    for (const auto& [id, v] : ctx.variations) {
      AppConfigSet once = compose_variations(ctx.base_config, {v});
      AppConfigSet twice = compose_variations(ctx.base_config, {v, v});
      if (once.digest() != twice.digest())
        return std::make_pair(false, "idempotence fails for " + id);
    }
    for (const auto& [ida, va] : ctx.variations)
      for (const auto& [idb, vb] : ctx.variations) {
        if (ida >= idb) continue;
        std::set<std::string> paths;
        for (const auto& p : va.patches) paths.insert(p.path);
        bool disjoint = true;
        for (const auto& p : vb.patches)
          if (paths.count(p.path)) disjoint = false;
        if (!disjoint) continue;
        if (compose_variations(ctx.base_config, {va, vb}).digest() !=
            compose_variations(ctx.base_config, {vb, va}).digest())
          return std::make_pair(false, "commutativity fails for " + ida + " + " + idb);
      }

    std::multiset<std::string> base_ui = role_label_set(ctx.base_config);
    for (const auto& [id, v] : ctx.variations) {
      if (v.kind != VariationKind::appearance) continue;
      if (role_label_set(apply_variation(ctx.base_config, v)) != base_ui)
        return std::make_pair(false, "appearance variation changes the UI set: " + id);
    }

    ojson axroot = parse_yaml(testutil::slurp(testutil::data_dir() / "axes.yaml"));
    std::vector<VariantAxis> axes;
    for (const auto& aj : axroot.at("axes")) {
      VariantAxis ax;
      ax.name = aj.at("name").get<std::string>();
      for (const auto& c : aj.at("choices")) ax.choices.push_back(c.get<std::string>());
      axes.push_back(std::move(ax));
    }
    EnumerateOptions opts;
    opts.per_app = true;
    opts.limit = 1000;
    std::set<std::string> digests;
    double max_ms = 0;
    auto last = std::chrono::steady_clock::now();
    uint64_t n = enumerate_variants(
        ctx.base_config, ctx.variations, axes, opts,
        [&](const AppConfigSet& cfg, const std::vector<std::string>&) {
          auto now = std::chrono::steady_clock::now();
          max_ms = std::max(max_ms, std::chrono::duration<double, std::milli>(now - last).count());
          if (!validate_config_tree(cfg.tree).empty()) throw std::runtime_error("invalid variant");
          digests.insert(cfg.digest());
          last = std::chrono::steady_clock::now();
        });
    if (n < 1000 || digests.size() < 1000)
      return std::make_pair(false, std::to_string(digests.size()) + " distinct variants");
    if (max_ms >= 10.0)
      return std::make_pair(false, "slowest variant " + std::to_string(max_ms) + "ms");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "1000 distinct variants, slowest %.2fms", max_ms);
    return std::make_pair(true, std::string(buf));
  });

  criterion(9, "hit-test/bid agreement across apps, variations, viewports", [&] {
    int checked = 0;
    for (const auto& vid : testutil::shipped_variations()) {
      AppConfigSet cfg = config_for_variations(ctx.base_config, ctx.variations, {vid});
      EnvState s = init_state(cfg);
      for (const char* vpn : {"fhd", "hd", "hvga"}) {
        Viewport vp = *viewport_from_name(vpn);
        for (Route r : kRoutes) {
          s.nav.route = r;
          Observation o = render(s, cfg, vp);
          std::vector<const UiNode*> inter;
          collect_interactive(o.root, inter);
          for (const UiNode* n : inter) {
            const UiNode* hit = hit_test(o.root, n->x + n->w / 2, n->y + n->h / 2);
            if (!hit || hit->bid != n->bid || !hit->control || !n->control ||
                !(*hit->control == *n->control))
              return std::make_pair(false, vid + "/" + vpn + "/" + route_name(r) + " bid " +
                                               n->bid);
            ++checked;
          }
        }
      }
    }
    return std::make_pair(true, std::to_string(checked) + " element centers agree");
  });

  criterion(10, "protocol golden transcript", [&] {
    EnvServer server(testutil::context());
    int port = server.http().bind_to_any_port("127.0.0.1");
    if (port <= 0) return std::make_pair(false, std::string("cannot bind"));
    std::thread runner([&] { server.http().listen_after_bind(); });
    server.http().wait_until_ready();
    httplib::Client cli("127.0.0.1", port);

    std::string transcript;
    auto log = [&](const std::string& label, const httplib::Result& r) {
      transcript += "== " + label + "\n" + (r ? r->body : "<no response>") + "\n";
    };
    auto created = cli.Post(
        "/sessions", R"x({"task": "AddItem2ToDoListTask", "seed": 0, "viewport": "hd"})x",
        "application/json");
    std::string sid = created ? ojson::parse(created->body)["session_id"].get<std::string>() : "";
    log("create", created);
    log("observe", cli.Get("/sessions/" + sid + "/observation"));
    for (const std::string& a : {std::string("noop"), std::string("click('9999')"),
                                 std::string("goto('/todo')"), std::string("fill('21', 'Buy milk')"),
                                 std::string("click('22')")}) {
      ojson body;
      body["action"] = a;
      log("act " + a, cli.Post("/sessions/" + sid + "/actions", body.dump(), "application/json"));
    }
    log("state", cli.Get("/sessions/" + sid + "/state"));
    log("result", cli.Get("/sessions/" + sid + "/result"));
    server.stop();
    runner.join();

    for (size_t pos = 0; (pos = transcript.find("\"" + sid + "\"", pos)) != std::string::npos;)
      transcript.replace(pos, sid.size() + 2, "\"{SID}\"");
    std::string golden = testutil::slurp(testutil::golden_dir() / "http_transcript.txt");
    if (transcript != golden)
      return std::make_pair(false, std::string("transcript differs from the committed golden"));
    return std::make_pair(true, std::string("byte-identical modulo session id"));
  });

  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
