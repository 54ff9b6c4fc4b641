#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "varapps/layout.hpp"
#include "varapps/transition.hpp"
#include "varapps/variations.hpp"

using namespace varapps;

namespace {

const Viewport kHd = *viewport_from_name("hd");

Observation obs_for(Route route, const AppConfigSet& cfg, const Viewport& vp = kHd) {
  EnvState s = init_state(cfg);
  s.nav.route = route;
  return render(s, cfg, vp);
}

void walk(const UiNode& n, const std::function<void(const UiNode&)>& fn) {
  fn(n);
  for (const UiNode& c : n.children) walk(c, fn);
}

std::multiset<std::string> role_labels(const UiNode& root) {
  std::multiset<std::string> out;
  walk(root, [&](const UiNode& n) { out.insert(std::string(role_name(n.role)) + "|" + n.label); });
  return out;
}

const std::vector<Route> kRoutes = {Route::home,  Route::calendar,   Route::todo, Route::messenger,
                                    Route::maps,  Route::codeeditor, Route::shop, Route::cart};

}  // namespace

TEST_CASE("bids are assigned in document pre-order and are unique") {
  Observation o = obs_for(Route::todo, testutil::default_config());
  std::vector<int> seen;
  walk(o.root, [&](const UiNode& n) { seen.push_back(std::stoi(n.bid)); });
  for (size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == static_cast<int>(i));
}

TEST_CASE("rendering is deterministic") {
  AppConfigSet cfg = testutil::default_config();
  Observation a = obs_for(Route::shop, cfg);
  Observation b = obs_for(Route::shop, cfg);
  CHECK(a.ax_tree == b.ax_tree);
  CHECK(a.html == b.html);
}

TEST_CASE("ax tree for the todo page matches the frozen golden") {
  Observation o = obs_for(Route::todo, testutil::default_config());
  CHECK(o.ax_tree == testutil::slurp(testutil::golden_dir() / "todo.axtree.txt"));
}

TEST_CASE("every page renders with interactive elements and a home path") {
  AppConfigSet cfg = testutil::default_config();
  for (Route r : kRoutes) {
    Observation o = obs_for(r, cfg);
    std::vector<const UiNode*> inter;
    collect_interactive(o.root, inter);
    CHECK_MESSAGE(!inter.empty(), "no interactive nodes on " << route_name(r));
    if (r != Route::home) CHECK(find_by_label(o.root, UiRole::link, "Home") != nullptr);
    CHECK(o.page_height > 0);
  }
}

TEST_CASE("layout stays within the viewport width") {
  AppConfigSet cfg = testutil::default_config();
  for (const char* name : {"fhd", "hd", "hvga"}) {
    Viewport vp = *viewport_from_name(name);
    for (Route r : kRoutes) {
      Observation o = obs_for(r, cfg, vp);
      walk(o.root, [&](const UiNode& n) {
        CHECK(n.x >= 0);
        CHECK(n.x + n.w <= o.root.w);
      });
    }
  }
}

TEST_CASE("the ax tree is identical across viewports") {
  AppConfigSet cfg = testutil::default_config();
  Observation a = obs_for(Route::shop, cfg, *viewport_from_name("fhd"));
  Observation b = obs_for(Route::shop, cfg, *viewport_from_name("hvga"));
  CHECK(a.ax_tree == b.ax_tree);
}

TEST_CASE("style variations keep the semantic tree, content variations may not") {
  RunContext ctx = testutil::context();
  Observation plain = obs_for(Route::todo, ctx.base_config);
  for (const char* id : {"black_and_white", "dark_theme", "challenging_font"}) {
    AppConfigSet varied = config_for_variations(ctx.base_config, ctx.variations, {id});
    Observation o = obs_for(Route::todo, varied);
    CHECK_MESSAGE(role_labels(o.root) == role_labels(plain.root), "variation " << id);
    CHECK(o.html != plain.html);
  }
  AppConfigSet german = config_for_variations(ctx.base_config, ctx.variations, {"german"});
  CHECK(role_labels(obs_for(Route::todo, german).root) != role_labels(plain.root));
}

TEST_CASE("hit-testing a node center agrees with clicking its bid") {
  AppConfigSet cfg = testutil::default_config();
  EnvState s = init_state(cfg);
  for (Route r : kRoutes) {
    s.nav.route = r;
    Observation o = render(s, cfg, kHd);
    std::vector<const UiNode*> inter;
    collect_interactive(o.root, inter);
    for (const UiNode* n : inter) {
      const UiNode* hit = hit_test(o.root, n->x + n->w / 2, n->y + n->h / 2);
      REQUIRE_MESSAGE(hit != nullptr, route_name(r) << " bid " << n->bid);
      CHECK_MESSAGE(hit->bid == n->bid,
                    route_name(r) << ": center of " << n->bid << " hits " << hit->bid);
    }
  }
}

TEST_CASE("mouse_click accounts for the scroll offset") {
  AppConfigSet cfg = testutil::default_config();
  EnvState s = init_state(cfg);
  s.nav.route = Route::shop;
  s.nav.scroll_offset = 100000;  // clamps to the bottom of the page
  Observation o = render(s, cfg, *viewport_from_name("hvga"));
  CHECK(o.scroll_offset > 0);
  std::vector<const UiNode*> inter;
  collect_interactive(o.root, inter);
  const UiNode* last = inter.back();
  Action a = std::get<Action>(parse_action(
      "mouse_click(" + std::to_string(last->x + last->w / 2) + ", " +
          std::to_string(last->y + last->h / 2 - o.scroll_offset) + ")",
      ProfileId::full));
  Resolution res = resolve(o, s, a);
  REQUIRE(res.control.has_value());
  REQUIRE(last->control.has_value());
  CHECK(*res.control == *last->control);
}

TEST_CASE("resolution failures carry reasons") {
  AppConfigSet cfg = testutil::default_config();
  EnvState s = init_state(cfg);
  s.nav.route = Route::todo;
  Observation o = render(s, cfg, kHd);
  auto res = [&](const std::string& raw) {
    return resolve(o, s, std::get<Action>(parse_action(raw, ProfileId::full)));
  };
  CHECK(res("click('9999')").rejection->reason == "unknown_bid");
  CHECK(res("click('0')").rejection->reason == "not_interactive");
  CHECK(res("fill('0', 'x')").rejection->reason == "not_a_textbox");
  CHECK(res("drag_and_drop('1', '2')").rejection->reason == "unsupported");
  CHECK(res("keyboard_type('abc')").rejection->reason == "no_focused_field");
  CHECK(res("mouse_click(0, 0)").rejection->reason == "no_element_at_point");
}

TEST_CASE("goto resolves internal routes and rejects external urls") {
  AppConfigSet cfg = testutil::default_config();
  EnvState s = init_state(cfg);
  Observation o = render(s, cfg, kHd);
  auto res = [&](const std::string& raw) {
    return resolve(o, s, std::get<Action>(parse_action(raw, ProfileId::full)));
  };
  CHECK(std::get<Navigate>(*res("goto('/todo')").control).route == Route::todo);
  CHECK(std::get<Navigate>(*res("goto('app://openapps/maps')").control).route == Route::maps);
  Resolution ext = res("goto('https://leafletjs.com')");
  REQUIRE(ext.rejection.has_value());
  CHECK(ext.rejection->reason == "external_navigation");
  CHECK(ext.rejection->external_url == "https://leafletjs.com");
}

TEST_CASE("urls round-trip through the router") {
  CHECK(route_url(NavState{}) == "app://openapps/");
  for (Route r : kRoutes) {
    NavState nav;
    nav.route = r;
    CHECK(route_from_url(route_url(nav)) == r);
  }
  CHECK(!route_from_url("https://example.com").has_value());
}

TEST_CASE("html exposes bids, labels, and the configured palette") {
  RunContext ctx = testutil::context();
  Observation o = obs_for(Route::todo, ctx.base_config);
  CHECK(o.html.find("data-bid=\"1\"") != std::string::npos);
  CHECK(o.html.find("aria-label") != std::string::npos);
  CHECK(o.html.find("#1095c1") != std::string::npos);
  AppConfigSet bw = config_for_variations(ctx.base_config, ctx.variations, {"black_and_white"});
  CHECK(obs_for(Route::todo, bw).html.find("#1095c1") == std::string::npos);
}
