#include <doctest.h>

#include "helpers.hpp"
#include "varapps/actions.hpp"

using namespace varapps;

namespace {

InvalidCategory category_of(const std::string& raw, ProfileId profile = ProfileId::full) {
  ParseResult r = parse_action(raw, profile);
  const InvalidAction* inv = std::get_if<InvalidAction>(&r);
  REQUIRE_MESSAGE(inv != nullptr, "expected invalid: " << raw);
  return inv->category;
}

Action parse_ok(const std::string& raw, ProfileId profile = ProfileId::full) {
  ParseResult r = parse_action(raw, profile);
  const Action* a = std::get_if<Action>(&r);
  REQUIRE_MESSAGE(a != nullptr, "expected valid: " << raw);
  return *a;
}

}  // namespace

TEST_CASE("profiles expose the documented unique action names") {
  CHECK(action_signatures(ProfileId::full).size() == 23);
  CHECK(action_signatures(ProfileId::visual_only).size() == 16);
  for (const auto& sig : action_signatures(ProfileId::visual_only))
    CHECK(find_signature(ProfileId::full, sig.name) != nullptr);
  CHECK(find_signature(ProfileId::visual_only, "click") == nullptr);
  CHECK(find_signature(ProfileId::visual_only, "fill") == nullptr);
}

TEST_CASE("every profile action parses with its documented arity") {
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
  for (const auto& sig : action_signatures(ProfileId::full)) {
    REQUIRE_MESSAGE(minimal.count(sig.name), "missing sample for " << sig.name);
    Action a = parse_ok(minimal.at(sig.name));
    CHECK(a.name == sig.name);
  }
  // arity violations are bad_arguments
  CHECK(category_of("click()") == InvalidCategory::bad_arguments);
  CHECK(category_of("click('1', '2', '3')") == InvalidCategory::bad_arguments);
  CHECK(category_of("mouse_click(10)") == InvalidCategory::bad_arguments);
  CHECK(category_of("fill('1')") == InvalidCategory::bad_arguments);
}

TEST_CASE("optional arguments and keywords bind") {
  Action a = parse_ok("click('7', button='right')");
  CHECK(a.str_arg("button") == "right");
  Action b = parse_ok("mouse_click(200, 300, button='left')");
  CHECK(b.num_arg("x") == 200);
  CHECK(b.str_arg("button") == "left");
  CHECK(category_of("click('7', side='left')") == InvalidCategory::bad_arguments);
  CHECK(category_of("click(button='left', '7')") == InvalidCategory::bad_arguments);
}

TEST_CASE("bare integer bids are accepted") {
  Action a = parse_ok("click(47)");
  CHECK(a.str_arg("bid") == "47");
  CHECK(parse_ok("click('47')").str_arg("bid") == "47");
}

TEST_CASE("field corpus: structurally broken strings are malformed") {
  CHECK(category_of("noop") == InvalidCategory::malformed);
  CHECK(category_of("no-op") == InvalidCategory::malformed);
  CHECK(category_of("finished") == InvalidCategory::malformed);
  CHECK(category_of("None") == InvalidCategory::malformed);
  CHECK(category_of("click([67] link 'main-page'") == InvalidCategory::malformed);
  CHECK(category_of("mouse_click(x=612 y)") == InvalidCategory::malformed);
  CHECK(category_of("click(bid)\n```") == InvalidCategory::malformed);
  CHECK(category_of("click(bid)\n<\\action>") == InvalidCategory::malformed);
  CHECK(category_of("click(bid)\n```python\npyautogui.click(x=0.523, y=0.466)\n```") ==
        InvalidCategory::malformed);
}

TEST_CASE("field corpus: unknown names") {
  CHECK(category_of("check_ax_tree()") == InvalidCategory::unknown_action);
  CHECK(category_of("remove_item(water plants)") == InvalidCategory::unknown_action);
  CHECK(category_of("duplicate(17)") == InvalidCategory::unknown_action);
  CHECK(category_of("enter(searchInput, Bockelwitz, Germany)") ==
        InvalidCategory::unknown_action);
  CHECK(category_of("go_to('https://www.example.com/maps')") == InvalidCategory::unknown_action);
  CHECK(category_of(
            "type(OWYN - 100% Vegan Plant-Based Protein Shakes | Cold Brew Coffee, 12 Fl Oz )") ==
        InvalidCategory::unknown_action);
  CHECK(category_of("finished()") == InvalidCategory::unknown_action);
  CHECK(category_of("wait()") == InvalidCategory::unknown_action);
}

TEST_CASE("field corpus: bad arguments") {
  CHECK(category_of("click(bid)") == InvalidCategory::bad_arguments);
  CHECK(category_of("scroll(direction='down', point='(966,546)')") ==
        InvalidCategory::bad_arguments);
}

TEST_CASE("visual profile rejects element-id actions as unknown") {
  CHECK(category_of("click('7')", ProfileId::visual_only) == InvalidCategory::unknown_action);
  parse_ok("mouse_click(10, 20)", ProfileId::visual_only);
}

TEST_CASE("quoted strings support escapes") {
  Action a = parse_ok("fill('3', 'it\\'sね, \"quoted\"')");
  CHECK(a.str_arg("value") == "it's\xe3\x81\xad, \"quoted\"");
}

TEST_CASE("format round-trips through the parser") {
  const std::vector<std::string> samples = {
      "click('7')", "click('7', button='right')", "fill('3', 'a b c')",
      "scroll(0, -120)", "mouse_drag_and_drop(1, 2, 3, 4)", "keyboard_press('Enter')"};
  for (const auto& raw : samples) {
    Action a = parse_ok(raw);
    std::string printed = format_action(a);
    Action b = parse_ok(printed);
    CHECK(a.name == b.name);
    CHECK(format_action(b) == printed);
  }
}

TEST_CASE("parsing never throws on fuzz-like garbage") {
  const std::vector<std::string> garbage = {
      "", "   ", "(", ")", "()", "'", "click", "click(", "click((", "click(')",
      "a(b(c(d)))", "fill('1',)", ",", "click('7'))", "scroll(1e999, 2)", "\n\n\n"};
  for (const auto& g : garbage) {
    ParseResult r = parse_action(g, ProfileId::full);
    CHECK(std::holds_alternative<InvalidAction>(r));
  }
}
