#pragma once

#include <string>
#include <variant>

#include "varapps/state.hpp"

namespace varapps {

// Resolved meaning of a UI action against the current page.

struct Navigate {
  Route route = Route::home;
  std::string external_url;  // only for Route::external

  Navigate() = default;
  explicit Navigate(Route r, std::string url = "") : route(r), external_url(std::move(url)) {}

  friend bool operator==(const Navigate&, const Navigate&) = default;
};

struct GoBack {
  friend bool operator==(const GoBack&, const GoBack&) = default;
};
struct GoForward {
  friend bool operator==(const GoForward&, const GoForward&) = default;
};

struct SetField {
  std::string field;
  std::string value;
  bool append = false;  // keyboard_type appends, fill replaces
  friend bool operator==(const SetField&, const SetField&) = default;
};

struct FocusField {
  std::string field;
  friend bool operator==(const FocusField&, const FocusField&) = default;
};

struct SelectOption {
  std::string field;
  std::string value;
  friend bool operator==(const SelectOption&, const SelectOption&) = default;
};

struct ActivateButton {
  std::string button;  // semantic id, e.g. "add-todo"
  std::string arg;     // target key (index, name, or path), empty when unused
  friend bool operator==(const ActivateButton&, const ActivateButton&) = default;
};

struct KeyPress {
  std::string key;
  friend bool operator==(const KeyPress&, const KeyPress&) = default;
};

struct ScrollBy {
  int delta_y = 0;
  friend bool operator==(const ScrollBy&, const ScrollBy&) = default;
};

// Pointer hovers and similar gestures that touch nothing.
struct NoEffect {
  friend bool operator==(const NoEffect&, const NoEffect&) = default;
};

using SemanticControl = std::variant<Navigate, GoBack, GoForward, SetField, FocusField,
                                     SelectOption, ActivateButton, KeyPress, ScrollBy, NoEffect>;

// A control (or raw action) that could not be applied; state is unchanged.
struct Rejection {
  std::string reason;        // machine-readable, e.g. "unknown_bid"
  std::string detail;
  // external goto still moves the route even though the navigation is
  // rejected, so intent analytics can see where the agent tried to go
  std::string external_url;

  Rejection() = default;
  Rejection(std::string reason_, std::string detail_, std::string external_url_ = "")
      : reason(std::move(reason_)), detail(std::move(detail_)),
        external_url(std::move(external_url_)) {}

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

inline std::string control_name(const SemanticControl& c) {
  struct V {
    std::string operator()(const Navigate& n) {
      return std::string("navigate:") + route_name(n.route);
    }
    std::string operator()(const GoBack&) { return "go_back"; }
    std::string operator()(const GoForward&) { return "go_forward"; }
    std::string operator()(const SetField& s) { return "set_field:" + s.field; }
    std::string operator()(const FocusField& f) { return "focus:" + f.field; }
    std::string operator()(const SelectOption& s) { return "select:" + s.field + "=" + s.value; }
    std::string operator()(const ActivateButton& b) {
      return b.arg.empty() ? "button:" + b.button : "button:" + b.button + ":" + b.arg;
    }
    std::string operator()(const KeyPress& k) { return "key:" + k.key; }
    std::string operator()(const ScrollBy&) { return "scroll"; }
    std::string operator()(const NoEffect&) { return "no_effect"; }
  };
  return std::visit(V{}, c);
}

}  // namespace varapps
