#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "varapps/digest.hpp"
#include "varapps/state.hpp"
#include "varapps/yaml_io.hpp"

namespace varapps {

// ---- EnvState <-> json (full fidelity, schema key order) -------------------

namespace detail {

inline ojson event_to_json(const CalendarEvent& e) {
  ojson j = ojson::object();
  j["title"] = e.title;
  j["date"] = e.date;
  j["description"] = e.description;
  j["url"] = e.url;
  j["location"] = e.location;
  j["invitees"] = e.invitees;
  return j;
}

inline CalendarEvent event_from_json(const ojson& j) {
  CalendarEvent e;
  e.title = j.at("title").get<std::string>();
  e.date = j.at("date").get<std::string>();
  e.description = j.value("description", "");
  e.url = j.value("url", "");
  e.location = j.value("location", "");
  if (j.contains("invitees") && j["invitees"].is_array())
    for (const auto& v : j["invitees"]) e.invitees.push_back(v.get<std::string>());
  return e;
}

inline ojson file_to_json(const FileNode& n) {
  ojson j = ojson::object();
  j["kind"] = n.kind == FileKind::folder ? "folder" : "file";
  j["name"] = n.name;
  if (n.kind == FileKind::folder) {
    ojson kids = ojson::array();
    for (const auto& c : n.children) kids.push_back(file_to_json(c));
    j["children"] = kids;
  }
  return j;
}

inline FileNode file_from_json(const ojson& j) {
  FileNode n;
  n.kind = j.at("kind").get<std::string>() == "folder" ? FileKind::folder : FileKind::file;
  n.name = j.at("name").get<std::string>();
  if (j.contains("children"))
    for (const auto& c : j["children"]) n.children.push_back(file_from_json(c));
  return n;
}

inline ojson options_to_json(const std::map<std::string, std::string>& m) {
  ojson j = ojson::object();
  for (const auto& [k, v] : m) j[k] = v;  // std::map iterates sorted
  return j;
}

}  // namespace detail

inline ojson state_to_json(const EnvState& s) {
  ojson j = ojson::object();
  j["schema_version"] = 1;
  j["today"] = s.today;
  j["logical_clock"] = s.logical_clock;

  ojson nav = ojson::object();
  nav["route"] = route_name(s.nav.route);
  if (s.nav.route == Route::external) nav["external_url"] = s.nav.external_url;
  nav["scroll_offset"] = s.nav.scroll_offset;
  ojson pf = ojson::object();
  for (const auto& [k, v] : s.nav.pending_form) pf[k] = v;
  nav["pending_form"] = pf;
  nav["open_dialog"] = s.nav.open_dialog ? ojson(*s.nav.open_dialog) : ojson(nullptr);
  nav["focused_field"] = s.nav.focused_field ? ojson(*s.nav.focused_field) : ojson(nullptr);
  ojson bs = ojson::array(), fs = ojson::array();
  for (Route r : s.nav.back_stack) bs.push_back(route_name(r));
  for (Route r : s.nav.forward_stack) fs.push_back(route_name(r));
  nav["back_stack"] = bs;
  nav["forward_stack"] = fs;
  j["nav"] = nav;

  ojson cal = ojson::array();
  for (const auto& e : s.calendar) cal.push_back(detail::event_to_json(e));
  j["calendar"] = cal;

  ojson todos = ojson::array();
  for (const auto& t : s.todos) {
    ojson it = ojson::object();
    it["text"] = t.text;
    it["done"] = t.done;
    todos.push_back(it);
  }
  j["todos"] = todos;

  ojson convs = ojson::object();
  for (const auto& [peer, msgs] : s.conversations) {
    ojson arr = ojson::array();
    for (const auto& m : msgs) {
      ojson mj = ojson::object();
      mj["direction"] = m.direction == MsgDirection::sent ? "sent" : "received";
      mj["body"] = m.body;
      mj["seq"] = m.seq;
      arr.push_back(mj);
    }
    convs[peer] = arr;
  }
  j["conversations"] = convs;

  ojson places = ojson::array();
  for (const auto& p : s.places) {
    ojson pj = ojson::object();
    pj["name"] = p.name;
    pj["query"] = p.query;
    places.push_back(pj);
  }
  j["places"] = places;

  ojson catalog = ojson::array();
  for (const auto& p : s.catalog) {
    ojson pj = ojson::object();
    pj["id"] = p.id;
    pj["name"] = p.name;
    ojson opts = ojson::object();
    for (const auto& [k, vals] : p.options) opts[k] = vals;
    pj["options"] = opts;
    catalog.push_back(pj);
  }
  j["catalog"] = catalog;

  ojson cart = ojson::array();
  for (const auto& c : s.cart) {
    ojson cj = ojson::object();
    cj["product_id"] = c.product_id;
    cj["chosen_options"] = detail::options_to_json(c.chosen_options);
    cj["quantity"] = c.quantity;
    cart.push_back(cj);
  }
  j["cart"] = cart;

  j["files"] = detail::file_to_json(s.files);
  return j;
}

inline EnvState state_from_json(const ojson& j) {
  EnvState s;
  s.today = j.at("today").get<std::string>();
  s.logical_clock = j.value("logical_clock", 0);
  const ojson& nav = j.at("nav");
  if (auto r = route_from_name(nav.at("route").get<std::string>())) s.nav.route = *r;
  if (nav.contains("external_url")) s.nav.external_url = nav["external_url"].get<std::string>();
  s.nav.scroll_offset = nav.value("scroll_offset", 0);
  if (nav.contains("pending_form"))
    for (auto it = nav["pending_form"].begin(); it != nav["pending_form"].end(); ++it)
      s.nav.pending_form[it.key()] = it.value().get<std::string>();
  if (nav.contains("open_dialog") && !nav["open_dialog"].is_null())
    s.nav.open_dialog = nav["open_dialog"].get<std::string>();
  if (nav.contains("focused_field") && !nav["focused_field"].is_null())
    s.nav.focused_field = nav["focused_field"].get<std::string>();
  if (nav.contains("back_stack"))
    for (const auto& v : nav["back_stack"])
      if (auto r = route_from_name(v.get<std::string>())) s.nav.back_stack.push_back(*r);
  if (nav.contains("forward_stack"))
    for (const auto& v : nav["forward_stack"])
      if (auto r = route_from_name(v.get<std::string>())) s.nav.forward_stack.push_back(*r);

  for (const auto& e : j.at("calendar")) s.calendar.push_back(detail::event_from_json(e));
  for (const auto& t : j.at("todos"))
    s.todos.push_back({t.at("text").get<std::string>(), t.at("done").get<bool>()});
  const ojson& convs = j.at("conversations");
  for (auto it = convs.begin(); it != convs.end(); ++it) {
    std::vector<Message>& msgs = s.conversations[it.key()];
    for (const auto& mj : it.value()) {
      Message m;
      m.direction = mj.at("direction").get<std::string>() == "sent" ? MsgDirection::sent
                                                                    : MsgDirection::received;
      m.body = mj.at("body").get<std::string>();
      m.seq = mj.at("seq").get<int64_t>();
      msgs.push_back(m);
    }
  }
  for (const auto& pj : j.at("places"))
    s.places.push_back({pj.at("name").get<std::string>(), pj.at("query").get<std::string>()});
  for (const auto& pj : j.at("catalog")) {
    Product p;
    p.id = pj.at("id").get<std::string>();
    p.name = pj.at("name").get<std::string>();
    const ojson& opts = pj.at("options");
    for (auto it = opts.begin(); it != opts.end(); ++it) {
      std::vector<std::string> vals;
      for (const auto& v : it.value()) vals.push_back(v.get<std::string>());
      p.options[it.key()] = vals;
    }
    s.catalog.push_back(p);
  }
  for (const auto& cj : j.at("cart")) {
    CartItem c;
    c.product_id = cj.at("product_id").get<std::string>();
    const ojson& opts = cj.at("chosen_options");
    for (auto it = opts.begin(); it != opts.end(); ++it)
      c.chosen_options[it.key()] = it.value().get<std::string>();
    c.quantity = cj.at("quantity").get<int>();
    s.cart.push_back(c);
  }
  s.files = detail::file_from_json(j.at("files"));
  return s;
}

inline std::string serialize_state(const EnvState& s) { return emit_yaml(state_to_json(s)); }

inline EnvState parse_state(const std::string& yaml) {
  return state_from_json(parse_yaml(yaml));
}

// ---- canonical form --------------------------------------------------------
//
// Multiset-semantics collections (calendar, places, cart) sort by stable
// keys; todos and conversations keep user-visible order. Volatile fields
// (logical clock, scroll, pending form, dialogs, focus, history) are masked.

struct CanonicalState {
  ojson tree;
  std::string yaml;

  friend bool operator==(const CanonicalState& a, const CanonicalState& b) {
    return a.yaml == b.yaml;
  }
};

inline ojson canonical_json(const EnvState& s, bool include_nav = true) {
  ojson full = state_to_json(s);
  ojson j = ojson::object();
  j["schema_version"] = 1;
  j["today"] = full["today"];
  if (include_nav) {
    ojson nav = ojson::object();
    nav["route"] = full["nav"]["route"];
    if (s.nav.route == Route::external) nav["external_url"] = s.nav.external_url;
    j["nav"] = nav;
  }

  ojson cal = full["calendar"];
  std::stable_sort(cal.begin(), cal.end(), [](const ojson& a, const ojson& b) {
    auto key = [](const ojson& e) {
      return std::tuple(e.at("date").get<std::string>(), e.at("title").get<std::string>(),
                        e.at("description").get<std::string>());
    };
    return key(a) < key(b);
  });
  j["calendar"] = cal;

  j["todos"] = full["todos"];
  j["conversations"] = full["conversations"];  // peers already sorted (std::map)

  ojson places = full["places"];
  std::stable_sort(places.begin(), places.end(), [](const ojson& a, const ojson& b) {
    return a.at("name").get<std::string>() < b.at("name").get<std::string>();
  });
  j["places"] = places;

  ojson catalog = full["catalog"];
  std::stable_sort(catalog.begin(), catalog.end(), [](const ojson& a, const ojson& b) {
    return a.at("id").get<std::string>() < b.at("id").get<std::string>();
  });
  j["catalog"] = catalog;

  ojson cart = full["cart"];
  std::stable_sort(cart.begin(), cart.end(), [](const ojson& a, const ojson& b) {
    auto key = [](const ojson& c) {
      return std::tuple(c.at("product_id").get<std::string>(), c.at("chosen_options").dump());
    };
    return key(a) < key(b);
  });
  j["cart"] = cart;

  j["files"] = full["files"];
  return j;
}

inline CanonicalState canonicalize(const EnvState& s, bool include_nav = true) {
  CanonicalState c;
  c.tree = canonical_json(s, include_nav);
  c.yaml = emit_yaml(c.tree);
  return c;
}

inline std::string state_digest(const EnvState& s) { return hex_digest(canonicalize(s).yaml); }

// ---- structural diff -------------------------------------------------------

struct DiffEntry {
  std::string path;
  ojson before;  // null when added
  ojson after;   // null when removed
};

using StateDiff = std::vector<DiffEntry>;

namespace detail {

inline void diff_rec(const ojson& a, const ojson& b, const std::string& path, StateDiff& out) {
  if (a == b) return;
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      std::string p = path.empty() ? it.key() : path + "." + it.key();
      if (!b.contains(it.key()))
        out.push_back({p, it.value(), ojson(nullptr)});
      else
        diff_rec(it.value(), b[it.key()], p, out);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key()))
        out.push_back({path.empty() ? it.key() : path + "." + it.key(), ojson(nullptr), it.value()});
    return;
  }
  if (a.is_array() && b.is_array()) {
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
      std::string p = path + "[" + std::to_string(i) + "]";
      if (i >= a.size())
        out.push_back({p, ojson(nullptr), b[i]});
      else if (i >= b.size())
        out.push_back({p, a[i], ojson(nullptr)});
      else
        diff_rec(a[i], b[i], p, out);
    }
    return;
  }
  out.push_back({path, a, b});
}

}  // namespace detail

inline StateDiff diff(const CanonicalState& a, const CanonicalState& b) {
  StateDiff out;
  detail::diff_rec(a.tree, b.tree, "", out);
  return out;
}

}  // namespace varapps
