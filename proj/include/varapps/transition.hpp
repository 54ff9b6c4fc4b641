#pragma once

#include <algorithm>
#include <numeric>
#include <variant>

#include "varapps/canonical.hpp"
#include "varapps/config.hpp"
#include "varapps/controls.hpp"
#include "varapps/state.hpp"

namespace varapps {

// ---- s_0 from config -------------------------------------------------------

inline EnvState init_state(const AppConfigSet& configs) {
  EnvState s;
  s.today = configs.today();
  s.logical_clock = 0;
  s.nav.route = Route::home;

  for (const auto& e : configs.content("calendar").at("events")) {
    CalendarEvent ev;
    ev.title = e.at("title").get<std::string>();
    ev.date = e.at("date").get<std::string>();
    ev.description = e.value("description", "");
    ev.url = e.contains("url") && e["url"].is_string() ? e["url"].get<std::string>() : "";
    ev.location =
        e.contains("location") && e["location"].is_string() ? e["location"].get<std::string>() : "";
    if (e.contains("invitees") && e["invitees"].is_array())
      for (const auto& v : e["invitees"]) ev.invitees.push_back(v.get<std::string>());
    s.calendar.push_back(std::move(ev));
  }

  for (const auto& t : configs.content("todo").at("todos"))
    s.todos.push_back({t.at("text").get<std::string>(), t.at("done").get<bool>()});

  for (const auto& c : configs.content("messenger").at("conversations")) {
    std::vector<Message>& msgs = s.conversations[c.at("peer").get<std::string>()];
    for (const auto& m : c.at("messages")) {
      Message msg;
      msg.direction = m.at("direction").get<std::string>() == "sent" ? MsgDirection::sent
                                                                     : MsgDirection::received;
      msg.body = m.at("body").get<std::string>();
      msg.seq = static_cast<int64_t>(msgs.size()) + 1;
      msgs.push_back(std::move(msg));
    }
  }

  for (const auto& p : configs.content("maps").at("places"))
    s.places.push_back({p.at("name").get<std::string>(), p.at("query").get<std::string>()});

  for (const auto& pj : configs.content("shop").at("products")) {
    Product p;
    p.id = pj.at("id").get<std::string>();
    p.name = pj.at("name").get<std::string>();
    if (pj.contains("options"))
      for (auto it = pj["options"].begin(); it != pj["options"].end(); ++it) {
        std::vector<std::string> vals;
        for (const auto& v : it.value()) vals.push_back(v.get<std::string>());
        p.options[it.key()] = std::move(vals);
      }
    s.catalog.push_back(std::move(p));
  }
  for (const auto& cj : configs.content("shop").at("cart")) {
    CartItem c;
    c.product_id = cj.at("product_id").get<std::string>();
    if (cj.contains("chosen_options"))
      for (auto it = cj["chosen_options"].begin(); it != cj["chosen_options"].end(); ++it)
        c.chosen_options[it.key()] = it.value().get<std::string>();
    // unset options default to the first allowed value
    for (const auto& p : s.catalog)
      if (p.id == c.product_id)
        for (const auto& [opt, vals] : p.options)
          if (!c.chosen_options.count(opt) && !vals.empty()) c.chosen_options[opt] = vals.front();
    c.quantity = cj.value("quantity", 1);
    s.cart.push_back(std::move(c));
  }

  s.files = detail::file_from_json(configs.content("codeeditor").at("files"));
  s.files.name = "/";
  s.files.kind = FileKind::folder;
  return s;
}

// ---- per-route form model --------------------------------------------------

inline std::vector<std::string> route_text_fields(Route r) {
  switch (r) {
    case Route::calendar:
      return {"event-title", "event-date", "event-description",
              "event-url",   "event-location", "event-invitees"};
    case Route::todo: return {"todo-text"};
    case Route::messenger: return {"msg-body"};
    case Route::maps: return {"place-query"};
    case Route::codeeditor: return {"file-name"};
    default: return {};
  }
}

inline std::vector<std::string> route_select_fields(Route r, const EnvState& s) {
  std::vector<std::string> out;
  if (r == Route::messenger) out.push_back("msg-peer");
  if (r == Route::codeeditor) out.push_back("file-folder");
  if (r == Route::shop)
    for (const auto& p : s.catalog)
      for (const auto& [opt, vals] : p.options) out.push_back("opt:" + p.id + ":" + opt);
  return out;
}

inline bool route_has_field(Route r, const EnvState& s, const std::string& field) {
  auto tf = route_text_fields(r);
  if (std::find(tf.begin(), tf.end(), field) != tf.end()) return true;
  auto sf = route_select_fields(r, s);
  return std::find(sf.begin(), sf.end(), field) != sf.end();
}

// folder paths offered by the code editor's parent select, pre-order
inline void collect_folders(const FileNode& n, const std::string& prefix,
                            std::vector<std::string>& out) {
  if (n.kind != FileKind::folder) return;
  std::string path = prefix.empty() ? "/" : prefix;
  out.push_back(path);
  for (const auto& c : n.children)
    if (c.kind == FileKind::folder)
      collect_folders(c, (path == "/" ? "/" : path + "/") + c.name, out);
}

inline std::vector<std::string> select_options_for(const EnvState& s, const std::string& field) {
  if (field == "msg-peer") {
    std::vector<std::string> peers;
    for (const auto& [peer, _] : s.conversations) peers.push_back(peer);
    return peers;
  }
  if (field == "file-folder") {
    std::vector<std::string> folders;
    collect_folders(s.files, "", folders);
    return folders;
  }
  if (field.rfind("opt:", 0) == 0) {
    size_t sep = field.find(':', 4);
    if (sep == std::string::npos) return {};
    std::string pid = field.substr(4, sep - 4);
    std::string opt = field.substr(sep + 1);
    for (const auto& p : s.catalog)
      if (p.id == pid) {
        auto it = p.options.find(opt);
        if (it != p.options.end()) return it->second;
      }
  }
  return {};
}

// display order of calendar events mirrors canonical sorting
inline std::vector<size_t> calendar_display_order(const EnvState& s) {
  std::vector<size_t> idx(s.calendar.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    const auto& x = s.calendar[a];
    const auto& y = s.calendar[b];
    return std::tie(x.date, x.title, x.description) < std::tie(y.date, y.title, y.description);
  });
  return idx;
}

inline std::vector<size_t> cart_display_order(const EnvState& s) {
  std::vector<size_t> idx(s.cart.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    const auto& x = s.cart[a];
    const auto& y = s.cart[b];
    return std::tie(x.product_id, x.chosen_options) < std::tie(y.product_id, y.chosen_options);
  });
  return idx;
}

// ---- transition ------------------------------------------------------------

using ApplyResult = std::variant<EnvState, Rejection>;

namespace detail {

inline std::string form_value(const EnvState& s, const std::string& field) {
  auto it = s.nav.pending_form.find(field);
  return it == s.nav.pending_form.end() ? "" : it->second;
}

inline void clear_form(EnvState& s) {
  s.nav.pending_form.clear();
  s.nav.focused_field.reset();
}

inline ApplyResult done(EnvState s) {
  s.logical_clock += 1;
  return s;
}

inline ApplyResult activate_button(EnvState s, const ActivateButton& b) {
  Route r = s.nav.route;

  if (b.button == "add-event" && r == Route::calendar) {
    CalendarEvent ev;
    ev.title = trim_copy(form_value(s, "event-title"));
    ev.date = trim_copy(form_value(s, "event-date"));
    ev.description = form_value(s, "event-description");
    ev.url = trim_copy(form_value(s, "event-url"));
    ev.location = trim_copy(form_value(s, "event-location"));
    std::string inv = form_value(s, "event-invitees");
    size_t start = 0;
    while (start < inv.size()) {
      size_t comma = inv.find(',', start);
      std::string part = trim_copy(
          inv.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (!part.empty()) ev.invitees.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (ev.title.empty()) return Rejection{"empty_required_field", "event title is required"};
    if (!valid_iso_date(ev.date))
      return Rejection{"invalid_field", "event date must be YYYY-MM-DD, got '" + ev.date + "'"};
    s.calendar.push_back(std::move(ev));
    clear_form(s);
    return done(std::move(s));
  }

  if (b.button == "delete-event" && r == Route::calendar) {
    auto order = calendar_display_order(s);
    size_t i = b.arg.empty() ? order.size() : std::stoul(b.arg);
    if (i >= order.size()) return Rejection{"unknown_target", "no event at index " + b.arg};
    s.calendar.erase(s.calendar.begin() + static_cast<long>(order[i]));
    return done(std::move(s));
  }

  if (b.button == "add-todo" && r == Route::todo) {
    std::string text = trim_copy(form_value(s, "todo-text"));
    if (text.empty()) return Rejection{"empty_required_field", "todo text is required"};
    s.todos.push_back({text, false});
    clear_form(s);
    return done(std::move(s));
  }

  if (b.button == "toggle-todo" && r == Route::todo) {
    size_t i = b.arg.empty() ? s.todos.size() : std::stoul(b.arg);
    if (i >= s.todos.size()) return Rejection{"unknown_target", "no todo at index " + b.arg};
    s.todos[i].done = !s.todos[i].done;
    return done(std::move(s));
  }

  if (b.button == "delete-todo" && r == Route::todo) {
    size_t i = b.arg.empty() ? s.todos.size() : std::stoul(b.arg);
    if (i >= s.todos.size()) return Rejection{"unknown_target", "no todo at index " + b.arg};
    s.todos.erase(s.todos.begin() + static_cast<long>(i));
    return done(std::move(s));
  }

  if (b.button == "send-message" && r == Route::messenger) {
    std::string peer = form_value(s, "msg-peer");
    if (peer.empty() && !s.conversations.empty()) peer = s.conversations.begin()->first;
    std::string body = trim_copy(form_value(s, "msg-body"));
    if (peer.empty()) return Rejection{"empty_required_field", "no conversation selected"};
    if (!s.conversations.count(peer))
      return Rejection{"unknown_target", "no conversation with '" + peer + "'"};
    if (body.empty()) return Rejection{"empty_required_field", "message body is required"};
    auto& msgs = s.conversations[peer];
    Message m;
    m.direction = MsgDirection::sent;
    m.body = body;
    m.seq = msgs.empty() ? 1 : msgs.back().seq + 1;
    msgs.push_back(std::move(m));
    clear_form(s);
    return done(std::move(s));
  }

  if (b.button == "save-place" && r == Route::maps) {
    std::string raw = form_value(s, "place-query");
    std::string name = trim_copy(raw);
    if (name.empty()) return Rejection{"empty_required_field", "place query is required"};
    for (const auto& p : s.places)
      if (p.name == name) return Rejection{"duplicate", "place '" + name + "' already saved"};
    s.places.push_back({name, raw});
    clear_form(s);
    return done(std::move(s));
  }

  if (b.button == "delete-place" && r == Route::maps) {
    auto it = std::find_if(s.places.begin(), s.places.end(),
                           [&](const SavedPlace& p) { return p.name == b.arg; });
    if (it == s.places.end()) return Rejection{"unknown_target", "no place '" + b.arg + "'"};
    s.places.erase(it);
    return done(std::move(s));
  }

  if (b.button == "create-file" && r == Route::codeeditor) {
    std::string name = trim_copy(form_value(s, "file-name"));
    std::string folder = form_value(s, "file-folder");
    if (folder.empty()) folder = "/";
    if (name.empty()) return Rejection{"empty_required_field", "file name is required"};
    if (name.find('/') != std::string::npos)
      return Rejection{"invalid_field", "file name must not contain '/'"};
    FileNode* parent = find_node(s.files, folder);
    if (!parent || parent->kind != FileKind::folder)
      return Rejection{"unknown_target", "no folder '" + folder + "'"};
    for (const auto& c : parent->children)
      if (c.name == name) return Rejection{"duplicate", "'" + name + "' already exists"};
    parent->children.push_back(FileNode{FileKind::file, name, {}});
    clear_form(s);
    return done(std::move(s));
  }

  if (b.button == "delete-node" && r == Route::codeeditor) {
    if (b.arg.empty() || b.arg == "/") return Rejection{"unknown_target", "cannot delete root"};
    std::string path = b.arg;
    size_t slash = path.find_last_of('/');
    std::string parent_path = slash == 0 ? "/" : path.substr(0, slash);
    std::string leaf = path.substr(slash + 1);
    FileNode* parent = find_node(s.files, parent_path);
    if (!parent) return Rejection{"unknown_target", "no node at '" + path + "'"};
    auto it = std::find_if(parent->children.begin(), parent->children.end(),
                           [&](const FileNode& n) { return n.name == leaf; });
    if (it == parent->children.end())
      return Rejection{"unknown_target", "no node at '" + path + "'"};
    parent->children.erase(it);
    return done(std::move(s));
  }

  if (b.button == "add-to-cart" && r == Route::shop) {
    const Product* prod = nullptr;
    for (const auto& p : s.catalog)
      if (p.id == b.arg) prod = &p;
    if (!prod) return Rejection{"unknown_target", "no product '" + b.arg + "'"};
    CartItem item;
    item.product_id = prod->id;
    for (const auto& [opt, vals] : prod->options) {
      std::string chosen = form_value(s, "opt:" + prod->id + ":" + opt);
      if (chosen.empty() && !vals.empty()) chosen = vals.front();
      if (std::find(vals.begin(), vals.end(), chosen) == vals.end())
        return Rejection{"invalid_field", "bad option value '" + chosen + "'"};
      item.chosen_options[opt] = chosen;
    }
    item.quantity = 1;
    for (auto& line : s.cart)
      if (line.product_id == item.product_id && line.chosen_options == item.chosen_options) {
        line.quantity += 1;
        return done(std::move(s));
      }
    s.cart.push_back(std::move(item));
    return done(std::move(s));
  }

  if (b.button == "remove-cart-item" && r == Route::cart) {
    auto order = cart_display_order(s);
    size_t i = b.arg.empty() ? order.size() : std::stoul(b.arg);
    if (i >= order.size()) return Rejection{"unknown_target", "no cart line at index " + b.arg};
    s.cart.erase(s.cart.begin() + static_cast<long>(order[i]));
    return done(std::move(s));
  }

  if (b.button == "clear-cart" && r == Route::cart) {
    if (s.cart.empty()) return Rejection{"unknown_target", "cart is already empty"};
    s.cart.clear();
    return done(std::move(s));
  }

  return Rejection{"unknown_control", "no control '" + b.button + "' on page '" +
                                          route_name(r) + "'"};
}

// which submit button the Enter key triggers, per focused field
inline std::string submit_button_for(const std::string& field) {
  if (field.rfind("event-", 0) == 0) return "add-event";
  if (field == "todo-text") return "add-todo";
  if (field == "msg-body") return "send-message";
  if (field == "place-query") return "save-place";
  if (field == "file-name") return "create-file";
  return "";
}

}  // namespace detail

inline ApplyResult apply_control(const EnvState& state, const SemanticControl& control) {
  struct V {
    const EnvState& st;

    ApplyResult operator()(const Navigate& n) {
      EnvState s = st;
      s.nav.back_stack.push_back(s.nav.route);
      s.nav.forward_stack.clear();
      s.nav.route = n.route;
      s.nav.external_url = n.route == Route::external ? n.external_url : "";
      s.nav.scroll_offset = 0;
      detail::clear_form(s);
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const GoBack&) {
      if (st.nav.back_stack.empty()) return Rejection{"no_history", "nothing to go back to"};
      EnvState s = st;
      s.nav.forward_stack.push_back(s.nav.route);
      s.nav.route = s.nav.back_stack.back();
      s.nav.back_stack.pop_back();
      s.nav.external_url = "";
      s.nav.scroll_offset = 0;
      detail::clear_form(s);
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const GoForward&) {
      if (st.nav.forward_stack.empty()) return Rejection{"no_history", "nothing to go forward to"};
      EnvState s = st;
      s.nav.back_stack.push_back(s.nav.route);
      s.nav.route = s.nav.forward_stack.back();
      s.nav.forward_stack.pop_back();
      s.nav.external_url = "";
      s.nav.scroll_offset = 0;
      detail::clear_form(s);
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const SetField& f) {
      if (!route_has_field(st.nav.route, st, f.field))
        return Rejection{"unknown_field", "no field '" + f.field + "' on this page"};
      EnvState s = st;
      if (f.append)
        s.nav.pending_form[f.field] += f.value;
      else
        s.nav.pending_form[f.field] = f.value;
      s.nav.focused_field = f.field;
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const FocusField& f) {
      if (!route_has_field(st.nav.route, st, f.field))
        return Rejection{"unknown_field", "no field '" + f.field + "' on this page"};
      EnvState s = st;
      s.nav.focused_field = f.field;
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const SelectOption& o) {
      if (!route_has_field(st.nav.route, st, o.field))
        return Rejection{"unknown_field", "no select '" + o.field + "' on this page"};
      auto opts = select_options_for(st, o.field);
      if (std::find(opts.begin(), opts.end(), o.value) == opts.end())
        return Rejection{"bad_option", "'" + o.value + "' is not an option of " + o.field};
      EnvState s = st;
      s.nav.pending_form[o.field] = o.value;
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const ActivateButton& b) { return detail::activate_button(st, b); }

    ApplyResult operator()(const KeyPress& k) {
      if (k.key == "Enter" && st.nav.focused_field) {
        std::string btn = detail::submit_button_for(*st.nav.focused_field);
        if (!btn.empty()) return detail::activate_button(st, ActivateButton{btn, ""});
      }
      EnvState s = st;  // other keys have no app-level effect
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const ScrollBy& sc) {
      EnvState s = st;
      s.nav.scroll_offset = std::max(0, s.nav.scroll_offset + sc.delta_y);
      return detail::done(std::move(s));
    }

    ApplyResult operator()(const NoEffect&) {
      EnvState s = st;
      return detail::done(std::move(s));
    }
  };
  return std::visit(V{state}, control);
}

}  // namespace varapps
