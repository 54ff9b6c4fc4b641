#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "varapps/digest.hpp"
#include "varapps/state.hpp"
#include "varapps/yaml_io.hpp"

namespace varapps {

inline const std::vector<std::string>& app_names() {
  static const std::vector<std::string> names = {"calendar", "todo",       "messenger",
                                                 "maps",     "codeeditor", "shop"};
  return names;
}

struct ConfigError : std::runtime_error {
  std::vector<std::string> errors;
  explicit ConfigError(std::vector<std::string> errs)
      : std::runtime_error(errs.empty() ? "invalid config" : errs.front()), errors(std::move(errs)) {}
};

// The validated configuration tree for all six apps plus globals.
// Kept as a structured tree so variations can patch arbitrary key paths.
struct AppConfigSet {
  ojson tree;

  const ojson& app(const std::string& name) const { return tree.at("apps").at(name); }
  const ojson& style(const std::string& name) const { return app(name).at("style"); }
  const ojson& content(const std::string& name) const { return app(name).at("content"); }
  std::string today() const { return tree.at("globals").at("today").get<std::string>(); }
  std::string yaml() const { return emit_yaml(tree); }
  std::string digest() const { return hex_digest(yaml()); }

  friend bool operator==(const AppConfigSet& a, const AppConfigSet& b) {
    return a.tree == b.tree;
  }
};

// ---- schema validation -----------------------------------------------------

namespace cfgdetail {

inline bool is_hex_color(const std::string& s) {
  if (s.size() != 7 && s.size() != 4) return false;
  if (s[0] != '#') return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!isxdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline bool has_css_unit(const std::string& s) {
  // a number followed by a unit suffix, or a bare percentage
  static const std::vector<std::string> units = {"px", "rem", "em", "%", "pt"};
  for (const auto& u : units) {
    if (s.size() > u.size() && s.compare(s.size() - u.size(), u.size(), u) == 0) {
      std::string num = s.substr(0, s.size() - u.size());
      if (num.empty()) return false;
      bool ok = true;
      for (char c : num)
        if (!isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ' ') ok = false;
      if (ok) return true;
    }
  }
  return false;
}

// css sizes may be space-separated shorthand, e.g. "0.5rem 1rem"
inline bool valid_size(const std::string& s) {
  if (s == "0") return true;
  size_t start = 0;
  while (start < s.size()) {
    size_t sp = s.find(' ', start);
    std::string part = s.substr(start, sp == std::string::npos ? std::string::npos : sp - start);
    if (!part.empty() && !has_css_unit(part) && part != "0") return false;
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return true;
}

struct Ctx {
  std::vector<std::string>* errors;
  void err(const std::string& path, const std::string& msg) {
    errors->push_back(path + ": " + msg);
  }
};

inline void check_keys(const ojson& o, const std::string& path,
                       const std::set<std::string>& required,
                       const std::set<std::string>& optional, Ctx& ctx) {
  if (!o.is_object()) {
    ctx.err(path, "expected a mapping");
    return;
  }
  for (auto it = o.begin(); it != o.end(); ++it)
    if (!required.count(it.key()) && !optional.count(it.key()))
      ctx.err(path + "." + it.key(), "unknown key");
  for (const auto& k : required)
    if (!o.contains(k)) ctx.err(path + "." + k, "missing required key");
}

inline void check_string_map(const ojson& o, const std::string& path, Ctx& ctx) {
  if (!o.is_object()) {
    ctx.err(path, "expected a mapping of strings");
    return;
  }
  for (auto it = o.begin(); it != o.end(); ++it)
    if (!it.value().is_string()) ctx.err(path + "." + it.key(), "expected string");
}

inline void check_style(const ojson& st, const std::string& path, Ctx& ctx) {
  check_keys(st, path, {"colors", "typography", "buttons", "layout"},
             {"placeholders", "aria_labels"}, ctx);
  if (!st.is_object()) return;
  if (st.contains("colors")) {
    const ojson& c = st["colors"];
    check_keys(c, path + ".colors",
               {"primary", "primary_hover", "secondary", "background", "text", "error", "border"},
               {}, ctx);
    if (c.is_object())
      for (auto it = c.begin(); it != c.end(); ++it)
        if (!it.value().is_string() || !is_hex_color(it.value().get<std::string>()))
          ctx.err(path + ".colors." + it.key(), "expected hex color like '#1095c1'");
  }
  if (st.contains("typography")) {
    const ojson& t = st["typography"];
    check_keys(t, path + ".typography",
               {"font_family", "heading_font", "base_font_size", "heading_size"}, {}, ctx);
    if (t.is_object()) {
      for (const char* k : {"base_font_size", "heading_size"})
        if (t.contains(k) &&
            (!t[k].is_string() || !valid_size(t[k].get<std::string>())))
          ctx.err(path + ".typography." + k, "expected a size with css unit");
      for (const char* k : {"font_family", "heading_font"})
        if (t.contains(k) && !t[k].is_string())
          ctx.err(path + ".typography." + k, "expected string");
    }
  }
  if (st.contains("buttons")) {
    const ojson& b = st["buttons"];
    check_keys(b, path + ".buttons", {"border_radius", "padding"}, {}, ctx);
    if (b.is_object())
      for (auto it = b.begin(); it != b.end(); ++it)
        if (!it.value().is_string() || !valid_size(it.value().get<std::string>()))
          ctx.err(path + ".buttons." + it.key(), "expected a size with css unit");
  }
  if (st.contains("layout")) {
    const ojson& l = st["layout"];
    check_keys(l, path + ".layout", {"container_width", "spacing"}, {}, ctx);
    if (l.is_object())
      for (auto it = l.begin(); it != l.end(); ++it)
        if (!it.value().is_string() || !valid_size(it.value().get<std::string>()))
          ctx.err(path + ".layout." + it.key(), "expected a size with css unit");
  }
  if (st.contains("placeholders")) check_string_map(st["placeholders"], path + ".placeholders", ctx);
  if (st.contains("aria_labels")) check_string_map(st["aria_labels"], path + ".aria_labels", ctx);
}

inline void check_nonempty_string(const ojson& o, const std::string& key, const std::string& path,
                                  Ctx& ctx) {
  if (!o.contains(key) || !o[key].is_string() || trim_copy(o[key].get<std::string>()).empty())
    ctx.err(path + "." + key, "expected non-empty string");
}

inline void check_files(const ojson& n, const std::string& path, Ctx& ctx) {
  check_keys(n, path, {"kind", "name"}, {"children"}, ctx);
  if (!n.is_object()) return;
  std::string kind = n.value("kind", "");
  if (kind != "file" && kind != "folder") ctx.err(path + ".kind", "expected 'file' or 'folder'");
  check_nonempty_string(n, "name", path, ctx);
  if (kind == "file" && n.contains("children") && !n["children"].empty())
    ctx.err(path + ".children", "files must not have children");
  if (n.contains("children")) {
    std::set<std::string> seen;
    int i = 0;
    for (const auto& c : n["children"]) {
      std::string cp = path + ".children[" + std::to_string(i++) + "]";
      check_files(c, cp, ctx);
      if (c.is_object() && c.contains("name") && c["name"].is_string()) {
        if (!seen.insert(c["name"].get<std::string>()).second)
          ctx.err(cp + ".name", "duplicate sibling name");
      }
    }
  }
}

inline void check_content(const std::string& app, const ojson& ct, const std::string& path,
                          Ctx& ctx) {
  std::set<std::string> required = {"description", "language"};
  std::set<std::string> optional;
  if (app == "calendar") required.insert("events");
  if (app == "todo") required.insert("todos");
  if (app == "messenger") required.insert("conversations");
  if (app == "maps") required.insert("places");
  if (app == "codeeditor") required.insert("files");
  if (app == "shop") {
    required.insert("products");
    required.insert("cart");
  }
  check_keys(ct, path, required, optional, ctx);
  if (!ct.is_object()) return;

  if (app == "calendar" && ct.contains("events")) {
    int i = 0;
    for (const auto& e : ct["events"]) {
      std::string p = path + ".events[" + std::to_string(i++) + "]";
      check_keys(e, p, {"title", "date"}, {"description", "url", "location", "invitees"}, ctx);
      if (!e.is_object()) continue;
      check_nonempty_string(e, "title", p, ctx);
      if (!e.contains("date") || !e["date"].is_string() ||
          !valid_iso_date(e["date"].get<std::string>()))
        ctx.err(p + ".date", "expected ISO date YYYY-MM-DD");
    }
  }
  if (app == "todo" && ct.contains("todos")) {
    int i = 0;
    for (const auto& t : ct["todos"]) {
      std::string p = path + ".todos[" + std::to_string(i++) + "]";
      check_keys(t, p, {"text", "done"}, {}, ctx);
      if (t.is_object()) {
        check_nonempty_string(t, "text", p, ctx);
        if (t.contains("done") && !t["done"].is_boolean()) ctx.err(p + ".done", "expected bool");
      }
    }
  }
  if (app == "messenger" && ct.contains("conversations")) {
    int i = 0;
    for (const auto& c : ct["conversations"]) {
      std::string p = path + ".conversations[" + std::to_string(i++) + "]";
      check_keys(c, p, {"peer", "messages"}, {}, ctx);
      if (!c.is_object()) continue;
      check_nonempty_string(c, "peer", p, ctx);
      if (c.contains("messages")) {
        int k = 0;
        for (const auto& m : c["messages"]) {
          std::string mp = p + ".messages[" + std::to_string(k++) + "]";
          check_keys(m, mp, {"direction", "body"}, {}, ctx);
          if (!m.is_object()) continue;
          std::string dir = m.value("direction", "");
          if (dir != "sent" && dir != "received")
            ctx.err(mp + ".direction", "expected 'sent' or 'received'");
          check_nonempty_string(m, "body", mp, ctx);
        }
      }
    }
  }
  if (app == "maps" && ct.contains("places")) {
    std::set<std::string> seen;
    int i = 0;
    for (const auto& pl : ct["places"]) {
      std::string p = path + ".places[" + std::to_string(i++) + "]";
      check_keys(pl, p, {"name", "query"}, {}, ctx);
      if (pl.is_object()) {
        check_nonempty_string(pl, "name", p, ctx);
        if (pl.contains("name") && pl["name"].is_string() &&
            !seen.insert(pl["name"].get<std::string>()).second)
          ctx.err(p + ".name", "duplicate place name");
      }
    }
  }
  if (app == "codeeditor" && ct.contains("files")) {
    check_files(ct["files"], path + ".files", ctx);
  }
  if (app == "shop") {
    if (ct.contains("products")) {
      int i = 0;
      for (const auto& pr : ct["products"]) {
        std::string p = path + ".products[" + std::to_string(i++) + "]";
        check_keys(pr, p, {"id", "name"}, {"options"}, ctx);
        if (pr.is_object()) {
          check_nonempty_string(pr, "id", p, ctx);
          check_nonempty_string(pr, "name", p, ctx);
        }
      }
    }
    if (ct.contains("cart")) {
      int i = 0;
      for (const auto& c : ct["cart"]) {
        std::string p = path + ".cart[" + std::to_string(i++) + "]";
        check_keys(c, p, {"product_id"}, {"chosen_options", "quantity"}, ctx);
        if (c.is_object()) {
          check_nonempty_string(c, "product_id", p, ctx);
          if (c.contains("quantity") &&
              (!c["quantity"].is_number_integer() || c["quantity"].get<int>() < 1))
            ctx.err(p + ".quantity", "expected integer >= 1");
        }
      }
    }
  }
}

}  // namespace cfgdetail

inline std::vector<std::string> validate_config_tree(const ojson& tree) {
  std::vector<std::string> errors;
  cfgdetail::Ctx ctx{&errors};
  cfgdetail::check_keys(tree, "config", {"schema_version", "globals", "apps"}, {}, ctx);
  if (!tree.is_object()) return errors;
  if (tree.contains("globals")) {
    cfgdetail::check_keys(tree["globals"], "config.globals", {"today", "home_description"}, {}, ctx);
    const ojson& g = tree["globals"];
    if (g.is_object() && g.contains("today") &&
        (!g["today"].is_string() || !valid_iso_date(g["today"].get<std::string>())))
      ctx.err("config.globals.today", "expected ISO date YYYY-MM-DD");
  }
  if (tree.contains("apps")) {
    std::set<std::string> req(app_names().begin(), app_names().end());
    cfgdetail::check_keys(tree["apps"], "config.apps", req, {}, ctx);
    if (tree["apps"].is_object()) {
      for (const auto& name : app_names()) {
        if (!tree["apps"].contains(name)) continue;
        const ojson& a = tree["apps"][name];
        std::string p = "config.apps." + name;
        cfgdetail::check_keys(a, p, {"style", "content"}, {}, ctx);
        if (a.is_object() && a.contains("style")) cfgdetail::check_style(a["style"], p + ".style", ctx);
        if (a.is_object() && a.contains("content"))
          cfgdetail::check_content(name, a["content"], p + ".content", ctx);
      }
    }
  }
  return errors;
}

inline AppConfigSet load_config_tree(ojson tree) {
  auto errors = validate_config_tree(tree);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return AppConfigSet{std::move(tree)};
}

inline AppConfigSet load_config(const std::string& yaml_text) {
  ojson tree;
  try {
    tree = parse_yaml(yaml_text);
  } catch (const YamlParseError& e) {
    throw ConfigError({"parse error at line " + std::to_string(e.line) + ", column " +
                       std::to_string(e.column) + ": " + e.what()});
  }
  return load_config_tree(std::move(tree));
}

}  // namespace varapps
