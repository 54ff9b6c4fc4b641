#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "varapps/actions.hpp"
#include "varapps/config.hpp"
#include "varapps/controls.hpp"
#include "varapps/transition.hpp"

namespace varapps {

struct Viewport {
  int width = 1280;
  int height = 720;

  static Viewport FHD() { return {1920, 1080}; }
  static Viewport HD() { return {1280, 720}; }
  static Viewport HVGA() { return {480, 320}; }

  friend bool operator==(const Viewport&, const Viewport&) = default;
};

inline std::optional<Viewport> viewport_from_name(const std::string& s) {
  if (s == "fhd" || s == "FHD") return Viewport::FHD();
  if (s == "hd" || s == "HD") return Viewport::HD();
  if (s == "hvga" || s == "HVGA") return Viewport::HVGA();
  return std::nullopt;
}

enum class UiRole { button, link, textbox, checkbox, option, listitem, section, heading, image, text };

inline const char* role_name(UiRole r) {
  switch (r) {
    case UiRole::button: return "button";
    case UiRole::link: return "link";
    case UiRole::textbox: return "textbox";
    case UiRole::checkbox: return "checkbox";
    case UiRole::option: return "option";
    case UiRole::listitem: return "listitem";
    case UiRole::section: return "section";
    case UiRole::heading: return "heading";
    case UiRole::image: return "image";
    case UiRole::text: return "text";
  }
  return "text";
}

struct UiNode {
  std::string bid;
  UiRole role = UiRole::text;
  std::string label;
  int x = 0, y = 0, w = 0, h = 0;
  bool interactive = false;
  std::vector<UiNode> children;

  // semantic binding, engine-internal
  std::optional<SemanticControl> control;
  std::string field_id;  // textbox / select binding
  bool row = false;      // children lay out horizontally
};

struct Observation {
  UiNode root;
  std::string ax_tree;
  std::string html;
  int scroll_offset = 0;
  Viewport viewport;
  std::string url;
  int page_height = 0;
};

// ---- style metrics ---------------------------------------------------------

namespace laydetail {

inline double css_px(const std::string& s, double dflt) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    std::string unit = trim_copy(s.substr(pos));
    if (unit == "px" || unit.empty()) return v;
    if (unit == "rem" || unit == "em") return v * 16.0;
    if (unit == "pt") return v * 4.0 / 3.0;
    return dflt;
  } catch (...) {
    return dflt;
  }
}

struct Metrics {
  int font_px = 16;
  int heading_px = 24;
  int spacing = 16;
  int row_h = 32;
  int char_w = 9;
  std::string font_family;
};

inline Metrics metrics_for(const ojson& style) {
  Metrics m;
  const ojson& ty = style.at("typography");
  m.font_px = static_cast<int>(css_px(ty.at("base_font_size").get<std::string>(), 16));
  m.heading_px = static_cast<int>(css_px(ty.at("heading_size").get<std::string>(), 24));
  m.spacing = static_cast<int>(css_px(style.at("layout").at("spacing").get<std::string>(), 16));
  m.font_family = ty.at("font_family").get<std::string>();
  m.row_h = m.font_px * 2;
  // script faces render taller; geometry must feel the font choice
  if (m.font_family.find("Brush Script") != std::string::npos) m.row_h += m.font_px / 2;
  m.char_w = std::max(6, m.font_px * 3 / 5);
  return m;
}

}  // namespace laydetail

// ---- page building ---------------------------------------------------------

namespace laydetail {

inline UiNode leaf(UiRole role, std::string label, std::optional<SemanticControl> ctl = {},
                   std::string field = "") {
  UiNode n;
  n.role = role;
  n.label = std::move(label);
  n.interactive = ctl.has_value() || role == UiRole::textbox;
  n.control = std::move(ctl);
  n.field_id = std::move(field);
  return n;
}

inline UiNode section(std::string label, std::vector<UiNode> kids) {
  UiNode n;
  n.role = UiRole::section;
  n.label = std::move(label);
  n.children = std::move(kids);
  return n;
}

inline UiNode rowitem(std::string label, std::vector<UiNode> kids) {
  UiNode n;
  n.role = UiRole::listitem;
  n.label = std::move(label);
  n.children = std::move(kids);
  n.row = true;
  return n;
}

inline std::string aria(const ojson& style, const std::string& key, const std::string& dflt) {
  if (style.contains("aria_labels") && style["aria_labels"].contains(key))
    return style["aria_labels"][key].get<std::string>();
  return dflt;
}

inline UiNode textbox(const ojson& style, const std::string& field, const std::string& dflt_label) {
  UiNode n = leaf(UiRole::textbox, aria(style, field, dflt_label), FocusField{field}, field);
  return n;
}

inline UiNode home_link() {
  return leaf(UiRole::link, "Home", SemanticControl(Navigate{Route::home}));
}

inline void options_summary(const Product&, std::string&) {}

inline std::string join_options(const std::map<std::string, std::string>& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    if (!out.empty()) out += ", ";
    out += k + "=" + v;
  }
  return out;
}

inline void build_file_items(const FileNode& n, const std::string& path, int depth,
                             std::vector<UiNode>& out) {
  for (const auto& c : n.children) {
    std::string cpath = (path == "/" ? "/" : path + "/") + c.name;
    std::string tag = c.kind == FileKind::folder ? "[dir] " : "";
    out.push_back(rowitem(std::string(static_cast<size_t>(depth) * 2, ' ') + tag + c.name,
                          {leaf(UiRole::text, tag + c.name),
                           leaf(UiRole::button, "Delete " + c.name,
                                SemanticControl(ActivateButton{"delete-node", cpath}))}));
    if (c.kind == FileKind::folder) build_file_items(c, cpath, depth + 1, out);
  }
}

inline UiNode build_page(const EnvState& s, const AppConfigSet& cfg) {
  Route r = s.nav.route;
  std::vector<UiNode> top;

  auto description = [&](const std::string& app) {
    return leaf(UiRole::text, cfg.content(app).at("description").get<std::string>());
  };

  switch (r) {
    case Route::home: {
      top.push_back(leaf(UiRole::heading, "OpenApps"));
      top.push_back(
          leaf(UiRole::text, cfg.tree.at("globals").at("home_description").get<std::string>()));
      const std::vector<std::pair<std::string, Route>> links = {
          {"OpenCalendar", Route::calendar}, {"OpenToDo", Route::todo},
          {"OpenMessenger", Route::messenger}, {"OpenMaps", Route::maps},
          {"OpenCodeEditor", Route::codeeditor}, {"OpenShop", Route::shop}};
      std::vector<UiNode> cards;
      for (const auto& [label, route] : links)
        cards.push_back(leaf(UiRole::link, label, SemanticControl(Navigate{route})));
      top.push_back(section("Apps", std::move(cards)));
      break;
    }

    case Route::calendar: {
      const ojson& style = cfg.style("calendar");
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "OpenCalendar"));
      top.push_back(description("calendar"));
      std::vector<UiNode> items;
      auto order = calendar_display_order(s);
      for (size_t di = 0; di < order.size(); ++di) {
        const CalendarEvent& e = s.calendar[order[di]];
        std::string head = e.title + " (" + e.date + ")";
        std::vector<UiNode> kids = {leaf(UiRole::text, head)};
        if (!e.description.empty()) kids.push_back(leaf(UiRole::text, e.description));
        kids.push_back(leaf(UiRole::button, "Delete " + e.title,
                            SemanticControl(ActivateButton{"delete-event", std::to_string(di)})));
        items.push_back(rowitem(head, std::move(kids)));
      }
      top.push_back(section("Events", std::move(items)));
      top.push_back(section(
          "Add Event",
          {textbox(style, "event-title", "Event title"), textbox(style, "event-date", "Event date"),
           textbox(style, "event-description", "Event description"),
           textbox(style, "event-url", "Event URL"),
           textbox(style, "event-location", "Event location"),
           textbox(style, "event-invitees", "Event invitees"),
           leaf(UiRole::button, "Add Event", SemanticControl(ActivateButton{"add-event", ""}))}));
      break;
    }

    case Route::todo: {
      const ojson& style = cfg.style("todo");
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "OpenToDo"));
      top.push_back(description("todo"));
      std::vector<UiNode> items;
      for (size_t i = 0; i < s.todos.size(); ++i) {
        const TodoItem& t = s.todos[i];
        items.push_back(rowitem(
            t.text,
            {leaf(UiRole::checkbox, t.text + (t.done ? " (done)" : ""),
                  SemanticControl(ActivateButton{"toggle-todo", std::to_string(i)})),
             leaf(UiRole::button, "Delete " + t.text,
                  SemanticControl(ActivateButton{"delete-todo", std::to_string(i)}))}));
      }
      top.push_back(section("Todos", std::move(items)));
      top.push_back(section("Add Todo",
                            {textbox(style, "todo-text", "New todo"),
                             leaf(UiRole::button, "Add Todo",
                                  SemanticControl(ActivateButton{"add-todo", ""}))}));
      break;
    }

    case Route::messenger: {
      const ojson& style = cfg.style("messenger");
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "OpenMessenger"));
      top.push_back(description("messenger"));
      for (const auto& [peer, msgs] : s.conversations) {
        std::vector<UiNode> items;
        for (const auto& m : msgs)
          items.push_back(leaf(UiRole::text, std::string(m.direction == MsgDirection::sent
                                                             ? "sent: "
                                                             : "received: ") +
                                                 m.body));
        top.push_back(section("Conversation with " + peer, std::move(items)));
      }
      std::vector<UiNode> form;
      for (const auto& [peer, _] : s.conversations)
        form.push_back(leaf(UiRole::option, "To " + peer,
                            SemanticControl(SelectOption{"msg-peer", peer}), "msg-peer"));
      form.push_back(textbox(style, "msg-body", "Message"));
      form.push_back(
          leaf(UiRole::button, "Send", SemanticControl(ActivateButton{"send-message", ""})));
      top.push_back(section("Send Message", std::move(form)));
      break;
    }

    case Route::maps: {
      const ojson& style = cfg.style("maps");
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "OpenMaps"));
      top.push_back(description("maps"));
      top.push_back(leaf(UiRole::image, "Map"));
      std::vector<UiNode> items;
      for (const auto& p : s.places)
        items.push_back(rowitem(
            p.name, {leaf(UiRole::text, p.name),
                     leaf(UiRole::button, "Delete " + p.name,
                          SemanticControl(ActivateButton{"delete-place", p.name}))}));
      top.push_back(section("Saved Locations", std::move(items)));
      top.push_back(section("Save a Place",
                            {textbox(style, "place-query", "Search places"),
                             leaf(UiRole::button, "Save",
                                  SemanticControl(ActivateButton{"save-place", ""}))}));
      break;
    }

    case Route::codeeditor: {
      const ojson& style = cfg.style("codeeditor");
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "OpenCodeEditor"));
      top.push_back(description("codeeditor"));
      std::vector<UiNode> items;
      build_file_items(s.files, "/", 0, items);
      top.push_back(section("Files", std::move(items)));
      std::vector<UiNode> form;
      form.push_back(textbox(style, "file-name", "File name"));
      std::vector<std::string> folders;
      collect_folders(s.files, "", folders);
      for (const auto& f : folders)
        form.push_back(leaf(UiRole::option, "In " + f,
                            SemanticControl(SelectOption{"file-folder", f}), "file-folder"));
      form.push_back(leaf(UiRole::button, "Create File",
                          SemanticControl(ActivateButton{"create-file", ""})));
      top.push_back(section("New File", std::move(form)));
      break;
    }

    case Route::shop: {
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "OpenShop"));
      top.push_back(description("shop"));
      top.push_back(leaf(UiRole::link, "Cart", SemanticControl(Navigate{Route::cart})));
      std::vector<UiNode> items;
      for (const auto& p : s.catalog) {
        std::vector<UiNode> kids = {leaf(UiRole::text, p.name)};
        for (const auto& [opt, vals] : p.options)
          for (const auto& v : vals) {
            std::string field = "opt:" + p.id + ":" + opt;
            kids.push_back(leaf(UiRole::option, p.name + " " + opt + ": " + v,
                                SemanticControl(SelectOption{field, v}), field));
          }
        kids.push_back(leaf(UiRole::button, "Add to Cart: " + p.name,
                            SemanticControl(ActivateButton{"add-to-cart", p.id})));
        items.push_back(rowitem(p.name, std::move(kids)));
      }
      top.push_back(section("Products", std::move(items)));
      break;
    }

    case Route::cart: {
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "Cart"));
      top.push_back(leaf(UiRole::link, "Shop", SemanticControl(Navigate{Route::shop})));
      std::vector<UiNode> items;
      auto order = cart_display_order(s);
      for (size_t di = 0; di < order.size(); ++di) {
        const CartItem& c = s.cart[order[di]];
        std::string pname = c.product_id;
        for (const auto& p : s.catalog)
          if (p.id == c.product_id) pname = p.name;
        std::string head = pname + " x" + std::to_string(c.quantity);
        if (!c.chosen_options.empty()) head += " (" + join_options(c.chosen_options) + ")";
        items.push_back(
            rowitem(head, {leaf(UiRole::text, head),
                           leaf(UiRole::button, "Remove " + pname,
                                SemanticControl(
                                    ActivateButton{"remove-cart-item", std::to_string(di)}))}));
      }
      top.push_back(section("Cart Items", std::move(items)));
      top.push_back(
          leaf(UiRole::button, "Clear Cart", SemanticControl(ActivateButton{"clear-cart", ""})));
      break;
    }

    case Route::external: {
      top.push_back(home_link());
      top.push_back(leaf(UiRole::heading, "External Page"));
      top.push_back(leaf(UiRole::text, "You left OpenApps: " + s.nav.external_url));
      break;
    }
  }

  UiNode root;
  root.role = UiRole::section;
  root.label = "OpenApps";
  root.children = std::move(top);
  return root;
}

// ---- geometry --------------------------------------------------------------

inline int leaf_width(const UiNode& n, const Metrics& m, int content_w) {
  int len = static_cast<int>(n.label.size());
  switch (n.role) {
    case UiRole::checkbox: return m.char_w * len + m.row_h;  // box + label
    case UiRole::button: return m.char_w * len + m.spacing * 2;
    case UiRole::option: return m.char_w * len + m.spacing;
    case UiRole::textbox: return std::max(160, content_w / 2);
    case UiRole::link: return m.char_w * len + m.spacing;
    case UiRole::image: return std::min(content_w, 320);
    default: return std::min(content_w, m.char_w * std::max(len, 1));
  }
}

inline int leaf_height(const UiNode& n, const Metrics& m) {
  switch (n.role) {
    case UiRole::heading: return m.heading_px + m.spacing;
    case UiRole::image: return 160;
    default: return m.row_h;
  }
}

// vertical flow, rows horizontal; returns the node height
inline int layout_node(UiNode& n, int x, int y, const Metrics& m, int content_w) {
  n.x = x;
  n.y = y;
  if (n.children.empty()) {
    n.w = std::max(10, std::min(leaf_width(n, m, content_w), content_w));
    n.h = leaf_height(n, m);
    return n.h;
  }
  if (n.row) {
    int cx = x + m.spacing / 2;
    int rh = 0;
    for (UiNode& c : n.children) {
      c.x = cx;
      c.y = y + m.spacing / 4;
      c.w = std::max(10, leaf_width(c, m, content_w));
      c.h = leaf_height(c, m);
      cx += c.w + m.spacing / 2;
      rh = std::max(rh, c.h);
    }
    n.w = std::max(cx - x, 10);
    n.h = rh + m.spacing / 2;
    return n.h;
  }
  // section: children stacked with a small indent
  int indent = m.spacing / 2;
  int cy = y + (n.label.empty() ? 0 : m.row_h);  // header strip for labeled sections
  int maxw = content_w;
  for (UiNode& c : n.children) {
    int h = layout_node(c, x + indent, cy, m, content_w - indent);
    cy += h + m.spacing / 2;
    maxw = std::max(maxw, c.x + c.w - x);
  }
  n.w = maxw;
  n.h = cy - y;
  return n.h;
}

inline void assign_bids_rec(UiNode& n, int& counter) {
  n.bid = std::to_string(counter++);
  for (UiNode& c : n.children) assign_bids_rec(c, counter);
}

inline void ax_text_rec(const UiNode& n, int depth, std::string& out) {
  out += std::string(static_cast<size_t>(depth) * 2, ' ');
  out += n.bid;
  out += ' ';
  out += role_name(n.role);
  out += " '";
  for (char c : n.label) {
    if (c == '\'' || c == '\\') out += '\\';
    if (c == '\n') { out += "\\n"; continue; }
    out += c;
  }
  out += "'\n";
  for (const UiNode& c : n.children) ax_text_rec(c, depth + 1, out);
}

inline void html_escape(const std::string& s, std::string& out) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

inline void html_rec(const UiNode& n, std::string& out) {
  const char* tag = "div";
  std::string extra;
  switch (n.role) {
    case UiRole::button: tag = "button"; break;
    case UiRole::link: tag = "a"; extra = " href=\"#\""; break;
    case UiRole::textbox: tag = "input"; break;
    case UiRole::checkbox: tag = "input"; extra = " type=\"checkbox\""; break;
    case UiRole::option: tag = "button"; extra = " class=\"option\""; break;
    case UiRole::listitem: tag = "li"; break;
    case UiRole::section: tag = "section"; break;
    case UiRole::heading: tag = "h1"; break;
    case UiRole::image: tag = "div"; extra = " class=\"image\""; break;
    case UiRole::text: tag = "p"; break;
  }
  out += "<";
  out += tag;
  out += extra;
  out += " data-bid=\"" + n.bid + "\" aria-label=\"";
  html_escape(n.label, out);
  out += "\"";
  if (n.role == UiRole::textbox) {
    out += " placeholder=\"";
    html_escape(n.label, out);
    out += "\">";
    return;  // void element
  }
  out += ">";
  if (n.children.empty() && n.role != UiRole::checkbox) html_escape(n.label, out);
  for (const UiNode& c : n.children) html_rec(c, out);
  out += "</";
  out += tag;
  out += ">";
}

inline std::string render_html(const UiNode& root, const ojson& style, const std::string& title) {
  const ojson& colors = style.at("colors");
  const ojson& ty = style.at("typography");
  const ojson& buttons = style.at("buttons");
  std::string out = "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>";
  html_escape(title, out);
  out += "</title><style>\n";
  out += "body{background:" + colors.at("background").get<std::string>() + ";color:" +
         colors.at("text").get<std::string>() + ";font-family:" +
         ty.at("font_family").get<std::string>() + ";font-size:" +
         ty.at("base_font_size").get<std::string>() + ";}\n";
  out += "h1{font-family:" + ty.at("heading_font").get<std::string>() + ";font-size:" +
         ty.at("heading_size").get<std::string>() + ";}\n";
  out += "button{background:" + colors.at("primary").get<std::string>() + ";border:1px solid " +
         colors.at("border").get<std::string>() + ";border-radius:" +
         buttons.at("border_radius").get<std::string>() + ";padding:" +
         buttons.at("padding").get<std::string>() + ";}\n";
  out += "button:hover{background:" + colors.at("primary_hover").get<std::string>() + ";}\n";
  out += "a{color:" + colors.at("primary").get<std::string>() + ";}\n";
  out += ".option{background:" + colors.at("secondary").get<std::string>() + ";}\n";
  out += "</style></head><body>\n";
  html_rec(root, out);
  out += "\n</body></html>\n";
  return out;
}

}  // namespace laydetail

// stable pre-order decimal bids
inline void assign_bids(UiNode& root) {
  int counter = 0;
  laydetail::assign_bids_rec(root, counter);
}

inline std::string ax_tree_text(const UiNode& root) {
  std::string out;
  laydetail::ax_text_rec(root, 0, out);
  return out;
}

inline std::string style_app_for_route(Route r) {
  switch (r) {
    case Route::calendar: return "calendar";
    case Route::todo: return "todo";
    case Route::messenger: return "messenger";
    case Route::maps: return "maps";
    case Route::codeeditor: return "codeeditor";
    case Route::shop:
    case Route::cart: return "shop";
    default: return "todo";  // home/external borrow a neutral style
  }
}

inline std::string route_url(const NavState& nav) {
  if (nav.route == Route::external) return nav.external_url;
  if (nav.route == Route::home) return "app://openapps/";
  return std::string("app://openapps/") + route_name(nav.route);
}

inline Observation render(const EnvState& state, const AppConfigSet& config,
                          const Viewport& viewport) {
  Observation obs;
  obs.viewport = viewport;
  obs.url = route_url(state.nav);

  const ojson& style = config.style(style_app_for_route(state.nav.route));
  laydetail::Metrics m = laydetail::metrics_for(style);
  obs.root = laydetail::build_page(state, config);

  int margin = m.spacing;
  int content_w = std::max(200, viewport.width - 2 * margin);
  laydetail::layout_node(obs.root, margin, margin, m, content_w);
  obs.root.x = 0;
  obs.root.y = 0;
  obs.root.w = std::max(viewport.width, obs.root.w + 2 * margin);
  int bottom = margin;
  for (const UiNode& c : obs.root.children) bottom = std::max(bottom, c.y + c.h);
  obs.page_height = bottom + margin;
  obs.root.h = std::max(obs.page_height, viewport.height);

  assign_bids(obs.root);
  obs.ax_tree = ax_tree_text(obs.root);
  obs.html = laydetail::render_html(obs.root, style, "OpenApps");

  int max_scroll = std::max(0, obs.page_height - viewport.height);
  obs.scroll_offset = std::clamp(state.nav.scroll_offset, 0, max_scroll);
  return obs;
}

// ---- lookup & hit-testing --------------------------------------------------

inline const UiNode* find_bid(const UiNode& n, const std::string& bid) {
  if (n.bid == bid) return &n;
  for (const UiNode& c : n.children)
    if (const UiNode* hit = find_bid(c, bid)) return hit;
  return nullptr;
}

inline const UiNode* find_by_label(const UiNode& n, UiRole role, const std::string& label) {
  if (n.role == role && n.label == label) return &n;
  for (const UiNode& c : n.children)
    if (const UiNode* hit = find_by_label(c, role, label)) return hit;
  return nullptr;
}

inline void collect_interactive(const UiNode& n, std::vector<const UiNode*>& out) {
  if (n.interactive) out.push_back(&n);
  for (const UiNode& c : n.children) collect_interactive(c, out);
}

// deepest interactive node containing the page-space point
inline const UiNode* hit_test(const UiNode& n, int px, int py) {
  const UiNode* best = nullptr;
  if (n.interactive && px >= n.x && px < n.x + n.w && py >= n.y && py < n.y + n.h) best = &n;
  for (const UiNode& c : n.children)
    if (const UiNode* hit = hit_test(c, px, py)) best = hit;
  return best;
}

// ---- raw action -> semantic control ----------------------------------------

struct Resolution {
  std::optional<SemanticControl> control;
  std::optional<Rejection> rejection;

  static Resolution ok(SemanticControl c) { return {std::move(c), std::nullopt}; }
  static Resolution fail(Rejection r) { return {std::nullopt, std::move(r)}; }
};

inline std::optional<Route> route_from_url(const std::string& url) {
  std::string path = url;
  const std::string scheme = "app://openapps";
  if (path.rfind(scheme, 0) == 0) path = path.substr(scheme.size());
  if (path.empty() || path == "/") return Route::home;
  if (path[0] == '/') path = path.substr(1);
  if (!path.empty() && path.back() == '/') path.pop_back();
  if (path == "home") return Route::home;
  auto r = route_from_name(path);
  if (r && *r != Route::external) return r;
  return std::nullopt;
}

inline Resolution resolve(const Observation& ui, const EnvState& state, const Action& a) {
  auto node_control = [&](const UiNode* n) -> Resolution {
    if (!n->interactive)
      return Resolution::fail({"not_interactive", "element " + n->bid + " is not interactive"});
    if (n->control) return Resolution::ok(*n->control);
    return Resolution::fail({"not_interactive", "element " + n->bid + " has no behavior"});
  };

  if (a.name == "click" || a.name == "dblclick") {
    const UiNode* n = find_bid(ui.root, a.str_arg("bid"));
    if (!n) return Resolution::fail({"unknown_bid", "no element with bid " + a.str_arg("bid")});
    return node_control(n);
  }
  if (a.name == "fill" || a.name == "clear") {
    const UiNode* n = find_bid(ui.root, a.str_arg("bid"));
    if (!n) return Resolution::fail({"unknown_bid", "no element with bid " + a.str_arg("bid")});
    if (n->role != UiRole::textbox)
      return Resolution::fail({"not_a_textbox", "element " + n->bid + " is not a text input"});
    std::string value = a.name == "fill" ? a.str_arg("value") : "";
    return Resolution::ok(SetField{n->field_id, value, false});
  }
  if (a.name == "select_option") {
    const UiNode* n = find_bid(ui.root, a.str_arg("bid"));
    if (!n) return Resolution::fail({"unknown_bid", "no element with bid " + a.str_arg("bid")});
    if (n->role != UiRole::option)
      return Resolution::fail({"not_an_option", "element " + n->bid + " is not selectable"});
    return node_control(n);
  }
  if (a.name == "hover" || a.name == "mouse_move" || a.name == "mouse_down" ||
      a.name == "mouse_up" || a.name == "keyboard_down" || a.name == "keyboard_up")
    return Resolution::ok(NoEffect{});
  if (a.name == "drag_and_drop" || a.name == "mouse_drag_and_drop" ||
      a.name == "mouse_upload_file")
    return Resolution::fail({"unsupported", "no drag or upload targets in this environment"});
  if (a.name == "mouse_click" || a.name == "mouse_dblclick") {
    int px = static_cast<int>(a.num_arg("x"));
    int py = static_cast<int>(a.num_arg("y")) + ui.scroll_offset;
    const UiNode* n = hit_test(ui.root, px, py);
    if (!n)
      return Resolution::fail(
          {"no_element_at_point", "no interactive element at (" + std::to_string(px) + "," +
                                      std::to_string(py) + ")"});
    return node_control(n);
  }
  if (a.name == "keyboard_press") return Resolution::ok(KeyPress{a.str_arg("key")});
  if (a.name == "keyboard_type" || a.name == "keyboard_insert_text") {
    if (!state.nav.focused_field)
      return Resolution::fail({"no_focused_field", "no text input is focused"});
    return Resolution::ok(SetField{*state.nav.focused_field, a.str_arg("text"), true});
  }
  if (a.name == "scroll") return Resolution::ok(ScrollBy{static_cast<int>(a.num_arg("delta_y"))});
  if (a.name == "goto") {
    std::string url = a.str_arg("url");
    if (auto r = route_from_url(url)) return Resolution::ok(Navigate{*r});
    Rejection rej{"external_navigation", "navigation outside the environment: " + url};
    rej.external_url = url;
    return Resolution::fail(std::move(rej));
  }
  if (a.name == "go_back") return Resolution::ok(GoBack{});
  if (a.name == "go_forward") return Resolution::ok(GoForward{});
  return Resolution::fail({"unsupported", "action '" + a.name + "' cannot be resolved"});
}

}  // namespace varapps
