#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace varapps {

// Page routes. `external` carries the attempted URL in NavState::external_url.
enum class Route {
  home,
  calendar,
  todo,
  messenger,
  maps,
  codeeditor,
  shop,
  cart,
  external,
};

inline const char* route_name(Route r) {
  switch (r) {
    case Route::home: return "home";
    case Route::calendar: return "calendar";
    case Route::todo: return "todo";
    case Route::messenger: return "messenger";
    case Route::maps: return "maps";
    case Route::codeeditor: return "codeeditor";
    case Route::shop: return "shop";
    case Route::cart: return "cart";
    case Route::external: return "external";
  }
  return "home";
}

inline std::optional<Route> route_from_name(const std::string& s) {
  for (Route r : {Route::home, Route::calendar, Route::todo, Route::messenger,
                  Route::maps, Route::codeeditor, Route::shop, Route::cart,
                  Route::external}) {
    if (s == route_name(r)) return r;
  }
  return std::nullopt;
}

struct CalendarEvent {
  std::string title;        // non-empty after trimming
  std::string date;         // ISO-8601 day, e.g. 2025-07-11
  std::string description;  // markdown, may be empty
  std::string url;
  std::string location;
  std::vector<std::string> invitees;

  friend bool operator==(const CalendarEvent&, const CalendarEvent&) = default;
};

struct TodoItem {
  std::string text;  // non-empty
  bool done = false;

  friend bool operator==(const TodoItem&, const TodoItem&) = default;
};

enum class MsgDirection { sent, received };

struct Message {
  MsgDirection direction = MsgDirection::sent;
  std::string body;   // non-empty
  int64_t seq = 0;    // strictly increasing per conversation

  friend bool operator==(const Message&, const Message&) = default;
};

struct SavedPlace {
  std::string name;   // non-empty, unique in list
  std::string query;  // stored verbatim as entered

  friend bool operator==(const SavedPlace&, const SavedPlace&) = default;
};

struct Product {
  std::string id;
  std::string name;
  // option name -> allowed values, e.g. color -> [orange, black]
  std::map<std::string, std::vector<std::string>> options;

  friend bool operator==(const Product&, const Product&) = default;
};

struct CartItem {
  std::string product_id;
  std::map<std::string, std::string> chosen_options;
  int quantity = 1;

  friend bool operator==(const CartItem&, const CartItem&) = default;
};

enum class FileKind { file, folder };

struct FileNode {
  FileKind kind = FileKind::file;
  std::string name;  // sibling-unique; files carry their extension
  std::vector<FileNode> children;  // folders only

  friend bool operator==(const FileNode&, const FileNode&) = default;
};

// Navigation and in-flight UI state. Everything here except `route` is
// volatile and masked out of canonical serialization.
struct NavState {
  Route route = Route::home;
  std::string external_url;  // set only when route == external
  int scroll_offset = 0;
  std::map<std::string, std::string> pending_form;  // field id -> entered text
  std::optional<std::string> open_dialog;
  std::optional<std::string> focused_field;
  std::vector<Route> back_stack;
  std::vector<Route> forward_stack;

  friend bool operator==(const NavState&, const NavState&) = default;
};

// The complete ground-truth state s_t.
struct EnvState {
  std::vector<CalendarEvent> calendar;
  std::vector<TodoItem> todos;
  std::map<std::string, std::vector<Message>> conversations;  // peer -> msgs
  std::vector<SavedPlace> places;
  std::vector<Product> catalog;
  std::vector<CartItem> cart;
  FileNode files;  // root folder, name "/"
  NavState nav;
  std::string today;  // fixed calendar date from config
  int64_t logical_clock = 0;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

inline std::string trim_copy(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline bool valid_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  int m = (s[5] - '0') * 10 + (s[6] - '0');
  int d = (s[8] - '0') * 10 + (s[9] - '0');
  static const int dim[13] = {0, 31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m >= 1 && m <= 12 && d >= 1 && d <= dim[m];
}

inline const FileNode* find_node(const FileNode& root, const std::string& path) {
  if (path == "/" || path.empty()) return &root;
  const FileNode* cur = &root;
  size_t pos = path[0] == '/' ? 1 : 0;
  while (pos <= path.size()) {
    size_t next = path.find('/', pos);
    std::string part = path.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (part.empty()) break;
    const FileNode* hit = nullptr;
    for (const auto& c : cur->children)
      if (c.name == part) { hit = &c; break; }
    if (!hit) return nullptr;
    cur = hit;
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return cur;
}

inline FileNode* find_node(FileNode& root, const std::string& path) {
  return const_cast<FileNode*>(find_node(static_cast<const FileNode&>(root), path));
}

}  // namespace varapps
