#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace varapps {

// ---- action profiles -------------------------------------------------------

enum class ProfileId { full, visual_only };

inline std::optional<ProfileId> profile_from_name(const std::string& s) {
  if (s == "full") return ProfileId::full;
  if (s == "visual_only") return ProfileId::visual_only;
  return std::nullopt;
}

inline const char* profile_name(ProfileId p) {
  return p == ProfileId::full ? "full" : "visual_only";
}

enum class ParamType { Str, Number };

struct Param {
  std::string name;
  ParamType type = ParamType::Str;
  bool required = true;
};

struct Signature {
  std::string name;
  std::vector<Param> params;
};

// Element-id actions take bids; the visual profile drops them and keeps
// only coordinate and keyboard actions.
inline const std::vector<Signature>& full_signatures() {
  static const std::vector<Signature> sigs = {
      {"click", {{"bid", ParamType::Str}, {"button", ParamType::Str, false}}},
      {"fill", {{"bid", ParamType::Str}, {"value", ParamType::Str}}},
      {"dblclick", {{"bid", ParamType::Str}, {"button", ParamType::Str, false}}},
      {"clear", {{"bid", ParamType::Str}}},
      {"select_option", {{"bid", ParamType::Str}, {"options", ParamType::Str, false}}},
      {"drag_and_drop", {{"from_bid", ParamType::Str}, {"to_bid", ParamType::Str}}},
      {"hover", {{"bid", ParamType::Str}}},
      {"go_back", {}},
      {"go_forward", {}},
      {"goto", {{"url", ParamType::Str}}},
      {"scroll", {{"delta_x", ParamType::Number}, {"delta_y", ParamType::Number}}},
      {"mouse_click",
       {{"x", ParamType::Number}, {"y", ParamType::Number}, {"button", ParamType::Str, false}}},
      {"mouse_dblclick",
       {{"x", ParamType::Number}, {"y", ParamType::Number}, {"button", ParamType::Str, false}}},
      {"mouse_move", {{"x", ParamType::Number}, {"y", ParamType::Number}}},
      {"mouse_down",
       {{"x", ParamType::Number}, {"y", ParamType::Number}, {"button", ParamType::Str, false}}},
      {"mouse_up",
       {{"x", ParamType::Number}, {"y", ParamType::Number}, {"button", ParamType::Str, false}}},
      {"mouse_drag_and_drop",
       {{"from_x", ParamType::Number},
        {"from_y", ParamType::Number},
        {"to_x", ParamType::Number},
        {"to_y", ParamType::Number}}},
      {"mouse_upload_file",
       {{"x", ParamType::Number}, {"y", ParamType::Number}, {"file", ParamType::Str}}},
      {"keyboard_down", {{"key", ParamType::Str}}},
      {"keyboard_up", {{"key", ParamType::Str}}},
      {"keyboard_press", {{"key", ParamType::Str}}},
      {"keyboard_type", {{"text", ParamType::Str}}},
      {"keyboard_insert_text", {{"text", ParamType::Str}}},
  };
  return sigs;
}

inline const std::vector<std::string>& visual_only_names() {
  static const std::vector<std::string> names = {
      "go_back",      "go_forward",    "goto",          "mouse_click",
      "mouse_dblclick", "scroll",      "mouse_move",    "mouse_down",
      "mouse_up",     "mouse_drag_and_drop", "mouse_upload_file", "keyboard_down",
      "keyboard_up",  "keyboard_press", "keyboard_type", "keyboard_insert_text"};
  return names;
}

inline std::vector<Signature> action_signatures(ProfileId profile) {
  if (profile == ProfileId::full) return full_signatures();
  std::vector<Signature> out;
  for (const auto& sig : full_signatures())
    for (const auto& n : visual_only_names())
      if (sig.name == n) out.push_back(sig);
  return out;
}

inline const Signature* find_signature(ProfileId profile, const std::string& name) {
  if (profile == ProfileId::visual_only) {
    bool allowed = false;
    for (const auto& n : visual_only_names())
      if (n == name) allowed = true;
    if (!allowed) return nullptr;
  }
  for (const auto& sig : full_signatures())
    if (sig.name == name) return &sig;
  return nullptr;
}

// ---- parsed values ---------------------------------------------------------

struct ArgValue {
  ParamType type = ParamType::Str;
  std::string str;
  double num = 0;

  friend bool operator==(const ArgValue&, const ArgValue&) = default;
};

struct Action {
  std::string name;
  std::map<std::string, ArgValue> args;  // param name -> value

  std::string str_arg(const std::string& k, const std::string& dflt = "") const {
    auto it = args.find(k);
    return it == args.end() ? dflt : it->second.str;
  }
  double num_arg(const std::string& k, double dflt = 0) const {
    auto it = args.find(k);
    return it == args.end() ? dflt : it->second.num;
  }
  bool has_arg(const std::string& k) const { return args.count(k) != 0; }

  friend bool operator==(const Action&, const Action&) = default;
};

enum class InvalidCategory { malformed, unknown_action, bad_arguments };

inline const char* invalid_category_name(InvalidCategory c) {
  switch (c) {
    case InvalidCategory::malformed: return "malformed";
    case InvalidCategory::unknown_action: return "unknown_action";
    case InvalidCategory::bad_arguments: return "bad_arguments";
  }
  return "malformed";
}

struct InvalidAction {
  std::string raw;
  InvalidCategory category = InvalidCategory::malformed;
  std::string detail;
};

using ParseResult = std::variant<Action, InvalidAction>;

inline bool is_valid_action(const ParseResult& r) { return std::holds_alternative<Action>(r); }

// ---- parsing ---------------------------------------------------------------
//
// Grammar:  call  := name '(' args ')'
//           args  := [ arg (',' arg)* ]
//           arg   := [ name '=' ] value
//           value := quoted string | number | bool | bare identifier
// Bare identifiers survive tokenization but fail binding (bad_arguments).
// Anything after the closing paren besides whitespace is malformed; the
// parser is total and never throws.

namespace actdetail {

struct Token {
  enum Kind { Str, Num, Bool, Ident } kind = Ident;
  std::string text;
  double num = 0;
  bool bval = false;
};

struct RawArg {
  std::string kw;  // empty for positional
  Token value;
};

inline void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline bool lex_ident(const std::string& s, size_t& i, std::string& out) {
  size_t start = i;
  if (i < s.size() && (isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
    ++i;
    while (i < s.size() && (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    out = s.substr(start, i - start);
    return true;
  }
  return false;
}

inline bool lex_token(const std::string& s, size_t& i, Token& tok) {
  skip_ws(s, i);
  if (i >= s.size()) return false;
  char c = s[i];
  if (c == '\'' || c == '"') {
    char q = c;
    ++i;
    std::string out;
    while (i < s.size() && s[i] != q) {
      if (s[i] == '\\' && i + 1 < s.size()) {
        char e = s[i + 1];
        if (e == 'n') out += '\n';
        else if (e == 't') out += '\t';
        else out += e;
        i += 2;
      } else {
        out += s[i++];
      }
    }
    if (i >= s.size()) return false;  // unterminated
    ++i;
    tok = {Token::Str, out, 0, false};
    return true;
  }
  if (isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
    size_t start = i;
    if (c == '-' || c == '+') ++i;
    bool digits = false, dot = false;
    while (i < s.size() &&
           (isdigit(static_cast<unsigned char>(s[i])) || (s[i] == '.' && !dot))) {
      if (s[i] == '.') dot = true;
      else digits = true;
      ++i;
    }
    if (!digits) return false;
    std::string text = s.substr(start, i - start);
    tok = {Token::Num, text, std::stod(text), false};
    return true;
  }
  std::string ident;
  if (lex_ident(s, i, ident)) {
    if (ident == "true" || ident == "True") {
      tok = {Token::Bool, ident, 0, true};
    } else if (ident == "false" || ident == "False") {
      tok = {Token::Bool, ident, 0, false};
    } else {
      tok = {Token::Ident, ident, 0, false};
    }
    return true;
  }
  return false;
}

// split the argument text on top-level commas, respecting quotes
inline bool split_args(const std::string& body, std::vector<std::string>& out) {
  std::string cur;
  char quote = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (quote) {
      cur += c;
      if (c == '\\' && i + 1 < body.size()) cur += body[++i];
      else if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
      cur += c;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quote) return false;  // unterminated string
  out.push_back(cur);
  return true;
}

inline bool parse_one_arg(const std::string& item, RawArg& out, std::string& err) {
  size_t i = 0;
  skip_ws(item, i);
  // optional keyword prefix
  size_t save = i;
  std::string ident;
  if (lex_ident(item, i, ident)) {
    size_t j = i;
    skip_ws(item, j);
    if (j < item.size() && item[j] == '=' && (j + 1 >= item.size() || item[j + 1] != '=')) {
      out.kw = ident;
      i = j + 1;
    } else {
      i = save;  // not a kwarg, re-lex as value
    }
  }
  if (!lex_token(item, i, out.value)) {
    err = "cannot read argument '" + item + "'";
    return false;
  }
  skip_ws(item, i);
  if (i != item.size()) {
    err = "unexpected text after argument in '" + item + "'";
    return false;
  }
  return true;
}

inline std::optional<ArgValue> coerce(const Token& tok, ParamType type) {
  if (type == ParamType::Str) {
    if (tok.kind == Token::Str) return ArgValue{ParamType::Str, tok.text, 0};
    if (tok.kind == Token::Num && tok.text.find('.') == std::string::npos &&
        tok.text.find('-') == std::string::npos)
      return ArgValue{ParamType::Str, tok.text, 0};  // bare int bids, e.g. click(47)
    return std::nullopt;
  }
  if (tok.kind == Token::Num) return ArgValue{ParamType::Number, "", tok.num};
  return std::nullopt;
}

}  // namespace actdetail

inline ParseResult parse_action(const std::string& raw, ProfileId profile = ProfileId::full) {
  using namespace actdetail;
  auto invalid = [&](InvalidCategory cat, const std::string& detail) {
    return ParseResult(InvalidAction{raw, cat, detail});
  };

  size_t i = 0;
  skip_ws(raw, i);
  std::string name;
  if (!lex_ident(raw, i, name))
    return invalid(InvalidCategory::malformed, "expected an action name");
  skip_ws(raw, i);
  if (i >= raw.size() || raw[i] != '(')
    return invalid(InvalidCategory::malformed, "expected '(' after action name");
  ++i;

  // find the matching close paren, respecting quotes
  size_t depth = 1;
  char quote = 0;
  size_t body_start = i;
  size_t close = std::string::npos;
  for (; i < raw.size(); ++i) {
    char c = raw[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (--depth == 0) {
        close = i;
        break;
      }
    }
  }
  if (close == std::string::npos)
    return invalid(InvalidCategory::malformed, "unbalanced parentheses");
  std::string body = raw.substr(body_start, close - body_start);
  size_t after = close + 1;
  skip_ws(raw, after);
  if (after != raw.size())
    return invalid(InvalidCategory::malformed, "unexpected text after the call");

  const Signature* sig = find_signature(profile, name);
  if (!sig)
    return invalid(InvalidCategory::unknown_action,
                   "'" + name + "' is not an available action");

  bool body_blank = true;
  for (char c : body)
    if (!isspace(static_cast<unsigned char>(c))) body_blank = false;

  std::vector<RawArg> rawargs;
  if (!body_blank) {
    std::vector<std::string> items;
    if (!split_args(body, items))
      return invalid(InvalidCategory::malformed, "unterminated string literal");
    for (const auto& item : items) {
      RawArg a;
      std::string err;
      if (!parse_one_arg(item, a, err)) return invalid(InvalidCategory::malformed, err);
      rawargs.push_back(std::move(a));
    }
  }

  // bind positionals then keywords
  Action act;
  act.name = name;
  size_t pos = 0;
  bool seen_kw = false;
  for (const auto& a : rawargs) {
    const Param* param = nullptr;
    if (a.kw.empty()) {
      if (seen_kw)
        return invalid(InvalidCategory::bad_arguments,
                       "positional argument after keyword argument");
      if (pos >= sig->params.size())
        return invalid(InvalidCategory::bad_arguments, "too many arguments for " + name);
      param = &sig->params[pos++];
    } else {
      seen_kw = true;
      for (const auto& p : sig->params)
        if (p.name == a.kw) param = &p;
      if (!param)
        return invalid(InvalidCategory::bad_arguments,
                       name + " has no argument '" + a.kw + "'");
    }
    if (act.args.count(param->name))
      return invalid(InvalidCategory::bad_arguments, "duplicate argument '" + param->name + "'");
    if (a.value.kind == Token::Ident)
      return invalid(InvalidCategory::bad_arguments,
                     "'" + a.value.text + "' is not a literal value");
    auto v = coerce(a.value, param->type);
    if (!v)
      return invalid(InvalidCategory::bad_arguments,
                     "argument '" + param->name + "' has the wrong type");
    act.args[param->name] = *v;
  }
  for (const auto& p : sig->params)
    if (p.required && !act.args.count(p.name))
      return invalid(InvalidCategory::bad_arguments, "missing argument '" + p.name + "'");
  return act;
}

// canonical text form; re-parsing yields an equal Action
inline std::string format_action(const Action& a) {
  const Signature* sig = find_signature(ProfileId::full, a.name);
  std::string out = a.name + "(";
  bool first = true;
  auto emit = [&](const Param& p, const ArgValue& v, bool kw) {
    if (!first) out += ", ";
    first = false;
    if (kw) out += p.name + "=";
    if (v.type == ParamType::Str) {
      out += '\'';
      for (char c : v.str) {
        if (c == '\\' || c == '\'') out += '\\';
        if (c == '\n') { out += "\\n"; continue; }
        out += c;
      }
      out += '\'';
    } else if (v.num == std::floor(v.num) && std::abs(v.num) < 1e15) {
      out += std::to_string(static_cast<long long>(v.num));
    } else {
      out += std::to_string(v.num);
    }
  };
  if (sig)
    for (const auto& p : sig->params) {
      auto it = a.args.find(p.name);
      if (it != a.args.end()) emit(p, it->second, !p.required);
    }
  out += ")";
  return out;
}

}  // namespace varapps
