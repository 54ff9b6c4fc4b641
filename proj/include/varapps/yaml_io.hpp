#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include <yaml-cpp/yaml.h>

namespace varapps {

using ojson = nlohmann::ordered_json;

// ---- deterministic YAML emission -------------------------------------------
//
// Canonical output rules: UTF-8, LF endings, 2-space indent, keys in
// insertion order of the json tree, all strings double-quoted, empty
// collections inline. This is the bit-exact wire format golden files
// depend on, so the emitter is hand-rolled rather than delegated.

namespace detail {

inline void emit_quoted(const std::string& s, std::string& out) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          static const char* hexd = "0123456789abcdef";
          out += "\\x";
          out += hexd[c >> 4];
          out += hexd[c & 0xf];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

inline void emit_scalar(const ojson& v, std::string& out) {
  if (v.is_string())
    emit_quoted(v.get<std::string>(), out);
  else
    out += v.dump();
}

inline bool is_scalar(const ojson& v) {
  return !v.is_object() && !v.is_array();
}

inline void emit_node(const ojson& v, int indent, std::string& out);

inline void emit_key(const std::string& k, std::string& out) {
  // Config/state keys are plain identifiers; quote defensively otherwise.
  bool plain = !k.empty();
  for (char c : k)
    if (!(isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      plain = false;
  if (plain)
    out += k;
  else
    emit_quoted(k, out);
}

inline void emit_node(const ojson& v, int indent, std::string& out) {
  std::string pad(indent * 2, ' ');
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      out += pad;
      emit_key(it.key(), out);
      out += ':';
      const ojson& cv = it.value();
      if (is_scalar(cv)) {
        out += ' ';
        emit_scalar(cv, out);
        out += '\n';
      } else if (cv.empty()) {
        out += cv.is_array() ? " []\n" : " {}\n";
      } else {
        out += '\n';
        emit_node(cv, indent + 1, out);
      }
    }
  } else if (v.is_array()) {
    for (const ojson& e : v) {
      out += pad;
      out += "- ";
      if (is_scalar(e)) {
        emit_scalar(e, out);
        out += '\n';
      } else if (e.empty()) {
        out += e.is_array() ? "[]\n" : "{}\n";
      } else {
        // first child key on the dash line, rest indented past it
        std::string sub;
        emit_node(e, indent + 1, sub);
        out += sub.substr(pad.size() + 2);
      }
    }
  } else {
    out += pad;
    emit_scalar(v, out);
    out += '\n';
  }
}

}  // namespace detail

inline std::string emit_yaml(const ojson& root) {
  std::string out;
  detail::emit_node(root, 0, out);
  return out;
}

// ---- parsing (yaml-cpp -> ordered_json) ------------------------------------

inline ojson yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
      return ojson(nullptr);
    case YAML::NodeType::Scalar: {
      const std::string& s = n.Scalar();
      if (n.Tag() == "!")  // explicitly quoted in the source
        return ojson(s);
      if (s == "null" || s == "~" || s == "Null" || s == "NULL") return ojson(nullptr);
      if (s == "true" || s == "True") return ojson(true);
      if (s == "false" || s == "False") return ojson(false);
      try {
        size_t pos = 0;
        long long i = std::stoll(s, &pos);
        if (pos == s.size()) return ojson(i);
      } catch (...) {
      }
      try {
        size_t pos = 0;
        double d = std::stod(s, &pos);
        if (pos == s.size()) return ojson(d);
      } catch (...) {
      }
      return ojson(s);
    }
    case YAML::NodeType::Sequence: {
      ojson a = ojson::array();
      for (const auto& e : n) a.push_back(yaml_to_json(e));
      return a;
    }
    case YAML::NodeType::Map: {
      ojson o = ojson::object();
      for (const auto& kv : n) o[kv.first.Scalar()] = yaml_to_json(kv.second);
      return o;
    }
    default:
      return ojson(nullptr);
  }
}

struct YamlParseError : std::runtime_error {
  int line;
  int column;
  YamlParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg), line(l), column(c) {}
};

inline ojson parse_yaml(const std::string& text) {
  try {
    return yaml_to_json(YAML::Load(text));
  } catch (const YAML::ParserException& e) {
    throw YamlParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  } catch (const YAML::Exception& e) {
    throw YamlParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

}  // namespace varapps
