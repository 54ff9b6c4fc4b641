#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "varapps/config.hpp"

namespace varapps {

enum class VariationKind { appearance, content };

struct Patch {
  std::string path;  // dot-separated key path into the config tree
  ojson value;
  friend bool operator==(const Patch&, const Patch&) = default;
};

struct Variation {
  std::string id;
  VariationKind kind = VariationKind::appearance;
  std::vector<Patch> patches;
  friend bool operator==(const Variation&, const Variation&) = default;
};

struct VariationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using VariationCatalog = std::map<std::string, Variation>;

// ---- patch application -----------------------------------------------------

namespace vardetail {

inline std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= path.size()) {
    size_t dot = path.find('.', start);
    parts.push_back(path.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return parts;
}

inline ojson* navigate(ojson& tree, const std::vector<std::string>& parts, bool& exists) {
  ojson* cur = &tree;
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cur->is_object() || !cur->contains(parts[i])) {
      exists = false;
      return nullptr;
    }
    cur = &(*cur)[parts[i]];
  }
  exists = cur->is_object() && cur->contains(parts.back());
  return exists ? cur : nullptr;
}

inline bool path_in_section(const std::string& path, VariationKind kind) {
  if (kind == VariationKind::appearance) return path.find(".style.") != std::string::npos;
  return path.find(".content.") != std::string::npos || path == "globals.home_description";
}

}  // namespace vardetail

inline AppConfigSet apply_variation(const AppConfigSet& base, const Variation& v) {
  ojson tree = base.tree;
  for (const auto& p : v.patches) {
    if (!vardetail::path_in_section(p.path, v.kind))
      throw VariationError("variation '" + v.id + "': patch path '" + p.path +
                           "' is outside its " +
                           (v.kind == VariationKind::appearance ? "style" : "content") +
                           " section");
    auto parts = vardetail::split_path(p.path);
    bool exists = false;
    ojson* parent = vardetail::navigate(tree, parts, exists);
    if (!parent)
      throw VariationError("variation '" + v.id + "': patch path '" + p.path +
                           "' not in config schema");
    (*parent)[parts.back()] = p.value;
  }
  auto errors = validate_config_tree(tree);
  if (!errors.empty())
    throw VariationError("variation '" + v.id + "' breaks the schema: " + errors.front());
  return AppConfigSet{std::move(tree)};
}

inline AppConfigSet compose_variations(const AppConfigSet& base,
                                       const std::vector<Variation>& vs) {
  // same path from two variations is a conflict unless the values agree
  std::map<std::string, std::pair<std::string, ojson>> seen;
  for (const auto& v : vs)
    for (const auto& p : v.patches) {
      auto it = seen.find(p.path);
      if (it != seen.end() && it->second.second != p.value)
        throw VariationError("conflicting patches at '" + p.path + "' (from '" +
                             it->second.first + "' and '" + v.id + "')");
      seen.emplace(p.path, std::make_pair(v.id, p.value));
    }
  AppConfigSet cur = base;
  for (const auto& v : vs) cur = apply_variation(cur, v);
  return cur;
}

// ---- catalog loading -------------------------------------------------------
//
// Catalog file: YAML list of {id, kind, patches: [{path, value}] | bundle: file}.
// Bundle files hold a bare patches list and are resolved relative to the
// catalog file's directory via the supplied reader.

inline Variation variation_from_json(
    const ojson& vj, const std::function<std::string(const std::string&)>& read_bundle) {
  Variation v;
  v.id = vj.at("id").get<std::string>();
  std::string kind = vj.at("kind").get<std::string>();
  if (kind != "appearance" && kind != "content")
    throw VariationError("variation '" + v.id + "': kind must be appearance or content");
  v.kind = kind == "appearance" ? VariationKind::appearance : VariationKind::content;
  ojson patches = ojson::array();
  if (vj.contains("patches")) patches = vj["patches"];
  if (vj.contains("bundle")) {
    ojson bundle = parse_yaml(read_bundle(vj["bundle"].get<std::string>()));
    for (const auto& p : bundle.at("patches")) patches.push_back(p);
  }
  for (const auto& pj : patches)
    v.patches.push_back({pj.at("path").get<std::string>(), pj.at("value")});
  return v;
}

inline VariationCatalog load_catalog(
    const std::string& yaml_text,
    const std::function<std::string(const std::string&)>& read_bundle) {
  VariationCatalog catalog;
  ojson root = parse_yaml(yaml_text);
  for (const auto& vj : root.at("variations")) {
    Variation v = variation_from_json(vj, read_bundle);
    if (catalog.count(v.id)) throw VariationError("duplicate variation id '" + v.id + "'");
    catalog[v.id] = std::move(v);
  }
  return catalog;
}

inline const Variation& catalog_get(const VariationCatalog& c, const std::string& id) {
  auto it = c.find(id);
  if (it == c.end()) throw VariationError("unknown variation id '" + id + "'");
  return it->second;
}

// ---- combinatorial enumeration --------------------------------------------

struct VariantAxis {
  std::string name;
  std::vector<std::string> choices;  // variation ids from the catalog
};

struct EnumerateOptions {
  bool per_app = false;   // assign appearance/content choices per app independently
  uint64_t limit = 0;     // 0 = unbounded
};

// restrict a variation's patches to one app's subtree; global patches drop out
inline Variation restrict_to_app(const Variation& v, const std::string& app) {
  Variation out;
  out.id = v.id + "@" + app;
  out.kind = v.kind;
  std::string prefix = "apps." + app + ".";
  for (const auto& p : v.patches)
    if (p.path.rfind(prefix, 0) == 0) out.patches.push_back(p);
  return out;
}

// closed-form count of the full cross product, saturating at uint64 max
inline uint64_t variant_space_size(const std::vector<VariantAxis>& axes, bool per_app) {
  uint64_t total = 1;
  size_t slots = axes.size() * (per_app ? app_names().size() : 1);
  for (size_t slot = 0; slot < slots; ++slot) {
    uint64_t n = axes[slot % axes.size()].choices.size();
    if (n == 0) continue;
    if (total > UINT64_MAX / n) return UINT64_MAX;
    total *= n;
  }
  return total;
}

// Deterministic odometer enumeration (last slot varies fastest). Yields
// composed configs until the space or the limit is exhausted; returns the
// number yielded.
inline uint64_t enumerate_variants(const AppConfigSet& base, const VariationCatalog& catalog,
                                   const std::vector<VariantAxis>& axes,
                                   const EnumerateOptions& opts,
                                   const std::function<void(const AppConfigSet&,
                                                            const std::vector<std::string>&)>& yield) {
  if (axes.empty()) {
    yield(base, {});
    return 1;
  }
  size_t per = opts.per_app ? app_names().size() : 1;
  size_t slots = axes.size() * per;
  std::vector<size_t> odo(slots, 0);
  uint64_t produced = 0;
  while (true) {
    std::vector<Variation> combo;
    std::vector<std::string> labels;
    for (size_t slot = 0; slot < slots; ++slot) {
      const VariantAxis& axis = axes[slot / per];
      const std::string& id = axis.choices[odo[slot]];
      const Variation& v = catalog_get(catalog, id);
      if (opts.per_app) {
        const std::string& app = app_names()[slot % per];
        combo.push_back(restrict_to_app(v, app));
        labels.push_back(axis.name + "/" + app + "=" + id);
      } else {
        combo.push_back(v);
        labels.push_back(axis.name + "=" + id);
      }
    }
    yield(compose_variations(base, combo), labels);
    ++produced;
    if (opts.limit && produced >= opts.limit) break;
    // advance
    size_t i = slots;
    while (i > 0) {
      --i;
      if (++odo[i] < axes[i / per].choices.size()) break;
      odo[i] = 0;
      if (i == 0) return produced;
    }
  }
  return produced;
}

}  // namespace varapps
