// varapps: command-line front end for the environment engine.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "varapps/analytics.hpp"
#include "varapps/server.hpp"

namespace fs = std::filesystem;
using namespace varapps;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spew(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

VariationCatalog load_catalog_from(const fs::path& data_dir) {
  return load_catalog(slurp(data_dir / "variations.yaml"),
                      [&](const std::string& rel) { return slurp(data_dir / rel); });
}

RunContext load_context(const fs::path& data_dir) {
  RunContext ctx;
  ctx.base_config = load_config(slurp(data_dir / "default_config.yaml"));
  ctx.variations = load_catalog_from(data_dir);
  ctx.tasks = load_tasks(slurp(data_dir / "tasks.yaml"));
  return ctx;
}

std::vector<VariantAxis> load_axes(const fs::path& file) {
  std::vector<VariantAxis> axes;
  ojson root = parse_yaml(slurp(file));
  for (const auto& aj : root.at("axes")) {
    VariantAxis axis;
    axis.name = aj.at("name").get<std::string>();
    for (const auto& c : aj.at("choices")) axis.choices.push_back(c.get<std::string>());
    axes.push_back(std::move(axis));
  }
  return axes;
}

std::vector<RunSpec> load_matrix(const fs::path& file) {
  std::vector<RunSpec> specs;
  ojson root = parse_yaml(slurp(file));
  for (const auto& rj : root.at("runs")) {
    std::vector<std::string> agents;
    if (rj.contains("agents"))
      for (const auto& a : rj["agents"]) agents.push_back(a.get<std::string>());
    else
      agents.push_back(rj.at("agent").get<std::string>());
    std::vector<std::string> tasks;
    if (rj.contains("tasks"))
      for (const auto& t : rj["tasks"]) tasks.push_back(t.get<std::string>());
    else
      tasks.push_back(rj.at("task").get<std::string>());
    std::vector<std::vector<std::string>> vsets;
    if (rj.contains("variation_sets"))
      for (const auto& set : rj["variation_sets"]) {
        std::vector<std::string> vs;
        for (const auto& v : set) vs.push_back(v.get<std::string>());
        vsets.push_back(std::move(vs));
      }
    else if (rj.contains("variations")) {
      std::vector<std::string> vs;
      for (const auto& v : rj["variations"]) vs.push_back(v.get<std::string>());
      vsets.push_back(std::move(vs));
    } else {
      vsets.push_back({});
    }
    std::vector<uint64_t> seeds;
    if (rj.contains("seeds"))
      for (const auto& s : rj["seeds"]) seeds.push_back(s.get<uint64_t>());
    else
      seeds.push_back(rj.value("seed", 0));
    std::string viewport = rj.value("viewport", "hd");
    int horizon = rj.value("horizon", 30);

    for (const auto& agent : agents)
      for (const auto& task : tasks)
        for (const auto& vs : vsets)
          for (uint64_t seed : seeds) {
            RunSpec spec;
            spec.agent = agent;
            spec.task = task;
            spec.variations = vs;
            spec.seed = seed;
            spec.viewport = viewport;
            spec.horizon = horizon;
            specs.push_back(std::move(spec));
          }
  }
  return specs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"varapps: configurable multi-app UI-agent environment"};
  app.require_subcommand(1);

  std::string data_dir = "data";
  app.add_option("--data", data_dir, "data directory with config, variations, and tasks");

  // config validate
  auto* cmd_config = app.add_subcommand("config", "configuration utilities");
  auto* cmd_validate = cmd_config->add_subcommand("validate", "validate a config file");
  std::string cfg_file;
  cmd_validate->add_option("file", cfg_file, "config YAML file")->required();

  // variants
  auto* cmd_variants = app.add_subcommand("variants", "variation catalog utilities");
  auto* cmd_vlist = cmd_variants->add_subcommand("list", "list catalog variations");
  auto* cmd_vemit = cmd_variants->add_subcommand("emit", "enumerate composed variant configs");
  std::string axes_file;
  uint64_t vlimit = 16;
  bool per_app = false;
  std::string vout;
  cmd_vemit->add_option("--axes", axes_file, "axes YAML file (default <data>/axes.yaml)");
  cmd_vemit->add_option("--limit", vlimit, "maximum variants to emit (0 = all)");
  cmd_vemit->add_flag("--per-app", per_app, "assign axis choices per app independently");
  cmd_vemit->add_option("--out", vout, "directory to write configs into (omit to count only)");

  // actions
  auto* cmd_actions = app.add_subcommand("actions", "print the action grammar");
  std::string profile_name = "full";
  cmd_actions->add_option("--profile", profile_name, "full or visual_only");

  // tasks
  auto* cmd_tasks = app.add_subcommand("tasks", "task catalog utilities");
  auto* cmd_tlist = cmd_tasks->add_subcommand("list", "list task ids and prompt counts");

  // serve
  auto* cmd_serve = app.add_subcommand("serve", "run the HTTP environment server");
  int port = 0;
  int horizon = 30;
  std::string host = "127.0.0.1";
  cmd_serve->add_option("--port", port, "listen port (default $VARAPPS_PORT or 8808)");
  cmd_serve->add_option("--host", host, "bind address");
  cmd_serve->add_option("--horizon", horizon, "default episode horizon");

  // run
  auto* cmd_run = app.add_subcommand("run", "execute a run matrix");
  std::string matrix_file, run_out;
  int parallel = 1;
  cmd_run->add_option("--matrix", matrix_file, "matrix YAML file")->required();
  cmd_run->add_option("--parallel", parallel, "worker count");
  cmd_run->add_option("--out", run_out, "output directory")->required();

  // replay
  auto* cmd_replay = app.add_subcommand("replay", "verify recorded trajectories");
  std::string replay_file;
  cmd_replay->add_option("file", replay_file, "trajectory ndjson file")->required();

  // analyze
  auto* cmd_analyze = app.add_subcommand("analyze", "compute reliability and behavior tables");
  std::string in_dir, out_dir, std_convention = "sample";
  cmd_analyze->add_option("--in", in_dir, "directory of trajectory ndjson files")->required();
  cmd_analyze->add_option("--out", out_dir, "output directory")->required();
  cmd_analyze->add_option("--std-convention", std_convention, "sample or population");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      ojson tree;
      try {
        tree = parse_yaml(slurp(cfg_file));
      } catch (const YamlParseError& e) {
        std::cout << "parse error at line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return 1;
      }
      auto errors = validate_config_tree(tree);
      if (errors.empty()) {
        std::cout << "ok: " << cfg_file << "\n";
        return 0;
      }
      for (const auto& e : errors) std::cout << e << "\n";
      return 1;
    }

    if (cmd_vlist->parsed()) {
      for (const auto& [id, v] : load_catalog_from(data_dir))
        std::cout << id << "  "
                  << (v.kind == VariationKind::appearance ? "appearance" : "content") << "  "
                  << v.patches.size() << " patches\n";
      return 0;
    }

    if (cmd_vemit->parsed()) {
      AppConfigSet base = load_config(slurp(fs::path(data_dir) / "default_config.yaml"));
      VariationCatalog catalog = load_catalog_from(data_dir);
      auto axes = load_axes(axes_file.empty() ? fs::path(data_dir) / "axes.yaml" : fs::path(axes_file));
      EnumerateOptions opts;
      opts.per_app = per_app;
      opts.limit = vlimit;
      uint64_t count = enumerate_variants(
          base, catalog, axes, opts,
          [&](const AppConfigSet& cfg, const std::vector<std::string>& labels) {
            if (vout.empty()) return;
            std::string name;
            for (const auto& l : labels) name += (name.empty() ? "" : "__") + l;
            for (char& c : name)
              if (c == '/' || c == '=') c = '-';
            spew(fs::path(vout) / (name + ".yaml"), cfg.yaml());
          });
      std::cout << "variants: " << count << " (space "
                << variant_space_size(axes, per_app) << ")\n";
      return 0;
    }

    if (cmd_actions->parsed()) {
      ProfileId profile;
      if (profile_name == "full")
        profile = ProfileId::full;
      else if (profile_name == "visual_only")
        profile = ProfileId::visual_only;
      else
        throw std::runtime_error("unknown profile '" + profile_name + "'");
      for (const auto& sig : action_signatures(profile)) {
        std::cout << sig.name << "(";
        bool first = true;
        for (const auto& p : sig.params) {
          if (!first) std::cout << ", ";
          first = false;
          std::cout << p.name << ": " << (p.type == ParamType::Str ? "str" : "num");
          if (!p.required) std::cout << "?";
        }
        std::cout << ")\n";
      }
      return 0;
    }

    if (cmd_tlist->parsed()) {
      for (const auto& [id, task] : load_tasks(slurp(fs::path(data_dir) / "tasks.yaml")))
        std::cout << id << "  " << task.goal_prompts.size() << " prompts"
                  << (task.multi_step() ? "  multi-step (" + std::to_string(task.steps.size()) +
                                              " steps)"
                                        : "")
                  << "\n";
      return 0;
    }

    if (cmd_serve->parsed()) {
      if (port == 0) {
        const char* env = std::getenv("VARAPPS_PORT");
        port = env ? std::atoi(env) : 8808;
      }
      EnvServer server(load_context(data_dir), horizon);
      std::cout << "listening on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "failed to bind " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }

    if (cmd_run->parsed()) {
      RunContext ctx = load_context(data_dir);
      auto specs = load_matrix(matrix_file);
      auto records = run_matrix(ctx, specs, parallel);
      spew(fs::path(run_out) / "runs.traj.ndjson", records_to_ndjson(records));
      int failures = 0;
      double reward_sum = 0;
      for (const auto& r : records) {
        if (r.failed()) ++failures;
        reward_sum += r.result.reward;
      }
      std::cout << records.size() << " runs, " << failures << " errors, mean reward "
                << (records.empty() ? 0 : reward_sum / static_cast<double>(records.size())) << "\n";
      return failures == 0 ? 0 : 1;
    }

    if (cmd_replay->parsed()) {
      RunContext ctx = load_context(data_dir);
      auto records = records_from_ndjson(slurp(replay_file));
      int bad = 0;
      for (size_t i = 0; i < records.size(); ++i) {
        ReplayVerdict v = replay(ctx, records[i]);
        if (!v.ok) {
          ++bad;
          std::cout << "record " << i << ": " << v.message << "\n";
        }
      }
      std::cout << records.size() << " records, " << bad << " divergent\n";
      return bad == 0 ? 0 : 1;
    }

    if (cmd_analyze->parsed()) {
      StdConvention conv;
      if (std_convention == "sample")
        conv = StdConvention::sample;
      else if (std_convention == "population")
        conv = StdConvention::population;
      else
        throw std::runtime_error("unknown std convention '" + std_convention + "'");
      TaskCatalog tasks = load_tasks(slurp(fs::path(data_dir) / "tasks.yaml"));
      std::vector<TrajectoryRecord> records;
      for (const auto& entry : fs::directory_iterator(in_dir)) {
        if (entry.path().extension() != ".ndjson") continue;
        auto batch = records_from_ndjson(slurp(entry.path()));
        records.insert(records.end(), batch.begin(), batch.end());
      }
      ReliabilityReport rel = reliability(samples_from_records(records), conv);
      BehaviorReport beh = behavior(records, tasks);
      ReportTables tables = emit_tables(rel, beh);
      spew(fs::path(out_dir) / "reliability.csv", tables.reliability_csv);
      spew(fs::path(out_dir) / "reliability.txt", tables.reliability_txt);
      spew(fs::path(out_dir) / "cells.csv", tables.cells_csv);
      spew(fs::path(out_dir) / "behavior.csv", tables.behavior_csv);
      spew(fs::path(out_dir) / "behavior.txt", tables.behavior_txt);
      std::cout << records.size() << " records analyzed\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    for (const auto& err : e.errors) std::cerr << err << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
