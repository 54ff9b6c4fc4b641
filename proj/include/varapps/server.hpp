#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include <httplib.h>

#include "varapps/engine.hpp"
#include "varapps/harness.hpp"
#include "varapps/version.hpp"

namespace varapps {

// Session-isolated HTTP facade over the engine. Each session serializes its
// own actions; distinct sessions share nothing mutable but the registry map.
class EnvServer {
 public:
  EnvServer(RunContext ctx, int default_horizon = 30)
      : ctx_(std::move(ctx)), default_horizon_(default_horizon) {
    wire_routes();
  }

  httplib::Server& http() { return http_; }

  bool listen(const std::string& host, int port) { return http_.listen(host, port); }
  void stop() { http_.stop(); }

 private:
  struct Entry {
    std::unique_ptr<Session> session;
    std::mutex gate;  // serializes actions within one session
  };

  static void fail(httplib::Response& res, int code, const std::string& error,
                   const std::string& detail) {
    ojson j;
    j["protocol_version"] = kProtocolVersion;
    j["error"] = error;
    j["detail"] = detail;
    res.status = code;
    res.set_content(j.dump(), "application/json");
  }

  std::shared_ptr<Entry> lookup(const std::string& id) {
    std::lock_guard<std::mutex> lock(registry_gate_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  void wire_routes() {
    http_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      ojson body;
      try {
        body = ojson::parse(req.body);
      } catch (...) {
        return fail(res, 400, "bad_request", "body is not valid JSON");
      }
      try {
        std::string task_id = body.at("task").get<std::string>();
        std::vector<std::string> vids;
        if (body.contains("variations"))
          for (const auto& v : body["variations"]) vids.push_back(v.get<std::string>());
        uint64_t seed = body.value("seed", 0);
        std::string vp_name = body.value("viewport", "hd");
        int horizon = body.value("horizon", default_horizon_);
        std::string profile_name = body.value("profile", "full");

        auto vp = viewport_from_name(vp_name);
        if (!vp) return fail(res, 400, "unknown_viewport", vp_name);
        ProfileId profile;
        if (profile_name == "full")
          profile = ProfileId::full;
        else if (profile_name == "visual_only")
          profile = ProfileId::visual_only;
        else
          return fail(res, 400, "unknown_profile", profile_name);

        const TaskSpec* task = nullptr;
        try {
          task = &catalog_task(ctx_.tasks, task_id);
        } catch (const std::exception& e) {
          return fail(res, 400, "unknown_task", e.what());
        }
        AppConfigSet cfg;
        try {
          cfg = config_for_variations(ctx_.base_config, ctx_.variations, vids);
        } catch (const std::exception& e) {
          return fail(res, 400, "unknown_variation", e.what());
        }

        auto entry = std::make_shared<Entry>();
        entry->session = std::make_unique<Session>(cfg, *task, profile, *vp, seed, horizon);
        std::string id;
        {
          std::lock_guard<std::mutex> lock(registry_gate_);
          id = "s-" + std::to_string(++session_counter_);
          sessions_[id] = entry;
        }
        ojson j;
        j["protocol_version"] = kProtocolVersion;
        j["session_id"] = id;
        j["goal"] = entry->session->goal();
        j["status"] = status_name(entry->session->status());
        j["horizon"] = horizon;
        j["initial_digest"] = state_digest(entry->session->initial_state());
        res.set_content(j.dump(), "application/json");
      } catch (const std::exception& e) {
        fail(res, 400, "bad_request", e.what());
      }
    });

    http_.Get(R"(/sessions/([^/]+)/observation)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto entry = lookup(req.matches[1]);
                if (!entry) return fail(res, 404, "unknown_session", std::string(req.matches[1]));
                std::lock_guard<std::mutex> lock(entry->gate);
                const Observation& obs = entry->session->observation();
                std::string mode = req.get_param_value("mode");
                if (mode == "html") {
                  res.set_content(obs.html, "text/html");
                  return;
                }
                if (!mode.empty() && mode != "axtree")
                  return fail(res, 400, "unknown_mode", mode);
                ojson j;
                j["protocol_version"] = kProtocolVersion;
                j["url"] = obs.url;
                j["ax_tree"] = obs.ax_tree;
                j["scroll_offset"] = obs.scroll_offset;
                j["page_height"] = obs.page_height;
                j["viewport"] = {{"width", obs.viewport.width}, {"height", obs.viewport.height}};
                res.set_content(j.dump(), "application/json");
              });

    http_.Post(R"(/sessions/([^/]+)/actions)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto entry = lookup(req.matches[1]);
                 if (!entry) return fail(res, 404, "unknown_session", std::string(req.matches[1]));
                 ojson body;
                 try {
                   body = ojson::parse(req.body);
                 } catch (...) {
                   return fail(res, 400, "bad_request", "body is not valid JSON");
                 }
                 if (!body.contains("action") || !body["action"].is_string())
                   return fail(res, 400, "bad_request", "missing 'action' string");
                 std::lock_guard<std::mutex> lock(entry->gate);
                 StepRecord rec = entry->session->act(body["action"].get<std::string>());
                 ojson j;
                 j["protocol_version"] = kProtocolVersion;
                 j["step"] = rec.index + 1;
                 j["invalid"] = rec.invalid;
                 if (rec.invalid) {
                   j["invalid_category"] = rec.invalid_category;
                   j["invalid_detail"] = rec.invalid_detail;
                 }
                 j["rejected"] = rec.rejected;
                 if (rec.rejected) j["rejection_reason"] = rec.rejection_reason;
                 if (!rec.control.empty()) j["control"] = rec.control;
                 j["route"] = rec.route_after;
                 j["reward"] = rec.reward;
                 j["success"] = rec.success;
                 j["status"] = status_name(entry->session->status());
                 j["digest"] = state_digest(entry->session->state());
                 res.set_content(j.dump(), "application/json");
               });

    http_.Get(R"(/sessions/([^/]+)/state)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto entry = lookup(req.matches[1]);
                if (!entry) return fail(res, 404, "unknown_session", std::string(req.matches[1]));
                std::lock_guard<std::mutex> lock(entry->gate);
                ojson j;
                j["protocol_version"] = kProtocolVersion;
                j["state_yaml"] = serialize_state(entry->session->state());
                j["canonical_yaml"] = canonicalize(entry->session->state()).yaml;
                j["digest"] = state_digest(entry->session->state());
                res.set_content(j.dump(), "application/json");
              });

    http_.Get(R"(/sessions/([^/]+)/result)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto entry = lookup(req.matches[1]);
                if (!entry) return fail(res, 404, "unknown_session", std::string(req.matches[1]));
                std::lock_guard<std::mutex> lock(entry->gate);
                RewardResult out = entry->session->outcome();
                ojson j;
                j["protocol_version"] = kProtocolVersion;
                j["status"] = status_name(entry->session->status());
                j["reward"] = out.reward;
                j["success"] = out.success;
                j["steps_completed"] = out.steps_completed;
                j["at_least_one_step"] = out.at_least_one_step;
                j["achieved_at"] = out.achieved_at;
                j["steps_taken"] = entry->session->step_count();
                res.set_content(j.dump(), "application/json");
              });

    http_.Delete(R"(/sessions/([^/]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   std::lock_guard<std::mutex> lock(registry_gate_);
                   if (!sessions_.erase(req.matches[1]))
                     return fail(res, 404, "unknown_session", std::string(req.matches[1]));
                   ojson j;
                   j["protocol_version"] = kProtocolVersion;
                   j["deleted"] = true;
                   res.set_content(j.dump(), "application/json");
                 });

    http_.Get("/meta/tasks", [this](const httplib::Request&, httplib::Response& res) {
      ojson j;
      j["protocol_version"] = kProtocolVersion;
      ojson arr = ojson::array();
      for (const auto& [id, task] : ctx_.tasks) {
        ojson t;
        t["id"] = id;
        t["prompt_count"] = task.goal_prompts.size();
        t["multi_step"] = task.multi_step();
        ojson apps = ojson::array();
        for (Route r : task.relevant_apps) apps.push_back(route_name(r));
        t["relevant_apps"] = std::move(apps);
        arr.push_back(std::move(t));
      }
      j["tasks"] = std::move(arr);
      res.set_content(j.dump(), "application/json");
    });

    http_.Get("/meta/variations", [this](const httplib::Request&, httplib::Response& res) {
      ojson j;
      j["protocol_version"] = kProtocolVersion;
      ojson arr = ojson::array();
      for (const auto& [id, v] : ctx_.variations) {
        ojson e;
        e["id"] = id;
        e["kind"] = v.kind == VariationKind::appearance ? "appearance" : "content";
        e["patch_count"] = v.patches.size();
        arr.push_back(std::move(e));
      }
      j["variations"] = std::move(arr);
      res.set_content(j.dump(), "application/json");
    });

    http_.Get("/meta/actions", [this](const httplib::Request& req, httplib::Response& res) {
      std::string profile_name = req.get_param_value("profile");
      if (profile_name.empty()) profile_name = "full";
      ProfileId profile;
      if (profile_name == "full")
        profile = ProfileId::full;
      else if (profile_name == "visual_only")
        profile = ProfileId::visual_only;
      else
        return fail(res, 400, "unknown_profile", profile_name);
      ojson j;
      j["protocol_version"] = kProtocolVersion;
      ojson arr = ojson::array();
      for (const auto& sig : action_signatures(profile)) {
        ojson s;
        s["name"] = sig.name;
        ojson params = ojson::array();
        for (const auto& p : sig.params) {
          ojson pj;
          pj["name"] = p.name;
          pj["type"] = p.type == ParamType::Str ? "str" : "num";
          pj["required"] = p.required;
          params.push_back(std::move(pj));
        }
        s["params"] = std::move(params);
        arr.push_back(std::move(s));
      }
      j["actions"] = std::move(arr);
      res.set_content(j.dump(), "application/json");
    });
  }

  RunContext ctx_;
  int default_horizon_;
  httplib::Server http_;
  std::mutex registry_gate_;
  std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
  uint64_t session_counter_ = 0;
};

}  // namespace varapps
