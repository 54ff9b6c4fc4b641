#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "varapps/harness.hpp"
#include "varapps/tasks.hpp"

namespace varapps {

// ---- loop detection --------------------------------------------------------
//
// A loop is a maximal contiguous segment equal to some unit repeated at least
// twice. Overlaps are resolved greedily left to right with the shortest unit
// preferred; unit equality is on trimmed action text.

inline int count_loops(const std::vector<std::string>& raw_actions) {
  std::vector<std::string> a;
  a.reserve(raw_actions.size());
  for (const auto& s : raw_actions) a.push_back(trim_copy(s));
  const size_t n = a.size();
  int runs = 0;
  size_t i = 0;
  while (i < n) {
    bool found = false;
    for (size_t unit = 1; !found && i + 2 * unit <= n; ++unit) {
      size_t k = 1;
      while (i + (k + 1) * unit <= n &&
             std::equal(a.begin() + static_cast<long>(i),
                        a.begin() + static_cast<long>(i + unit),
                        a.begin() + static_cast<long>(i + k * unit)))
        ++k;
      if (k >= 2) {
        ++runs;
        i += k * unit;
        found = true;
      }
    }
    if (!found) ++i;
  }
  return runs;
}

inline int count_invalid(const TrajectoryRecord& record) {
  int n = 0;
  for (const auto& s : record.steps)
    if (s.parse != "ok") ++n;
  return n;
}

// True when the trajectory ever lands on a page outside the task's apps.
inline bool intent_misunderstood(const TrajectoryRecord& record, const TaskSpec& task) {
  if (task.id == "NavigateToPageTask")
    throw std::invalid_argument("intent_misunderstood excludes NavigateToPageTask");
  std::set<std::string> allowed = {"home"};
  for (Route r : task.relevant_apps) allowed.insert(route_name(r));
  for (const auto& s : record.steps) {
    if (s.route_after.rfind("external(", 0) == 0) return true;
    if (!allowed.count(s.route_after)) return true;
  }
  return false;
}

// ---- reliability -----------------------------------------------------------

enum class StdConvention { sample, population };

struct RewardSample {
  std::string agent;
  std::string task;
  std::string variation;
  uint64_t seed = 0;
  double reward = 0;
};

struct CellStats {
  std::string variation;
  int n = 0;
  double pass1 = 0;
  std::optional<double> stddev;  // absent below 2 samples
  double mad = 0;
};

struct ReliabilityRow {
  std::string agent;
  std::string task;
  int d = 0;  // variation count
  int n = 0;  // seeds per cell (minimum across cells)
  std::vector<CellStats> cells;
  std::optional<double> within_std;   // mean of defined per-cell stds
  double within_mad = 0;              // mean of per-cell MADs
  std::optional<double> overall_std;  // pooled over all n*d samples
  double overall_mad = 0;
  std::optional<double> ratio_std;    // within / overall, absent when overall == 0
  std::optional<double> ratio_mad;
};

struct ReliabilityReport {
  std::vector<ReliabilityRow> rows;  // sorted by (agent, task)
};

namespace anadetail {

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0 : s / static_cast<double>(v.size());
}

inline std::optional<double> deviation(const std::vector<double>& v, StdConvention conv) {
  size_t n = v.size();
  if (n < 2) return std::nullopt;
  double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  double div = conv == StdConvention::sample ? static_cast<double>(n - 1) : static_cast<double>(n);
  return std::sqrt(ss / div);
}

// mean absolute deviation about the mean, divisor = sample count
inline double mad(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double m = mean(v);
  double s = 0;
  for (double x : v) s += std::fabs(x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace anadetail

inline ReliabilityReport reliability(const std::vector<RewardSample>& samples,
                                     StdConvention conv = StdConvention::sample) {
  // (agent, task) -> variation -> rewards
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<double>>> groups;
  for (const auto& s : samples) groups[{s.agent, s.task}][s.variation].push_back(s.reward);

  ReliabilityReport report;
  for (const auto& [key, byvar] : groups) {
    ReliabilityRow row;
    row.agent = key.first;
    row.task = key.second;
    row.d = static_cast<int>(byvar.size());
    std::vector<double> pooled;
    std::vector<double> cell_stds;
    std::vector<double> cell_mads;
    int min_n = -1;
    for (const auto& [vid, rewards] : byvar) {
      CellStats cell;
      cell.variation = vid;
      cell.n = static_cast<int>(rewards.size());
      cell.pass1 = anadetail::mean(rewards);
      cell.stddev = anadetail::deviation(rewards, conv);
      cell.mad = anadetail::mad(rewards);
      if (cell.stddev) cell_stds.push_back(*cell.stddev);
      cell_mads.push_back(cell.mad);
      pooled.insert(pooled.end(), rewards.begin(), rewards.end());
      min_n = min_n < 0 ? cell.n : std::min(min_n, cell.n);
      row.cells.push_back(std::move(cell));
    }
    row.n = std::max(min_n, 0);
    if (!cell_stds.empty()) row.within_std = anadetail::mean(cell_stds);
    row.within_mad = anadetail::mean(cell_mads);
    row.overall_std = anadetail::deviation(pooled, conv);
    row.overall_mad = anadetail::mad(pooled);
    if (row.within_std && row.overall_std && *row.overall_std > 0)
      row.ratio_std = *row.within_std / *row.overall_std;
    if (row.overall_mad > 0) row.ratio_mad = row.within_mad / row.overall_mad;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---- behavior --------------------------------------------------------------

struct BehaviorRow {
  std::string agent;
  std::string variation;
  int runs = 0;
  double avg_loops = 0;
  double avg_invalid = 0;
  double intent_rate = 0;  // over runs where the metric is defined
};

struct BehaviorReport {
  std::vector<BehaviorRow> rows;  // sorted by (agent, variation)
};

inline BehaviorReport behavior(const std::vector<TrajectoryRecord>& records,
                               const TaskCatalog& tasks) {
  struct Acc {
    int runs = 0;
    long loops = 0;
    long invalid = 0;
    int intent_runs = 0;
    int intent_hits = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& r : records) {
    if (r.failed()) continue;
    std::string vid = r.spec.variations.empty() ? "default" : r.spec.variations.front();
    Acc& acc = groups[{r.spec.agent, vid}];
    acc.runs += 1;
    std::vector<std::string> actions;
    for (const auto& s : r.steps) actions.push_back(s.action_text);
    acc.loops += count_loops(actions);
    acc.invalid += count_invalid(r);
    if (r.spec.task != "NavigateToPageTask" && tasks.count(r.spec.task)) {
      acc.intent_runs += 1;
      if (intent_misunderstood(r, tasks.at(r.spec.task))) acc.intent_hits += 1;
    }
  }
  BehaviorReport report;
  for (const auto& [key, acc] : groups) {
    BehaviorRow row;
    row.agent = key.first;
    row.variation = key.second;
    row.runs = acc.runs;
    row.avg_loops = acc.runs ? static_cast<double>(acc.loops) / acc.runs : 0;
    row.avg_invalid = acc.runs ? static_cast<double>(acc.invalid) / acc.runs : 0;
    row.intent_rate =
        acc.intent_runs ? static_cast<double>(acc.intent_hits) / acc.intent_runs : 0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline std::vector<RewardSample> samples_from_records(
    const std::vector<TrajectoryRecord>& records) {
  std::vector<RewardSample> out;
  for (const auto& r : records) {
    if (r.failed()) continue;
    RewardSample s;
    s.agent = r.spec.agent;
    s.task = r.spec.task;
    s.variation = r.spec.variations.empty() ? "default" : r.spec.variations.front();
    s.seed = r.spec.seed;
    s.reward = r.result.reward;
    out.push_back(std::move(s));
  }
  return out;
}

// ---- tables ----------------------------------------------------------------

namespace anadetail {

inline std::string csv_field(const std::string& s) {
  bool needs = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

inline std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths;
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) {
      if (widths.size() <= c) widths.resize(c + 1, 0);
      widths[c] = std::max(widths[c], row[c].size());
    }
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      cell.resize(widths[c], ' ');
      out += cell;
      if (c + 1 < row.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

}  // namespace anadetail

struct ReportTables {
  std::string reliability_csv;
  std::string reliability_txt;
  std::string cells_csv;
  std::string behavior_csv;
  std::string behavior_txt;
};

inline ReportTables emit_tables(const ReliabilityReport& rel, const BehaviorReport& beh) {
  using anadetail::csv_field;
  using anadetail::num;
  using anadetail::opt_num;

  std::string csv = "agent,task,d,n,within_std,within_mad,overall_std,overall_mad,ratio_std,ratio_mad\n";
  std::vector<std::vector<std::string>> txt = {
      {"agent", "task", "d", "n", "within_std", "within_mad", "overall_std", "overall_mad",
       "ratio_std", "ratio_mad"}};
  for (const auto& r : rel.rows) {
    std::vector<std::string> row = {r.agent,
                                    r.task,
                                    std::to_string(r.d),
                                    std::to_string(r.n),
                                    opt_num(r.within_std),
                                    num(r.within_mad),
                                    opt_num(r.overall_std),
                                    num(r.overall_mad),
                                    opt_num(r.ratio_std),
                                    opt_num(r.ratio_mad)};
    for (size_t c = 0; c < row.size(); ++c) csv += (c ? "," : "") + csv_field(row[c]);
    csv += '\n';
    txt.push_back(std::move(row));
  }

  std::string cells = "agent,task,variation,n,pass@1,std,mad\n";
  for (const auto& r : rel.rows)
    for (const auto& c : r.cells) {
      std::vector<std::string> row = {r.agent,       r.task,      c.variation,
                                      std::to_string(c.n), num(c.pass1), opt_num(c.stddev),
                                      num(c.mad)};
      for (size_t i = 0; i < row.size(); ++i) cells += (i ? "," : "") + csv_field(row[i]);
      cells += '\n';
    }

  std::string bcsv = "agent,variation,runs,avg_loops,avg_invalid,intent_rate\n";
  std::vector<std::vector<std::string>> btxt = {
      {"agent", "variation", "runs", "avg_loops", "avg_invalid", "intent_rate"}};
  for (const auto& r : beh.rows) {
    std::vector<std::string> row = {r.agent,          r.variation,        std::to_string(r.runs),
                                    num(r.avg_loops), num(r.avg_invalid), num(r.intent_rate)};
    for (size_t c = 0; c < row.size(); ++c) bcsv += (c ? "," : "") + csv_field(row[c]);
    bcsv += '\n';
    btxt.push_back(std::move(row));
  }

  ReportTables out;
  out.reliability_csv = std::move(csv);
  out.reliability_txt = anadetail::aligned(txt);
  out.cells_csv = std::move(cells);
  out.behavior_csv = std::move(bcsv);
  out.behavior_txt = anadetail::aligned(btxt);
  return out;
}

}  // namespace varapps
