#include "hegp/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "hegp/errors.hpp"

namespace hegp {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const SatelliteConfig& s) {
  json segs = json::array();
  for (const auto& seg : s.trans_segments) {
    json j{{"offset_s", seg.offset_s}, {"rate_deg_s", seg.rate_deg_s}, {"from_deg", seg.from_deg}};
    j["to_deg"] = seg.to_deg ? json(*seg.to_deg) : json(nullptr);
    segs.push_back(j);
  }
  const auto& o = s.orbit;
  return {{"attitude_limit_deg", s.attitude_limit_deg},
          {"yaw_fixed_deg", s.yaw_fixed_deg},
          {"nominal_write_rate", s.nominal_write_rate},
          {"trans_segments", segs},
          {"orbit",
           {{"semi_major_axis_m", o.semi_major_axis_m},
            {"eccentricity", o.eccentricity},
            {"inclination_deg", o.inclination_deg},
            {"arg_perigee_deg", o.arg_perigee_deg},
            {"raan_deg", o.raan_deg},
            {"mean_anomaly_deg", o.mean_anomaly_deg}}}};
}

SatelliteConfig satellite_from_json(const json& j) {
  SatelliteConfig s;
  s.attitude_limit_deg = j.at("attitude_limit_deg").get<double>();
  s.yaw_fixed_deg = j.at("yaw_fixed_deg").get<double>();
  s.nominal_write_rate = j.at("nominal_write_rate").get<double>();
  for (const auto& seg : j.at("trans_segments")) {
    TransSegment t;
    t.offset_s = seg.at("offset_s").get<double>();
    t.rate_deg_s = seg.at("rate_deg_s").get<double>();
    t.from_deg = seg.at("from_deg").get<double>();
    if (!seg.at("to_deg").is_null()) t.to_deg = seg.at("to_deg").get<double>();
    s.trans_segments.push_back(t);
  }
  const auto& o = j.at("orbit");
  s.orbit.semi_major_axis_m = o.at("semi_major_axis_m").get<double>();
  s.orbit.eccentricity = o.at("eccentricity").get<double>();
  s.orbit.inclination_deg = o.at("inclination_deg").get<double>();
  s.orbit.arg_perigee_deg = o.at("arg_perigee_deg").get<double>();
  s.orbit.raan_deg = o.at("raan_deg").get<double>();
  s.orbit.mean_anomaly_deg = o.at("mean_anomaly_deg").get<double>();
  return s;
}

json to_json(const GenerationParams& p) {
  const auto& s = p.sampling;
  return {{"n_requests", p.n_requests},
          {"horizon", p.horizon},
          {"mmc", p.mmc},
          {"p_cc", p.p_cc},
          {"alpha_p", p.alpha_p},
          {"alpha_cr", p.alpha_cr},
          {"vtw_width_range", {p.vtw_width_range.first, p.vtw_width_range.second}},
          {"seed", p.seed},
          {"sampling",
           {{"dur_mean", s.dur_mean},
            {"dur_sd", s.dur_sd},
            {"dur_min", s.dur_min},
            {"dur_max", s.dur_max},
            {"profit_per_second", s.profit_per_second},
            {"profit_sd", s.profit_sd},
            {"profit_min", s.profit_min}}}};
}

GenerationParams params_from_json(const json& j, const SatelliteConfig& sat) {
  GenerationParams p;
  p.n_requests = j.at("n_requests").get<int>();
  p.horizon = j.at("horizon").get<double>();
  p.mmc = j.at("mmc").get<double>();
  p.p_cc = j.at("p_cc").get<double>();
  p.alpha_p = j.at("alpha_p").get<double>();
  p.alpha_cr = j.at("alpha_cr").get<double>();
  const auto& w = j.at("vtw_width_range");
  p.vtw_width_range = {w.at(0).get<double>(), w.at(1).get<double>()};
  p.seed = j.at("seed").get<std::uint64_t>();
  const auto& s = j.at("sampling");
  p.sampling.dur_mean = s.at("dur_mean").get<double>();
  p.sampling.dur_sd = s.at("dur_sd").get<double>();
  p.sampling.dur_min = s.at("dur_min").get<double>();
  p.sampling.dur_max = s.at("dur_max").get<double>();
  p.sampling.profit_per_second = s.at("profit_per_second").get<double>();
  p.sampling.profit_sd = s.at("profit_sd").get<double>();
  p.sampling.profit_min = s.at("profit_min").get<double>();
  p.satellite = sat;
  return p;
}

json to_json(const EnvironmentRealization& e) {
  json vis = json::array();
  for (bool v : e.visible) vis.push_back(v);
  return {{"env_id", e.env_id},
          {"seed", e.seed},
          {"actual_profit", e.actual_profit},
          {"actual_write_rate", e.actual_write_rate},
          {"visible", vis}};
}

EnvironmentRealization env_from_json(const json& j) {
  EnvironmentRealization e;
  e.env_id = j.at("env_id").get<int>();
  e.seed = j.at("seed").get<std::uint64_t>();
  e.actual_profit = j.at("actual_profit").get<std::vector<double>>();
  e.actual_write_rate = j.at("actual_write_rate").get<std::vector<double>>();
  for (const auto& v : j.at("visible")) e.visible.push_back(v.get<bool>());
  return e;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(fmt::format("cannot parse {}: {}", path.string(), e.what()));
  }
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << text;
  out.flush();
  if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

void write_instance_set(const InstanceSet& set, const fs::path& path) {
  const ScenarioSpec& sc = set.scenario;
  json reqs = json::array();
  for (const auto& r : sc.requests) {
    reqs.push_back({{"id", r.id},
                    {"ws", r.ws},
                    {"we", r.we},
                    {"dur", r.dur},
                    {"nominal_profit", r.nominal_profit},
                    {"roll_fixed", r.roll_fixed}});
  }
  json scenario{{"name", sc.name},
                {"horizon", sc.horizon},
                {"mmc", sc.mmc},
                {"p_cc", sc.p_cc},
                {"alpha_p", sc.alpha_p},
                {"alpha_cr", sc.alpha_cr},
                {"satellite", to_json(sc.satellite)},
                {"generation", to_json(set.params)},
                {"requests", reqs}};
  json train = json::array();
  for (const auto& e : set.train) train.push_back(to_json(e));
  json test = json::array();
  for (const auto& e : set.test) test.push_back(to_json(e));
  write_json(path, {{"schema_version", kInstanceSchemaVersion},
                    {"scenario", scenario},
                    {"train_envs", train},
                    {"test_envs", test}});
}

InstanceSet read_instance_set(const fs::path& path) {
  const json root = read_json(path);
  InstanceSet set;
  try {
    const int version = root.at("schema_version").get<int>();
    if (version != kInstanceSchemaVersion)
      throw ConfigError(fmt::format("unsupported instance schema version {}", version));
    const json& s = root.at("scenario");
    ScenarioSpec& sc = set.scenario;
    sc.name = s.at("name").get<std::string>();
    sc.horizon = s.at("horizon").get<double>();
    sc.mmc = s.at("mmc").get<double>();
    sc.p_cc = s.at("p_cc").get<double>();
    sc.alpha_p = s.at("alpha_p").get<double>();
    sc.alpha_cr = s.at("alpha_cr").get<double>();
    sc.satellite = satellite_from_json(s.at("satellite"));
    set.params = params_from_json(s.at("generation"), sc.satellite);
    for (const auto& r : s.at("requests")) {
      sc.requests.push_back({r.at("id").get<int>(), r.at("ws").get<double>(), r.at("we").get<double>(),
                             r.at("dur").get<double>(), r.at("nominal_profit").get<double>(),
                             r.at("roll_fixed").get<double>()});
    }
    for (const auto& e : root.at("train_envs")) set.train.push_back(env_from_json(e));
    for (const auto& e : root.at("test_envs")) set.test.push_back(env_from_json(e));
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("invalid instance file {}: {}", path.string(), e.what()));
  }
  set.scenario.validate();
  for (const auto& e : set.train) e.validate(set.scenario);
  for (const auto& e : set.test) e.validate(set.scenario);
  return set;
}

void write_schedules(const std::string& scenario_name, const std::vector<ScheduleRecord>& records,
                     const fs::path& path) {
  json list = json::array();
  for (const auto& rec : records) {
    json entries = json::array();
    for (const auto& e : rec.schedule.entries) entries.push_back({{"request_id", e.request_id}, {"os", e.os}, {"oe", e.oe}});
    list.push_back({{"env_id", rec.env_id},
                    {"total_profit", rec.schedule.total_profit},
                    {"memory_used", rec.schedule.memory_used},
                    {"entries", entries}});
  }
  write_json(path, {{"schema_version", kScheduleSchemaVersion}, {"scenario", scenario_name}, {"schedules", list}});
}

std::vector<ScheduleRecord> read_schedules(const fs::path& path) {
  const json root = read_json(path);
  std::vector<ScheduleRecord> out;
  try {
    for (const auto& s : root.at("schedules")) {
      ScheduleRecord rec;
      rec.env_id = s.at("env_id").get<int>();
      rec.schedule.total_profit = s.at("total_profit").get<double>();
      rec.schedule.memory_used = s.at("memory_used").get<double>();
      for (const auto& e : s.at("entries"))
        rec.schedule.entries.push_back({e.at("request_id").get<int>(), e.at("os").get<double>(), e.at("oe").get<double>()});
      out.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw MalformedScheduleError(fmt::format("invalid schedule file {}: {}", path.string(), e.what()));
  }
  return out;
}

std::string results_csv_header() {
  return "scenario_name,method,seed,train_fitness,test_mean_profit,test_std,training_time_s,evaluation_time_s,"
         "best_policy_text";
}

std::string results_csv_line(const ResultRow& r) {
  return fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}", r.scenario_name, r.method, r.seed,
                     r.train_fitness, r.test_mean_profit, r.test_std, r.training_time_s, r.evaluation_time_s,
                     csv_quote(r.best_policy_text));
}

void write_results_csv(const std::vector<ResultRow>& rows, const fs::path& path) {
  std::string text = results_csv_header() + "\n";
  for (const auto& r : rows) text += results_csv_line(r) + "\n";
  write_text(path, text);
}

void write_evolution_log_csv(const EvolutionLog& log, const fs::path& path) {
  std::string text =
      "generation,best_fitness,mean_fitness,mean_size,fac_es,fac_pd,p_exact,exact_draw_fraction,wall_time_s,"
      "eval_time_s\n";
  for (const auto& r : log.records) {
    text += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.generation,
                        r.best_fitness, r.mean_fitness, r.mean_size, r.fac_es, r.fac_pd, r.p_exact,
                        r.exact_draw_fraction, r.wall_time_s, r.eval_time_s);
  }
  write_text(path, text);
}

}  // namespace hegp
