#include "support.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace hegp::test {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  PolicyTree parse() {
    std::vector<Node> out;
    expr(out);
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return PolicyTree(std::move(out));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && s_[i_] == ' ') ++i_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  void expr(std::vector<Node>& out) {
    skip();
    if (eat("(")) {
      const std::size_t at = out.size();
      out.push_back(Node::fn(Op::Add));
      expr(out);
      skip();
      if (eat("+")) out[at].op = Op::Add;
      else if (eat("*")) out[at].op = Op::Mul;
      else if (eat("/")) out[at].op = Op::PDiv;
      else if (eat("- ")) out[at].op = Op::Sub;
      else fail("expected a binary operator");
      expr(out);
      expect(")");
      return;
    }
    for (const auto& [name, op] : {std::pair{"max(", Op::Max}, std::pair{"min(", Op::Min}}) {
      if (eat(name)) {
        out.push_back(Node::fn(op));
        expr(out);
        expect(",");
        expr(out);
        expect(")");
        return;
      }
    }
    if (eat("abs(")) {
      out.push_back(Node::fn(Op::Abs));
      expr(out);
      expect(")");
      return;
    }
    std::size_t j = i_;
    while (j < s_.size() && std::isupper(static_cast<unsigned char>(s_[j]))) ++j;
    if (j > i_) {
      const auto f = feature_from_name(s_.substr(i_, j - i_));
      if (!f) fail("unknown feature");
      out.push_back(Node::term(*f));
      i_ = j;
      return;
    }
    const std::string rest(s_.substr(i_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("expected a terminal");
    i_ += static_cast<std::size_t>(end - rest.c_str());
    out.push_back(Node::constant(v));
  }
};

}  // namespace

PolicyTree parse_policy(std::string_view text) { return Parser(text).parse(); }

std::optional<double> linear_scan_ow(const Request& req, double t, const Attitude& att_now, double pre,
                                     const SatelliteConfig& sat) {
  for (long k = 0;; ++k) {
    const double s = req.ws + static_cast<double>(k) * pre;
    if (s + req.dur > req.we) return std::nullopt;
    if (s >= t + trans_time(delta_g(att_now, attitude_at(req, s, sat)), sat)) return s;
  }
}

bool predicate_is_monotone(const Request& req, double t, const Attitude& att_now, double pre,
                           const SatelliteConfig& sat) {
  bool seen = false;
  for (long k = 0;; ++k) {
    const double s = req.ws + static_cast<double>(k) * pre;
    if (s + req.dur > req.we) return true;
    const bool ok = s >= t + trans_time(delta_g(att_now, attitude_at(req, s, sat)), sat);
    if (seen && !ok) return false;
    seen = seen || ok;
  }
}

std::vector<EnumeratedSchedule> enumerate_sequences(const ScenarioSpec& scenario, const EnvironmentRealization& env,
                                                    const StartRule& rule) {
  std::vector<EnumeratedSchedule> out;
  std::vector<bool> used(scenario.size(), false);
  EnumeratedSchedule cur;
  std::function<void(double, Attitude, double)> dfs = [&](double t, Attitude att, double mem) {
    out.push_back(cur);
    for (const auto& r : scenario.requests) {
      const auto i = static_cast<std::size_t>(r.id);
      if (used[i] || !env.visible[i]) continue;
      const auto os = rule(r, t, att);
      if (!os) continue;
      const double m = r.dur * env.actual_write_rate[i];
      if (mem + m > scenario.mmc) continue;
      used[i] = true;
      cur.entries.push_back({r.id, *os, *os + r.dur});
      cur.profit += env.actual_profit[i];
      dfs(*os + r.dur, attitude_at(r, *os + r.dur, scenario.satellite), mem + m);
      cur.profit -= env.actual_profit[i];
      cur.entries.pop_back();
      used[i] = false;
    }
  };
  dfs(0.0, Attitude{}, 0.0);
  return out;
}

ScenarioSpec make_scenario(std::vector<Request> requests, double horizon, double mmc) {
  ScenarioSpec s;
  s.name = "fixture";
  s.requests = std::move(requests);
  for (std::size_t i = 0; i < s.requests.size(); ++i) s.requests[i].id = static_cast<int>(i);
  s.horizon = horizon;
  s.mmc = mmc;
  return s;
}

EnvironmentRealization make_env(const ScenarioSpec& scenario, double profit, double rate) {
  EnvironmentRealization e;
  e.actual_profit.assign(scenario.size(), profit);
  e.actual_write_rate.assign(scenario.size(), rate);
  e.visible.assign(scenario.size(), true);
  return e;
}

Request random_request(RngStream& rng, int id, double horizon) {
  Request r;
  r.id = id;
  const double width = uniform(rng, 60.0, 120.0);
  r.ws = uniform(rng, 0.0, horizon - width);
  r.we = r.ws + width;
  r.dur = uniform(rng, 5.0, std::min(60.0, width));
  r.nominal_profit = 2.0 * r.dur;
  r.roll_fixed = uniform(rng, -27.0, 27.0);
  return r;
}

Attitude random_attitude(RngStream& rng) { return {uniform(rng, -27.0, 27.0), uniform(rng, -27.0, 27.0), 0.0}; }

const std::array<RankFixtureRow, 16> kRankFixture{{
    {"50_36_20_0.15", {1333.94, 1283.52, 1384.90, 1383.12, 1387.74}},
    {"50_36_20_0.30", {1206.97, 1293.89, 1336.81, 1334.78, 1351.09}},
    {"50_72_20_0.15", {1353.01, 1253.45, 1394.88, 1398.63, 1406.58}},
    {"50_72_20_0.30", {1212.65, 1273.00, 1363.76, 1359.69, 1361.16}},
    {"100_36_20_0.15", {1492.58, 1301.99, 1548.36, 1542.15, 1547.80}},
    {"100_36_20_0.30", {1471.70, 1286.54, 1492.52, 1495.56, 1502.75}},
    {"100_72_20_0.15", {1499.17, 1270.18, 1560.74, 1543.39, 1558.49}},
    {"100_72_20_0.30", {1478.57, 1252.04, 1499.77, 1496.70, 1510.23}},
    {"150_36_40_0.15", {2646.37, 2631.33, 2827.78, 2767.12, 2828.19}},
    {"150_36_40_0.30", {2647.44, 2571.17, 2751.63, 2662.42, 2731.55}},
    {"150_72_40_0.15", {2743.25, 2456.76, 2845.46, 2836.35, 2859.87}},
    {"150_72_40_0.30", {2636.81, 2417.71, 2763.08, 2766.40, 2774.66}},
    {"200_36_40_0.15", {2880.63, 2809.14, 3000.01, 2927.36, 3005.64}},
    {"200_36_40_0.30", {2851.83, 2721.55, 2921.01, 2844.34, 2919.43}},
    {"200_72_40_0.15", {2874.93, 2594.81, 3031.89, 3003.36, 3018.35}},
    {"200_72_40_0.30", {2857.73, 2568.64, 2930.58, 2882.61, 2926.25}},
}};

}  // namespace hegp::test
