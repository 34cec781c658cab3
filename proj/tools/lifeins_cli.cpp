/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// lifeins: command-line front end over the C API.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lifeins/lifeins.h"

namespace {

using Json = nlohmann::json;

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2 };

struct Global {
  std::string config_path;
  std::string format = "table";
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct Overrides {
  std::optional<double> r, mu, sigma, lambda_x, lambda_y, income_x, income_y, alpha;
  std::optional<std::string> scheme;
  std::optional<double> loading, loss_probability, rate, wealth;
};

struct CliError {
  int code;
  std::string message;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--r", o.r, "Riskless rate");
  cmd->add_option("--mu", o.mu, "Drift of the risky asset");
  cmd->add_option("--sigma", o.sigma, "Volatility of the risky asset");
  cmd->add_option("--lambda-x", o.lambda_x, "Hazard rate of (x)");
  cmd->add_option("--lambda-y", o.lambda_y, "Hazard rate of (y)");
  cmd->add_option("--income-x", o.income_x, "Income rate of (x), units of $50,000");
  cmd->add_option("--income-y", o.income_y, "Income rate of (y), units of $50,000");
  cmd->add_option("--alpha", o.alpha, "Absolute risk aversion");
  cmd->add_option("--scheme", o.scheme, "Premium scheme")
      ->check(CLI::IsMember({"single", "continuous", "both"}));
  auto* loading = cmd->add_option("--loading", o.loading, "Proportional premium loading");
  auto* loss = cmd->add_option("--loss-prob", o.loss_probability,
                               "Price both schemes to this insurer loss probability");
  auto* rate = cmd->add_option("--rate", o.rate, "Explicit premium rate (H or h)");
  loading->excludes(loss)->excludes(rate);
  loss->excludes(rate);
}

Json load_config(const Global& g) {
  if (g.config_path.empty()) return Json::object();
  char* text = nullptr;
  if (lifeins_config_load(g.config_path.c_str(), &text) != LIFEINS_OK) {
    throw CliError{kBadInput, std::string("config: ") + lifeins_last_error()};
  }
  Json doc = Json::parse(text);
  lifeins_free(text);
  return doc;
}

Json build_request(const Global& g, const Overrides& o) {
  Json doc = load_config(g);
  if (!doc.is_object()) throw CliError{kBadInput, "config: document must be an object"};
  auto set = [&](const char* key, const std::optional<double>& v) {
    if (v) doc[key] = *v;
  };
  set("r", o.r);
  set("mu", o.mu);
  set("sigma", o.sigma);
  set("lambda_x", o.lambda_x);
  set("lambda_y", o.lambda_y);
  set("income_x", o.income_x);
  set("income_y", o.income_y);
  set("alpha", o.alpha);
  set("wealth", o.wealth);
  if (o.scheme || o.loading || o.loss_probability || o.rate) {
    Json& p = doc["premium"];
    if (!p.is_object()) p = Json::object();
    if (o.scheme) p["scheme"] = *o.scheme;
    if (o.loading || o.loss_probability || o.rate) {
      p.erase("loading");
      p.erase("loss_probability");
      p.erase("rate");
      if (o.loading) p["loading"] = *o.loading;
      if (o.loss_probability) p["loss_probability"] = *o.loss_probability;
      if (o.rate) p["rate"] = *o.rate;
    }
  }
  return doc;
}

Json call(const std::string& endpoint, const Json& body) {
  char* text = nullptr;
  int http = 0;
  const lifeins_status st = lifeins_request(endpoint.c_str(), body.dump().c_str(), &http, &text);
  std::string reply = text ? text : "";
  lifeins_free(text);
  if (st != LIFEINS_OK) {
    const std::string field = lifeins_last_error_field();
    std::string msg = std::string(lifeins_status_name(st)) + ": " + lifeins_last_error();
    throw CliError{http >= 400 && http < 500 ? kBadInput : kFailed, msg};
  }
  return Json::parse(reply);
}

// Number formatting.
std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string dollars(double v) {
  // Cents only matter for small amounts.
  char buf[64];
  std::snprintf(buf, sizeof buf, std::abs(v) < 1000.0 ? "%.2f" : "%.0f", std::abs(v));
  std::string s = buf;
  const std::size_t dot = s.find('.');
  const int digits = static_cast<int>(dot == std::string::npos ? s.size() : dot);
  for (int i = digits - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return (v < 0 ? "-$" : "$") + s;
}

std::string money(const Json& m) {
  return num(m["units"].get<double>()) + " (" + dollars(m["dollars"].get<double>()) + ")";
}

std::string value_text(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_object() && v.contains("units")) return money(v);
  if (v.is_number()) return num(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// A label column followed by one column per scheme.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()), 0);
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream os;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        line += row[i];
        if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
      }
      os << line << '\n';
    }
    return os.str();
  }

  std::string csv() const {
    std::ostringstream os;
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> schemes_in(const Json& obj) {
  std::vector<std::string> out;
  for (const char* s : {"single", "continuous"}) {
    if (obj.contains(s)) out.push_back(s);
  }
  return out;
}

std::string inputs_line(const Json& in) {
  std::ostringstream os;
  os << "household:";
  for (const char* k : {"r", "mu", "sigma", "lambda_x", "lambda_y", "income_x", "income_y", "alpha"}) {
    os << ' ' << k << '=' << num(in[k].get<double>());
  }
  os << "\npremium:";
  for (const auto& item : in["premium"].items()) os << ' ' << item.key() << '=' << value_text(item.value());
  if (in.contains("wealth")) os << "\nwealth: " << num(in["wealth"].get<double>());
  os << '\n';
  return os.str();
}

// Long CSV for per-scheme results: quantity,scheme,units,dollars.
void long_rows(Table& t, const std::string& scheme, const std::string& prefix, const Json& obj) {
  for (const auto& item : obj.items()) {
    const Json& v = item.value();
    const std::string name = prefix.empty() ? item.key() : prefix + "." + item.key();
    if (v.is_object() && v.contains("units")) {
      t.add({name, scheme, num(v["units"].get<double>(), 17), num(v["dollars"].get<double>(), 17)});
    } else if (v.is_object()) {
      long_rows(t, scheme, name, v);
    } else if (v.is_number()) {
      t.add({name, scheme, num(v.get<double>(), 17), ""});
    } else if (!v.is_null()) {
      t.add({name, scheme, value_text(v), ""});
    }
  }
}

std::string render_solve(const Json& r, const std::string& format) {
  const auto schemes = schemes_in(r["policies"]);
  if (format == "csv") {
    Table t({"quantity", "scheme", "units", "dollars"});
    for (const auto& s : schemes) {
      long_rows(t, s, "", r["policies"][s]);
      if (r.contains("ruin")) long_rows(t, s, "ruin", r["ruin"][s]);
    }
    return t.csv();
  }
  std::vector<std::string> header{""};
  header.insert(header.end(), schemes.begin(), schemes.end());
  Table t(header);
  auto row = [&](const std::string& label, auto get) {
    std::vector<std::string> cells{label};
    for (const auto& s : schemes) cells.push_back(get(s));
    t.add(cells);
  };
  const Json& p = r["policies"];
  row("premium rate", [&](const std::string& s) { return num(p[s]["quote"]["rate"].get<double>()); });
  row("loading", [&](const std::string& s) { return num(p[s]["quote"]["loading"].get<double>()); });
  row("insurer loss probability",
      [&](const std::string& s) { return num(p[s]["quote"]["loss_probability"].get<double>()); });
  row("optimal benefit", [&](const std::string& s) { return money(p[s]["benefit"]); });
  row("risky allocation", [&](const std::string& s) { return money(p[s]["risky_allocation"]); });
  row("consumption before death", [&](const std::string& s) {
    const Json& c = p[s]["consumption"]["before_first_death"];
    return num(c["per_unit_wealth"].get<double>()) + " w + " + money(c["constant"]);
  });
  row("consumption at purchase", [&](const std::string& s) {
    const Json& c = p[s]["consumption"]["at_purchase"];
    return num(c["per_unit_wealth"].get<double>()) + " w + " + money(c["constant"]);
  });
  for (const char* who : {"x", "y"}) {
    row(std::string("consumption, ") + who + " survives", [&](const std::string& s) {
      const Json& c = p[s]["consumption"]["after_first_death"][who];
      return num(c["per_unit_wealth"].get<double>()) + " w + " + money(c["constant"]);
    });
  }
  row("jump if x survives", [&](const std::string& s) { return money(p[s]["jump_x"]); });
  row("jump if y survives", [&](const std::string& s) { return money(p[s]["jump_y"]); });
  row("wealth drift", [&](const std::string& s) { return money(p[s]["wealth_drift"]); });
  row("alpha threshold", [&](const std::string& s) { return value_text(p[s]["alpha_threshold"]); });
  if (r.contains("ruin")) {
    for (const char* k : {"p_before", "p_between", "p_total"}) {
      row(std::string("ruin ") + k, [&](const std::string& s) { return value_text(r["ruin"][s][k]); });
    }
    row("ruin case", [&](const std::string& s) {
      const Json& x = r["ruin"][s];
      return x.contains("case") ? x["case"].get<std::string>() + "/" + x["subcase"].get<std::string>()
                                : std::string("-");
    });
  }
  std::ostringstream os;
  os << inputs_line(r["inputs"]);
  os << "max insurer loss probability: " << num(r["market"]["max_loss_probability"].get<double>())
     << "\n\n"
     << t.render();
  return os.str();
}

std::string render_calibrate(const Json& r, const std::string& format) {
  Table t({"scheme", "rate", "loading", "loss_probability", "benefit_units", "benefit_dollars"});
  for (const char* s : {"single", "continuous"}) {
    const Json& q = r["quotes"][s];
    const Json& b = r["benefits"][s];
    t.add({s, num(q["rate"].get<double>(), format == "csv" ? 17 : 6),
           num(q["loading"].get<double>(), format == "csv" ? 17 : 6),
           num(q["loss_probability"].get<double>(), format == "csv" ? 17 : 6),
           num(b["units"].get<double>(), format == "csv" ? 17 : 6),
           format == "csv" ? num(b["dollars"].get<double>(), 17) : dollars(b["dollars"].get<double>())});
  }
  if (format == "csv") return t.csv();
  std::ostringstream os;
  os << inputs_line(r["inputs"]) << "max insurer loss probability: "
     << num(r["max_loss_probability"].get<double>()) << "\n\n"
     << t.render() << "\nidentity gaps: r H D* - h D-bar* = "
     << num(r["identities"]["premium_flow_gap"].get<double>(), 3)
     << ", (1 - H) D* - D-bar* = " << num(r["identities"]["benefit_gap"].get<double>(), 3) << '\n';
  return os.str();
}

std::string render_sweep(const Json& r, const std::string& format) {
  const Json& sw = r["sweep"];
  const std::string param = sw["parameter"];
  if (format == "csv") {
    Table t({"parameter", "value", "D_star", "D_bar_star", "dc_x", "dc_y"});
    for (const Json& row : sw["rows"]) {
      t.add({param, num(row["value"].get<double>(), 17),
             num(row["benefit_single"]["units"].get<double>(), 17),
             num(row["benefit_continuous"]["units"].get<double>(), 17),
             num(row["jump_x"]["units"].get<double>(), 17),
             num(row["jump_y"]["units"].get<double>(), 17)});
    }
    return t.csv();
  }
  Table t({param, "D*", "D-bar*", "jump x", "jump y"});
  for (const Json& row : sw["rows"]) {
    t.add({num(row["value"].get<double>()), money(row["benefit_single"]),
           money(row["benefit_continuous"]), money(row["jump_x"]), money(row["jump_y"])});
  }
  std::ostringstream os;
  os << inputs_line(r["inputs"]) << '\n' << t.render() << '\n';
  for (const auto& item : sw["claims"].items()) {
    os << item.key() << ": " << item.value().get<std::string>() << '\n';
  }
  for (const Json& n : sw["notes"]) os << "note: " << n.get<std::string>() << '\n';
  return os.str();
}

std::string render_ruin(const Json& r, const std::string& format) {
  const auto schemes = schemes_in(r["ruin"]);
  if (format == "csv") {
    Table t({"quantity", "scheme", "units", "dollars"});
    for (const auto& s : schemes) long_rows(t, s, "", r["ruin"][s]);
    return t.csv();
  }
  std::vector<std::string> header{""};
  header.insert(header.end(), schemes.begin(), schemes.end());
  Table t(header);
  for (const char* k : {"p_before", "p_between", "p_at_first_death", "p_total", "case", "subcase"}) {
    std::vector<std::string> cells{k};
    for (const auto& s : schemes) cells.push_back(value_text(r["ruin"][s][k]));
    t.add(cells);
  }
  for (const char* k : {"c0", "delta", "jump_x", "jump_y"}) {
    std::vector<std::string> cells{k};
    for (const auto& s : schemes) cells.push_back(value_text(r["ruin"][s]["inputs"][k]));
    t.add(cells);
  }
  return inputs_line(r["inputs"]) + "\n" + t.render();
}

std::string render_simulate(const Json& r, const std::string& format) {
  Table t({"scheme", "quantity", "analytic", "monte_carlo", "std_error", "agrees"});
  const int d = format == "csv" ? 17 : 6;
  auto add = [&](const std::string& scheme, const std::string& name, const Json& e) {
    t.add({scheme, name, num(e["analytic"].get<double>(), d), num(e["monte_carlo"].get<double>(), d),
           num(e["std_error"].get<double>(), d), e["agrees"].get<bool>() ? "yes" : "no"});
  };
  for (const auto& s : schemes_in(r["ruin"])) {
    for (const char* k : {"p_before", "p_between", "p_at_first_death", "p_total"}) {
      add(s, k, r["ruin"][s][k]);
    }
  }
  if (r.contains("insurer_loss")) {
    for (const auto& s : schemes_in(r["insurer_loss"])) add(s, "insurer_loss", r["insurer_loss"][s]);
  }
  if (format == "csv") return t.csv();
  const Json& sim = r["simulation"];
  std::ostringstream os;
  os << inputs_line(r["inputs"]) << "paths: " << sim["paths"].get<std::uint64_t>()
     << "  dt: " << num(sim["dt"].get<double>()) << "  seed: " << sim["seed"].get<std::uint64_t>()
     << "  rng: " << sim["rng_fingerprint"].get<std::string>() << "\n\n"
     << t.render();
  return os.str();
}

std::string render_verify(const Json& r, const std::string& format) {
  Table t({"scheme", "passed", "points", "worst_hjb", "worst_gradient", "worst_buy_region",
           "boundary_equality", "coefficient_gap", "worst_fd_gap"});
  const int d = format == "csv" ? 17 : 3;
  for (const auto& s : schemes_in(r["verification"])) {
    const Json& v = r["verification"][s];
    t.add({s, v["passed"].get<bool>() ? "yes" : "no", std::to_string(v["points"].get<std::uint64_t>()),
           num(v["worst_hjb"].get<double>(), d), num(v["worst_gradient"].get<double>(), d),
           num(v["worst_buy_region"].get<double>(), d), num(v["boundary_equality"].get<double>(), d),
           num(v["coefficient_gap"].get<double>(), d), num(v["worst_fd_gap"].get<double>(), d)});
  }
  if (format == "csv") return t.csv();
  std::ostringstream os;
  os << inputs_line(r["inputs"]) << '\n'
     << t.render() << '\n'
     << (r["passed"].get<bool>() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

std::string render_elicit(const Json& r, const std::string& format) {
  if (format == "csv") {
    return "alpha,loss,p,willingness_to_pay\n" + num(r["alpha"].get<double>(), 17) + "," +
           num(r["inputs"]["loss"]["units"].get<double>(), 17) + "," +
           num(r["inputs"]["p"].get<double>(), 17) + "," +
           num(r["inputs"]["willingness_to_pay"]["units"].get<double>(), 17) + "\n";
  }
  return "loss " + money(r["inputs"]["loss"]) + " with probability " +
         num(r["inputs"]["p"].get<double>()) + ", willing to pay " +
         money(r["inputs"]["willingness_to_pay"]) + "\nalpha = " +
         num(r["alpha"].get<double>(), 10) + "\n";
}

Json manifest(const std::string& command, const Global& g, const Json& reply) {
  Json m = {{"command", command},
            {"config_path", g.config_path.empty() ? Json(nullptr) : Json(g.config_path)},
            {"parameters", reply.contains("inputs") ? reply["inputs"] : Json(nullptr)},
            {"seed", g.seed ? Json(*g.seed) : Json(nullptr)},
            {"outputs", g.out.empty() ? Json::array() : Json::array({g.out})},
            {"version", lifeins_version()}};
  return m;
}

void emit(const std::string& command, const Global& g, Json reply,
          std::string (*render)(const Json&, const std::string&), const std::string& format) {
  std::string text;
  const Json m = manifest(command, g, reply);
  if (format == "json") {
    reply["manifest"] = m;
    text = reply.dump(2) + "\n";
  } else {
    text = render(reply, format);
    if (!g.out.empty()) text = "# manifest: " + m.dump() + "\n" + text;
  }
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw CliError{kBadInput, "cannot write " + g.out};
  f << text;
}

std::atomic<lifeins_server*> running_server{nullptr};

void on_signal(int) {
  if (lifeins_server* s = running_server.load()) lifeins_server_stop(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal life insurance for a two-earner household"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lifeins_version()));
  Global g;
  app.add_option("--config", g.config_path, "Household config (.toml or .json)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--seed", g.seed, "Random seed for simulation");
  app.add_option("--out", g.out, "Write output to this file");

  Overrides o;
  auto* solve = app.add_subcommand("solve", "Optimal benefits, consumption and investment");
  add_overrides(solve, o);
  solve->add_option("--wealth", o.wealth, "Initial wealth, adds ruin probabilities");

  auto* calibrate = app.add_subcommand("calibrate", "Premium rates for a loading or loss probability");
  add_overrides(calibrate, o);

  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 20, sweep_workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Optimal benefits across a parameter grid");
  add_overrides(sweep, o);
  sweep->add_option("--param", param, "theta, alpha, income_x, income_y, lambda_x or lambda_y")
      ->required();
  sweep->add_option("--from", from)->required();
  sweep->add_option("--to", to)->required();
  sweep->add_option("--steps", steps, "Number of grid intervals");
  sweep->add_option("--workers", sweep_workers, "Threads (0 = all cores)");

  auto* ruin = app.add_subcommand("ruin", "Probability that consumption reaches zero");
  add_overrides(ruin, o);
  ruin->add_option("--wealth", o.wealth, "Initial wealth");

  std::optional<long long> paths;
  std::optional<double> dt, horizon;
  std::optional<int> sim_workers;
  bool no_bridge = false, stepped = false;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the ruin and loss probabilities");
  add_overrides(simulate, o);
  simulate->add_option("--wealth", o.wealth, "Initial wealth");
  simulate->add_option("--paths", paths, "Number of paths");
  simulate->add_option("--dt", dt, "Time step in years");
  simulate->add_option("--horizon", horizon, "Truncation horizon in years");
  simulate->add_option("--workers", sim_workers, "Threads (0 = all cores)");
  simulate->add_flag("--no-bridge", no_bridge, "Turn off the bridge crossing test");
  simulate->add_flag("--stepped", stepped, "Step every path at dt");

  double tol = 1e-6;
  std::optional<int> w_points, d_points;
  std::optional<double> w_min, w_max, d_max;
  bool fd = false;
  auto* verify = app.add_subcommand("verify", "Check the variational inequality on a grid");
  add_overrides(verify, o);
  verify->add_option("--tol", tol, "Relative residual tolerance");
  verify->add_option("--w-points", w_points);
  verify->add_option("--d-points", d_points);
  verify->add_option("--w-min", w_min);
  verify->add_option("--w-max", w_max);
  verify->add_option("--d-max", d_max);
  verify->add_flag("--fd", fd, "Cross-check derivatives by finite differences");

  double loss = 0.0, p = 0.0, wtp = 0.0;
  bool in_dollars = false;
  auto* elicit = app.add_subcommand("elicit", "Risk aversion from a willingness to pay");
  elicit->add_option("--loss", loss)->required();
  elicit->add_option("--p", p, "Probability of the loss")->required();
  elicit->add_option("--wtp", wtp, "Largest premium the household would pay")->required();
  elicit->add_flag("--dollars", in_dollars, "Amounts are in dollars rather than units");

  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string cors;
  auto* serve = app.add_subcommand("serve", "Serve the /v1 JSON endpoints");
  serve->add_option("--bind", bind, "Address to listen on");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--cors-origin", cors, "Extra origin allowed by CORS");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (serve->parsed()) {
      lifeins_server* s = nullptr;
      if (lifeins_server_create(bind.c_str(), port, cors.c_str(), &s) != LIFEINS_OK) {
        throw CliError{kBadInput, lifeins_last_error()};
      }
      running_server = s;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving on http://" << bind << ":" << lifeins_server_port(s) << "/v1\n";
      const lifeins_status st = lifeins_server_run(s);
      running_server = nullptr;
      lifeins_server_destroy(s);
      return st == LIFEINS_OK ? kOk : kFailed;
    }
    if (elicit->parsed()) {
      Json body = {{"p", p}};
      body[in_dollars ? "loss_dollars" : "loss"] = loss;
      body[in_dollars ? "willingness_to_pay_dollars" : "willingness_to_pay"] = wtp;
      emit("elicit", g, call("elicit", body), render_elicit, g.format);
      return kOk;
    }
    Json body = build_request(g, o);
    if (solve->parsed()) {
      emit("solve", g, call("solve", body), render_solve, g.format);
    } else if (calibrate->parsed()) {
      emit("calibrate", g, call("calibrate", body), render_calibrate, g.format);
    } else if (sweep->parsed()) {
      body["sweep"] = {{"parameter", param}, {"from", from}, {"to", to}, {"steps", steps},
                       {"workers", sweep_workers}};
      const std::string format = app.get_option("--format")->count() ? g.format : "csv";
      emit("sweep", g, call("sweep", body), render_sweep, format);
    } else if (ruin->parsed()) {
      emit("ruin", g, call("ruin", body), render_ruin, g.format);
    } else if (simulate->parsed()) {
      Json sim = Json::object();
      if (paths) sim["paths"] = *paths;
      if (dt) sim["dt"] = *dt;
      if (horizon) sim["horizon_cap"] = *horizon;
      if (sim_workers) sim["workers"] = *sim_workers;
      if (g.seed) sim["seed"] = *g.seed;
      if (no_bridge) sim["bridge_correction"] = false;
      if (stepped) sim["aggregate_steps"] = false;
      body["simulation"] = sim;
      emit("simulate", g, call("simulate", body), render_simulate, g.format);
    } else if (verify->parsed()) {
      Json v = {{"tolerance", tol}, {"finite_difference", fd}};
      if (w_points) v["w_points"] = *w_points;
      if (d_points) v["d_points"] = *d_points;
      if (w_min) v["w_min"] = *w_min;
      if (w_max) v["w_max"] = *w_max;
      if (d_max) v["d_max"] = *d_max;
      body["verify"] = v;
      const Json reply = call("verify", body);
      emit("verify", g, reply, render_verify, g.format);
      return reply["passed"].get<bool>() ? kOk : kFailed;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}
