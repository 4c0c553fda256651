// dvarint: run structure-preserving integrators and report their
// conservation residuals.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dvarint/fieldtheory.hpp"
#include "dvarint/mechanics.hpp"
#include "dvarint/models.hpp"
#include "dvarint/verify.hpp"

using json = nlohmann::ordered_json;
using namespace dvarint;

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("DVARINT_LOG");
  if (!env) return LogLevel::Quiet;
  const std::string v = env;
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Quiet;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "dvarint: " << msg << "\n";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "harmonic";
  std::string scheme = "midpoint";
  double tau = 0.1;
  double h = 0.1;
  int steps = 100;
  int extent = 64;
  std::string initial;  // comma-separated numbers, or a named field profile
  int tangents = 2;
  unsigned seed = 1;
  std::string output;  // empty = stdout
  std::string format = "csv";
  std::vector<std::string> taus;  // order study only
  int windows = 100;              // residual report sample count
  std::map<std::string, double> params;
};

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "model") cfg.model = value;
      else if (key == "scheme") cfg.scheme = value;
      else if (key == "tau") cfg.tau = std::stod(value);
      else if (key == "h") cfg.h = std::stod(value);
      else if (key == "steps") cfg.steps = std::stoi(value);
      else if (key == "extent") cfg.extent = std::stoi(value);
      else if (key == "initial") cfg.initial = value;
      else if (key == "tangents") cfg.tangents = std::stoi(value);
      else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(value));
      else if (key == "output") cfg.output = value;
      else if (key == "format") cfg.format = value;
      else if (key == "windows") cfg.windows = std::stoi(value);
      else if (key.rfind("param.", 0) == 0) cfg.params[key.substr(6)] = std::stod(value);
      else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key " + key);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.tau <= 0.0) throw ConfigError("tau must be > 0");
  if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json");
  static const std::vector<std::string> schemes = {
      "del", "canonical", "midpoint", "order4", "explicit_euler",
      "leapfrog_field", "canonical_field", "box"};
  if (std::find(schemes.begin(), schemes.end(), cfg.scheme) == schemes.end())
    throw ConfigError("unknown scheme: " + cfg.scheme);
  const bool field_scheme = cfg.scheme == "leapfrog_field" ||
                            cfg.scheme == "canonical_field" || cfg.scheme == "box";
  const bool field_model = cfg.model == "nonlinear_wave" ||
                           cfg.model == "sine_gordon_bridges" ||
                           cfg.model == "linear_wave_bridges";
  if (field_scheme != field_model)
    throw ConfigError("scheme " + cfg.scheme + " is incompatible with model " + cfg.model);
  if (field_scheme) {
    if (cfg.h <= 0.0) throw ConfigError("h must be > 0 for field runs");
    if (cfg.extent < 2) throw ConfigError("extent must be >= 2");
  }
  if (cfg.scheme == "box" &&
      (cfg.model == "nonlinear_wave"))
    throw ConfigError("box scheme needs a Bridges-form model");
  if ((cfg.scheme == "leapfrog_field" || cfg.scheme == "canonical_field") &&
      cfg.model != "nonlinear_wave")
    throw ConfigError("scheme " + cfg.scheme + " needs the nonlinear_wave model");
}

void write_output(const RunConfig& cfg, const std::string& body) {
  if (cfg.output.empty()) {
    std::cout << body;
    if (!std::cout) throw IoError("writing to stdout failed");
    return;
  }
  const std::string tmp = cfg.output + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp);
    out << body;
    if (!out) throw IoError("writing " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), cfg.output.c_str()) != 0)
    throw IoError("renaming " + tmp + " to " + cfg.output + " failed");
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

Vec mechanics_initial(const RunConfig& cfg) {
  if (cfg.initial.empty()) {
    Vec z(2);
    z << 0.0, 1.0;
    return z;
  }
  const auto nums = parse_numbers(cfg.initial);
  if (nums.size() != 2) throw ConfigError("mechanics initial state needs p,q");
  Vec z(2);
  z << nums[0], nums[1];
  return z;
}

std::vector<Vec> tangent_seeds(const RunConfig& cfg, int dim) {
  std::mt19937 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> seeds;
  seeds.reserve(static_cast<std::size_t>(cfg.tangents));
  for (int t = 0; t < cfg.tangents; ++t) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    seeds.push_back(std::move(v));
  }
  return seeds;
}

// -- mechanics ---------------------------------------------------------------

struct MechanicsRun {
  Trajectory traj;
  MechanicsModel model;
};

MechanicsRun run_mechanics(const RunConfig& cfg) {
  MechanicsModel model = make_mechanics({cfg.model, cfg.params});
  const Vec z0 = mechanics_initial(cfg);
  Trajectory traj;
  if (cfg.scheme == "del") {
    // Euler-Lagrange recursion seeded by (q - tau p, q); reported states use
    // the discrete Legendre momenta.
    const Vec q0 = z0.tail(1);
    const Vec q_prev = q0 - cfg.tau * z0.head(1);
    const auto qs = integrate_del(model.lagrangian, q_prev, q0, cfg.tau, cfg.steps);
    traj.grid = Grid1D{cfg.tau, cfg.steps + 1, false};
    for (std::size_t k = 0; k + 1 < qs.size(); ++k) {
      const Vec p = discrete_legendre(model.lagrangian, qs[k], qs[k + 1], cfg.tau);
      Vec z(2);
      z << p[0], qs[k][0];
      traj.states.push_back(z);
    }
    // last momentum from the closing pair
    Vec z(2);
    z << traj.states.back()[0], qs.back()[0];
    const Vec p_last =
        discrete_legendre(model.lagrangian, qs[qs.size() - 2], qs.back(), cfg.tau);
    z[0] = p_last[0];
    traj.states.push_back(z);
  } else {
    traj = integrate(scheme_from_name(cfg.scheme), model.hamiltonian, z0, cfg.tau,
                     cfg.steps, tangent_seeds(cfg, 2));
  }
  return {std::move(traj), std::move(model)};
}

std::string mechanics_records(const RunConfig& cfg, const MechanicsRun& run) {
  const auto& traj = run.traj;
  const bool have_pair = traj.tangents.size() >= 2;
  if (cfg.format == "json") {
    json rows = json::array();
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      json row;
      row["step"] = k;
      row["time"] = static_cast<double>(k) * cfg.tau;
      row["p0"] = traj.states[k][0];
      row["q0"] = traj.states[k][1];
      row["energy"] =
          run.model.hamiltonian.eval(traj.states[k].tail(1), traj.states[k].head(1));
      if (have_pair)
        row["omega_01"] = symplectic_area(traj.tangents[0][k], traj.tangents[1][k]);
      rows.push_back(row);
    }
    return rows.dump(2) + "\n";
  }
  std::string body = "step,time,p0,q0,energy";
  if (have_pair) body += ",omega_01";
  body += "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double e =
        run.model.hamiltonian.eval(traj.states[k].tail(1), traj.states[k].head(1));
    body += std::to_string(k) + "," + fmt(static_cast<double>(k) * cfg.tau) + "," +
            fmt(traj.states[k][0]) + "," + fmt(traj.states[k][1]) + "," + fmt(e);
    if (have_pair)
      body += "," + fmt(symplectic_area(traj.tangents[0][k], traj.tangents[1][k]));
    body += "\n";
  }
  return body;
}

// -- fields ------------------------------------------------------------------

Vec field_initial_row(const RunConfig& cfg) {
  const int n = cfg.extent;
  Vec u = Vec::Zero(n);
  if (cfg.initial.empty() || cfg.initial == "zero") return u;
  if (cfg.initial == "gaussian") {
    const double amp = cfg.params.count("amp") ? cfg.params.at("amp") : 1.0;
    const double width = cfg.params.count("width") ? cfg.params.at("width") : 1.0;
    for (int j = 0; j < n; ++j) {
      const double x = (j - n / 2) * cfg.h;
      u[j] = amp * std::exp(-x * x / (2.0 * width * width));
    }
    return u;
  }
  const auto nums = parse_numbers(cfg.initial);
  if (static_cast<int>(nums.size()) != n)
    throw ConfigError("field initial data length must equal extent");
  for (int j = 0; j < n; ++j) u[j] = nums[j];
  return u;
}

FieldRow bridges_initial_row(const RunConfig& cfg) {
  const int n = cfg.extent;
  Grid1D grid{cfg.h, n, true};
  FieldRow row(grid, 3);
  if (cfg.initial == "kink") {
    const double c = cfg.params.count("speed") ? cfg.params.at("speed") : 0.0;
    const double x0 = cfg.params.count("x0") ? cfg.params.at("x0") : 0.0;
    const double gamma = std::sqrt(1.0 - c * c);
    for (int j = 0; j < n; ++j) {
      const double x = (j - n / 2) * cfg.h;
      const double s = (x - x0) / gamma;
      const double w = 2.0 / (gamma * std::cosh(s));
      row.values(0, j) = sine_gordon_kink(x, x0, c);
      row.values(1, j) = -c * w;
      row.values(2, j) = w;
    }
    return row;
  }
  if (cfg.initial.empty() || cfg.initial == "zero") return row;
  const auto nums = parse_numbers(cfg.initial);
  if (static_cast<int>(nums.size()) != 3 * n)
    throw ConfigError("Bridges initial data needs 3*extent values");
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < 3; ++k) row.values(k, j) = nums[3 * j + k];
  return row;
}

std::vector<FieldRow> field_tangent_rows(const RunConfig& cfg, const Grid1D& grid, int d) {
  std::mt19937 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<FieldRow> seeds;
  for (int t = 0; t < cfg.tangents; ++t) {
    FieldRow r(grid, d);
    for (int j = 0; j < grid.n_nodes; ++j)
      for (int k = 0; k < d; ++k) r.values(k, j) = gauss(rng);
    seeds.push_back(std::move(r));
  }
  return seeds;
}

struct BoxRun {
  std::vector<FieldRow> rows;
  std::vector<std::vector<FieldRow>> tangents;  // [family][time]
  HamiltonianPDESystem sys;
};

BoxRun run_box(const RunConfig& cfg) {
  FieldModel model = make_field({cfg.model, cfg.params});
  if (!model.pde) throw ConfigError("model " + cfg.model + " has no Bridges form");
  BoxRun run;
  run.sys = *model.pde;
  run.rows.push_back(bridges_initial_row(cfg));
  const auto seeds = field_tangent_rows(cfg, run.rows[0].grid, run.sys.d);
  run.tangents.resize(seeds.size());
  for (std::size_t t = 0; t < seeds.size(); ++t) run.tangents[t].push_back(seeds[t]);
  for (int i = 0; i < cfg.steps; ++i) {
    const FieldRow& cur = run.rows.back();
    FieldRow next = box_step_row(run.sys, cur, cfg.tau);
    for (auto& fam : run.tangents)
      fam.push_back(box_tangent_row(run.sys, cur, next, fam.back(), cfg.tau));
    run.rows.push_back(std::move(next));
    if (log_level() >= LogLevel::Debug)
      std::cerr << "dvarint: box row " << i + 1 << " done\n";
  }
  return run;
}

struct WaveRun {
  std::vector<Vec> u_rows;
  std::vector<Vec> pi_rows;  // canonical_field only
  DiscreteFieldLagrangian L;
};

WaveRun run_wave(const RunConfig& cfg) {
  FieldModel model = make_field({cfg.model, cfg.params});
  if (!model.lagrangian) throw ConfigError("model " + cfg.model + " has no field Lagrangian");
  WaveRun run;
  run.L = *model.lagrangian;
  const Vec u0 = field_initial_row(cfg);
  if (cfg.scheme == "canonical_field") {
    Vec u = u0, pi = Vec::Zero(cfg.extent);
    run.u_rows.push_back(u);
    run.pi_rows.push_back(pi);
    for (int i = 0; i < cfg.steps; ++i) {
      auto [un, pn] = field_canonical_step(run.L, u, pi, cfg.tau, cfg.h);
      u = std::move(un);
      pi = std::move(pn);
      run.u_rows.push_back(u);
      run.pi_rows.push_back(pi);
    }
  } else {
    Vec prev = u0, cur = u0;  // zero initial velocity
    run.u_rows.push_back(cur);
    for (int i = 0; i < cfg.steps; ++i) {
      Vec next = field_del_step(run.L, prev, cur, cfg.tau, cfg.h);
      prev = std::move(cur);
      cur = std::move(next);
      run.u_rows.push_back(cur);
    }
  }
  return run;
}

// -- subcommands ---------------------------------------------------------------

int cmd_run(const RunConfig& cfg) {
  validate(cfg);
  log_info("run: model=" + cfg.model + " scheme=" + cfg.scheme);
  if (cfg.scheme == "box") {
    const BoxRun run = run_box(cfg);
    const bool have_pair = run.tangents.size() >= 2;
    if (cfg.format == "json") {
      json rows = json::array();
      for (std::size_t i = 0; i < run.rows.size(); ++i) {
        json row;
        row["step"] = i;
        row["time"] = static_cast<double>(i) * cfg.tau;
        row["norm"] = run.rows[i].values.norm();
        if (have_pair)
          row["omega0_sum"] =
              omega0_row_sum(run.sys, run.tangents[0][i], run.tangents[1][i]);
        rows.push_back(row);
      }
      write_output(cfg, rows.dump(2) + "\n");
    } else {
      std::string body = have_pair ? "step,time,norm,omega0_sum\n" : "step,time,norm\n";
      for (std::size_t i = 0; i < run.rows.size(); ++i) {
        body += std::to_string(i) + "," + fmt(static_cast<double>(i) * cfg.tau) + "," +
                fmt(run.rows[i].values.norm());
        if (have_pair)
          body += "," +
                  fmt(omega0_row_sum(run.sys, run.tangents[0][i], run.tangents[1][i]));
        body += "\n";
      }
      write_output(cfg, body);
    }
    return 0;
  }
  if (cfg.scheme == "leapfrog_field" || cfg.scheme == "canonical_field") {
    const WaveRun run = run_wave(cfg);
    std::string body = "step,time,norm\n";
    json rows = json::array();
    for (std::size_t i = 0; i < run.u_rows.size(); ++i) {
      if (cfg.format == "json") {
        json row;
        row["step"] = i;
        row["time"] = static_cast<double>(i) * cfg.tau;
        row["norm"] = run.u_rows[i].norm();
        rows.push_back(row);
      } else {
        body += std::to_string(i) + "," + fmt(static_cast<double>(i) * cfg.tau) + "," +
                fmt(run.u_rows[i].norm()) + "\n";
      }
    }
    write_output(cfg, cfg.format == "json" ? rows.dump(2) + "\n" : body);
    return 0;
  }
  const MechanicsRun run = run_mechanics(cfg);
  write_output(cfg, mechanics_records(cfg, run));
  return 0;
}

int cmd_residuals(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.tangents < 2) throw ConfigError("residual reports need tangents >= 2");
  json report;
  report["model"] = cfg.model;
  report["scheme"] = cfg.scheme;
  report["tau"] = cfg.tau;
  report["steps"] = cfg.steps;
  report["seed"] = cfg.seed;
  if (cfg.scheme == "box") {
    const BoxRun run = run_box(cfg);
    ResidualSeries ms =
        multisymplectic_residual(run.sys, run.rows, run.tangents[0], run.tangents[1], cfg.tau);
    report["max_multisymplectic_residual"] = ms.max_abs;
    report["mean_multisymplectic_residual"] = ms.mean;
    double sum0 = omega0_row_sum(run.sys, run.tangents[0][0], run.tangents[1][0]);
    double max_drift = 0.0;
    for (std::size_t i = 0; i < run.rows.size(); ++i)
      max_drift = std::max(
          max_drift,
          std::abs(omega0_row_sum(run.sys, run.tangents[0][i], run.tangents[1][i]) - sum0));
    report["max_omega0_row_sum_drift"] = max_drift;
    std::mt19937 rng(cfg.seed + 17u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto rand_vec = [&](int len) {
      Vec v(len);
      for (int i = 0; i < len; ++i) v[i] = dist(rng);
      return v;
    };
    double max_coh = 0.0;
    for (int w = 0; w < cfg.windows; ++w) {
      const Vec cell = rand_vec(4 * run.sys.d);
      const Vec xi = rand_vec(4 * run.sys.d);
      const Vec eta = rand_vec(4 * run.sys.d);
      const double step = 1e-5 * (1.0 + cell.norm());
      max_coh = std::max(max_coh,
                         std::abs(field_cohomology_identity_residual(
                             run.sys, cell, xi, eta, cfg.tau, cfg.h, step)));
    }
    report["max_cohomology_residual"] = max_coh;
  } else if (cfg.scheme == "leapfrog_field" || cfg.scheme == "canonical_field") {
    throw ConfigError("residual reports cover mechanics schemes and the box scheme");
  } else {
    RunConfig mech = cfg;
    if (mech.scheme == "del") throw ConfigError("residual reports need a phase-space scheme");
    const MechanicsRun run = run_mechanics(mech);
    const ResidualSeries sr = symplectic_residual_series(run.traj);
    report["max_symplectic_residual"] = sr.max_abs;
    report["mean_symplectic_residual"] = sr.mean;
    const auto areas = symplectic_area_series(run.traj);
    double growth = 0.0;
    int counted = 0;
    for (std::size_t k = 0; k + 1 < areas.size(); ++k)
      if (std::abs(areas[k]) > 1e-30) {
        growth += areas[k + 1] / areas[k];
        ++counted;
      }
    report["mean_growth_factor"] = counted ? growth / counted : 1.0;
    const ResidualSeries er = energy_series(run.traj, run.model.hamiltonian);
    report["energy_trend_slope"] = er.trend_slope;
    report["max_energy_deviation"] = er.max_abs;
    const ELForm form =
        make_el_form(scheme_from_name(cfg.scheme), run.model.hamiltonian, cfg.tau);
    std::mt19937 rng(cfg.seed + 17u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto rand_vec = [&](int len) {
      Vec v(len);
      for (int i = 0; i < len; ++i) v[i] = dist(rng);
      return v;
    };
    double max_coh = 0.0;
    for (int w = 0; w < cfg.windows; ++w) {
      const Vec window = rand_vec(form.window_size());
      const Vec xi = rand_vec(form.window_size());
      const Vec eta = rand_vec(form.window_size());
      const double step = 1e-5 * (1.0 + window.norm());
      max_coh = std::max(
          max_coh,
          std::abs(cohomology_identity_residual(form, window, xi, eta, cfg.tau, step)));
    }
    report["max_cohomology_residual"] = max_coh;
  }
  if (cfg.format == "json") {
    write_output(cfg, report.dump(2) + "\n");
  } else {
    std::string body;
    for (auto& [key, value] : report.items()) {
      body += key + "=";
      body += value.is_number_float() ? fmt(value.get<double>()) : value.dump();
      body += "\n";
    }
    write_output(cfg, body);
  }
  return 0;
}

int cmd_order(const RunConfig& cfg) {
  if (cfg.taus.size() < 3) throw ConfigError("order study needs at least 3 tau values");
  if (cfg.model != "harmonic")
    throw ConfigError("order study needs the harmonic model (exact solution)");
  validate(cfg);
  const MechanicsModel model = make_mechanics({cfg.model, cfg.params});
  const Vec z0 = mechanics_initial(cfg);
  const double w0 = cfg.params.count("omega0") ? cfg.params.at("omega0") : 1.0;
  const double T = 1.0;
  std::vector<double> taus;
  for (const auto& s : cfg.taus) taus.push_back(std::stod(s));
  std::vector<double> errors;
  for (double tau : taus) {
    const int steps = static_cast<int>(std::llround(T / tau));
    if (steps < 1 || std::abs(steps * tau - T) > 1e-12)
      throw ConfigError("tau values must divide the unit interval");
    Trajectory traj =
        integrate(scheme_from_name(cfg.scheme), model.hamiltonian, z0, tau, steps);
    // exact flow of p' = -w0^2 q, q' = p
    const double c = std::cos(w0 * T), s = std::sin(w0 * T);
    Vec exact(2);
    exact << z0[0] * c - w0 * z0[1] * s, z0[0] * s / w0 + z0[1] * c;
    errors.push_back((traj.states.back() - exact).norm());
  }
  json report;
  report["scheme"] = cfg.scheme;
  json pairs = json::array();
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    const double order =
        std::log(errors[i] / errors[i + 1]) / std::log(taus[i] / taus[i + 1]);
    orders.push_back(order);
    json p;
    p["tau_coarse"] = taus[i];
    p["tau_fine"] = taus[i + 1];
    p["error_coarse"] = errors[i];
    p["error_fine"] = errors[i + 1];
    p["observed_order"] = order;
    pairs.push_back(p);
  }
  report["pairs"] = pairs;
  report["observed_order"] = orders.back();
  if (cfg.format == "json") {
    write_output(cfg, report.dump(2) + "\n");
  } else {
    std::string body = "tau_coarse,tau_fine,error_coarse,error_fine,observed_order\n";
    for (const auto& p : pairs)
      body += fmt(p["tau_coarse"].get<double>()) + "," + fmt(p["tau_fine"].get<double>()) +
              "," + fmt(p["error_coarse"].get<double>()) + "," +
              fmt(p["error_fine"].get<double>()) + "," +
              fmt(p["observed_order"].get<double>()) + "\n";
    write_output(cfg, body);
  }
  return 0;
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                      std::vector<std::string>& params) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--config", config_path, "key=value config file");
  cmd->add_option("--model", cfg.model, "model name");
  cmd->add_option("--scheme", cfg.scheme, "integration scheme");
  cmd->add_option("--tau", cfg.tau, "time step");
  cmd->add_option("--h", cfg.h, "space step (field runs)");
  cmd->add_option("--steps", cfg.steps, "number of steps");
  cmd->add_option("--extent", cfg.extent, "spatial node count (field runs)");
  cmd->add_option("--initial", cfg.initial, "initial state (csv numbers or profile name)");
  cmd->add_option("--tangents", cfg.tangents, "tracked tangent variations");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--output", cfg.output, "output path (default stdout)");
  cmd->add_option("--format", cfg.format, "csv or json");
  cmd->add_option("--windows", cfg.windows, "random window sample count");
  cmd->add_option("--param", params, "model parameter name=value (repeatable)");
}

void apply_params(RunConfig& cfg, const std::vector<std::string>& params) {
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--param expects name=value");
    try {
      cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--param: bad value in " + kv);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving integrators and their conservation residuals"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::vector<std::string> params;
  std::string tau_list;

  CLI::App* run = app.add_subcommand("run", "integrate and emit per-step records");
  add_common_flags(run, cfg, config_path, params);
  CLI::App* residuals =
      app.add_subcommand("residuals", "emit a conservation-residual report");
  add_common_flags(residuals, cfg, config_path, params);
  CLI::App* order = app.add_subcommand("order", "convergence-order study");
  add_common_flags(order, cfg, config_path, params);
  order->add_option("--tau-list", tau_list, "comma-separated tau values (>= 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!config_path.empty()) {
      // file first, then re-apply flag overrides
      RunConfig from_file;
      apply_config_file(config_path, from_file);
      std::swap(cfg, from_file);
      std::vector<const char*> args(argv, argv + argc);
      CLI::App reparse{""};
      reparse.require_subcommand(1);
      std::string ignored_path;
      std::vector<std::string> reparams;
      CLI::App* r1 = reparse.add_subcommand("run", "");
      add_common_flags(r1, cfg, ignored_path, reparams);
      CLI::App* r2 = reparse.add_subcommand("residuals", "");
      add_common_flags(r2, cfg, ignored_path, reparams);
      CLI::App* r3 = reparse.add_subcommand("order", "");
      add_common_flags(r3, cfg, ignored_path, reparams);
      std::string tl2;
      r3->add_option("--tau-list", tl2, "");
      reparse.parse(argc, argv);
      if (!tl2.empty()) tau_list = tl2;
      apply_params(cfg, reparams);
    }
    apply_params(cfg, params);
    if (!tau_list.empty()) {
      cfg.taus.clear();
      std::stringstream ss(tau_list);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.taus.push_back(tok);
    }
    if (run->parsed()) return cmd_run(cfg);
    if (residuals->parsed()) return cmd_residuals(cfg);
    if (order->parsed()) return cmd_order(cfg);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "dvarint: config error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    std::cerr << "dvarint: config error: " << e.get_name() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "dvarint: solver failed: " << e.what()
              << " (last residual " << fmt(e.residual_norm) << ")\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "dvarint: i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dvarint: config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "dvarint: error: " << e.what() << "\n";
    return 1;
  }
}
