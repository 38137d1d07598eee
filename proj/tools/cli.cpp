#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dfsphoton/report.hpp"

namespace dfsphoton::cli {

namespace {

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("config is missing \"") + key + "\"");
  }
  return j.at(key);
}

const Json& section(const Json& doc, const char* key) {
  static const Json empty = Json::object();
  if (!doc.contains(key)) return empty;
  const Json& s = doc.at(key);
  if (!s.is_object()) throw ConfigError(std::string("\"") + key + "\" must be an object");
  return s;
}

std::vector<double> number_list(const Json& j, const char* what) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else {
    throw ConfigError(std::string(what) + " must be a number or a list of numbers");
  }
  if (out.empty()) throw ConfigError(std::string(what) + " must not be empty");
  return out;
}

std::vector<int> int_list(const Json& j, const char* what) {
  std::vector<int> out;
  for (double v : number_list(j, what)) {
    if (v != std::floor(v)) throw ConfigError(std::string(what) + " entries must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; results keep input order.
template <typename R>
std::vector<R> ordered_map(std::size_t n, int jobs, const std::function<R(std::size_t)>& fn) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  }
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

double analytic_population_loss(const TargetSuperposition& target, const PhysicalParams& params,
                                const DriveSettings& drive) {
  double loss = 0.0;
  double cumulative = 0.0;
  const auto& d = target.coefficients();
  for (int m = 1; m <= target.m_max(); ++m) {
    cumulative += error_rates(m, params.n_atoms, drive.omega_r, drive.delta_e, params)
                      .per_step_infidelity;
    loss += std::norm(d[m]) * cumulative;
  }
  return loss;
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_cell(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

Json parse_config(const std::string& text) {
  try {
    Json doc = Json::parse(text);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    return doc;
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

PhysicalParams params_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("\"params\" must be an object");
  PhysicalParams p;
  p.n_atoms = j.value("n_atoms", 10);
  if (j.contains("gamma_1d") && j.at("gamma_1d").get<double>() != 1.0) {
    throw ConfigError("rates are in units of gamma_1d, so gamma_1d must be 1");
  }
  if (j.contains("purcell") && j.contains("gamma_star")) {
    throw ConfigError("give either \"purcell\" or \"gamma_star\", not both");
  }
  try {
    if (j.contains("purcell")) {
      p = PhysicalParams::from_purcell(p.n_atoms, j.at("purcell").get<double>());
    } else {
      p.gamma_star = j.value("gamma_star", p.gamma_star);
    }
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

TargetSuperposition target_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("\"target\" must be an object");
  try {
    if (j.contains("fock")) return TargetSuperposition::fock(j.at("fock").get<int>());
    if (j.contains("phi")) return TargetSuperposition::phi(j.at("phi").get<int>());
    if (j.contains("coefficients")) {
      const Json& c = j.at("coefficients");
      if (!c.is_array() || c.empty()) throw ConfigError("\"coefficients\" must be a non-empty list");
      std::vector<Complex> d;
      for (const auto& v : c) d.push_back(complex_from_json(v));
      return j.value("normalize", true) ? TargetSuperposition::normalized(std::move(d))
                                        : TargetSuperposition::exact(std::move(d));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad target: ") + e.what());
  }
  throw ConfigError("target needs one of \"fock\", \"phi\" or \"coefficients\"");
}

std::string target_label(const Json& j) {
  if (j.contains("label")) return j.at("label").get<std::string>();
  if (j.contains("fock")) return "D_" + std::to_string(j.at("fock").get<int>());
  if (j.contains("phi")) return "Phi_" + std::to_string(j.at("phi").get<int>());
  return "custom";
}

ProtocolSettings protocol_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("\"protocol\" must be an object");
  ProtocolSettings s;
  s.raman_ratio = j.value("raman_ratio", s.raman_ratio);
  s.omega_c = j.value("omega_c", s.omega_c);
  s.k_max = j.value("k_max", s.k_max);
  if (j.contains("delta_e")) s.delta_e = j.at("delta_e").get<double>();
  if (!(s.raman_ratio > 0.0) || !(s.omega_c > 0.0) || s.k_max < 1) {
    throw ConfigError("protocol needs raman_ratio > 0, omega_c > 0 and k_max >= 1");
  }
  if (s.delta_e && !(*s.delta_e > 0.0)) throw ConfigError("protocol delta_e must be positive");
  return s;
}

WaveguideSpec waveguide_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("\"waveguide\" must be an object");
  const std::string preset = j.value("preset", std::string("cs-sin"));
  if (preset != "cs-sin") throw ConfigError("unknown waveguide preset \"" + preset + "\"");
  WaveguideSpec s = WaveguideSpec::cs_sin();
  s.group_index = j.value("group_index", s.group_index);
  s.mode_area_um2 = j.value("mode_area_um2", s.mode_area_um2);
  s.lambda0_um = j.value("lambda0_um", s.lambda0_um);
  s.cavity_factor = j.value("cavity_factor", s.cavity_factor);
  s.refractive_index = j.value("refractive_index", s.refractive_index);
  s.quality_factor = j.value("quality_factor", s.quality_factor);
  s.gamma_a = j.value("gamma_a_per_s", s.gamma_a);
  s.alpha = j.value("alpha", s.alpha);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

CommandOutput cmd_simulate(const RunConfig& config) {
  const Json& doc = config.document;
  const auto params = params_from_json(section(doc, "params"));
  const Json& target_json = require(doc, "target");
  const auto target = target_from_json(target_json);
  const auto settings = protocol_from_json(section(doc, "protocol"));
  if (target.m_max() > params.n_atoms) throw ConfigError("target m_max exceeds n_atoms");

  const auto result = simulate_target(target, params, settings);
  const auto goal = target.as_state(result.trajectory.final_state().basis());

  CommandOutput out;
  out.table.header = {"segment[count]", "time[1/gamma_1d]", "squared_norm[dimensionless]",
                      "fidelity[dimensionless]", "fidelity_renormalized[dimensionless]"};
  const auto& traj = result.trajectory;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto& s = traj.snapshots[i];
    const double f = fidelity(s, goal);
    const double fr = s.norm() > 0.0 ? f / s.norm() : 0.0;
    out.table.rows.push_back({num(i), num(traj.times[i]), num(traj.squared_norms[i]), num(f), num(fr)});
  }
  out.json = Json::object();
  out.json["command"] = "simulate";
  out.json["target_label"] = target_label(target_json);
  out.json["params"] = to_json(params);
  out.json["target"] = to_json(target);
  out.json["result"] = to_json(result);
  return out;
}

CommandOutput cmd_sweep(const RunConfig& config) {
  const Json& doc = config.document;
  const Json& sweep = require(doc, "sweep");
  const Json& base = section(doc, "params");
  const auto purcells = number_list(require(sweep, "purcell"), "sweep.purcell");
  const Json& targets_json = require(sweep, "targets");
  if (!targets_json.is_array() || targets_json.empty()) {
    throw ConfigError("sweep.targets must be a non-empty list");
  }
  const auto settings = protocol_from_json(section(doc, "protocol"));
  const int n_atoms = base.value("n_atoms", 10);

  struct Point {
    std::string label;
    TargetSuperposition target;
    PhysicalParams params;
    double purcell;
  };
  std::vector<Point> points;
  for (const auto& tj : targets_json) {
    const auto target = target_from_json(tj);
    for (double p : purcells) {
      Json pj = Json::object();
      pj["n_atoms"] = n_atoms;
      pj["purcell"] = p;
      const auto params = params_from_json(pj);
      if (target.m_max() > n_atoms) throw ConfigError("target m_max exceeds n_atoms");
      points.push_back({target_label(tj), target, params, p});
    }
  }

  struct Row {
    SimulationResult sim;
    double analytic;
  };
  const auto rows = ordered_map<Row>(points.size(), config.jobs, [&](std::size_t i) {
    const auto& pt = points[i];
    auto sim = simulate_target(pt.target, pt.params, settings);
    sim.trajectory = {};
    const double analytic =
        analytic_population_loss(pt.target, pt.params, settings.drive_for(pt.params));
    return Row{std::move(sim), analytic};
  });

  CommandOutput out;
  out.table.header = {"target", "n_atoms[count]", "purcell[dimensionless]", "delta_e[gamma_1d]",
                      "omega_r[gamma_1d]", "total_time[1/gamma_1d]", "infidelity[dimensionless]",
                      "infidelity_renormalized[dimensionless]",
                      "analytic_population_loss[dimensionless]"};
  Json list = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const auto& r = rows[i];
    out.table.rows.push_back({pt.label, num(pt.params.n_atoms), num(pt.purcell),
                              num(r.sim.delta_e), num(r.sim.omega_r), num(r.sim.total_time),
                              num(r.sim.infidelity()), num(1.0 - r.sim.fidelity_renormalized),
                              num(r.analytic)});
    Json row = Json::object();
    row["target"] = pt.label;
    row["n_atoms"] = pt.params.n_atoms;
    row["purcell"] = pt.purcell;
    row["delta_e"] = r.sim.delta_e;
    row["omega_r"] = r.sim.omega_r;
    row["total_time"] = r.sim.total_time;
    row["infidelity"] = r.sim.infidelity();
    row["infidelity_renormalized"] = 1.0 - r.sim.fidelity_renormalized;
    row["analytic_population_loss"] = r.analytic;
    list.push_back(std::move(row));
  }
  out.json = Json::object();
  out.json["command"] = "sweep";
  out.json["rows"] = std::move(list);
  return out;
}

CommandOutput cmd_plan(const RunConfig& config) {
  const Json& doc = config.document;
  const auto params = params_from_json(section(doc, "params"));
  const auto target = target_from_json(require(doc, "target"));
  const auto settings = protocol_from_json(section(doc, "protocol"));
  if (target.m_max() > params.n_atoms) throw ConfigError("target m_max exceeds n_atoms");
  const auto drive = settings.drive_for(params);
  const auto seq = plan_superposition(target, params.n_atoms, drive);

  CommandOutput out;
  out.table.header = {"index[count]", "kind", "rung[count]", "re_omega_r[gamma_1d]",
                      "im_omega_r[gamma_1d]", "re_omega_anc[gamma_1d]", "im_omega_anc[gamma_1d]",
                      "re_omega_c[gamma_1d]", "im_omega_c[gamma_1d]", "delta_e[gamma_1d]",
                      "duration[1/gamma_1d]"};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& st = seq[i];
    const auto& s = st.segment;
    out.table.rows.push_back({num(i), std::string(to_string(st.kind)), num(st.rung),
                              num(s.omega_r.real()), num(s.omega_r.imag()), num(s.omega_anc.real()),
                              num(s.omega_anc.imag()), num(s.omega_c.real()), num(s.omega_c.imag()),
                              num(s.delta_e), num(s.duration)});
  }
  out.json = Json::object();
  out.json["command"] = "plan";
  out.json["params"] = to_json(params);
  out.json["target"] = to_json(target);
  out.json["sequence"] = to_json(seq);
  return out;
}

namespace {

FrequencyGrid grid_from_json(const Json& j, int photons, int n_atoms) {
  const std::string kind = j.value("grid", std::string("tangent"));
  if (kind == "tangent") {
    if (!j.contains("points")) return FrequencyGrid::default_for(photons, n_atoms);
    return FrequencyGrid::tangent(n_atoms, j.at("points").get<std::size_t>());
  }
  if (kind == "uniform") {
    return FrequencyGrid::uniform(n_atoms,
                                  j.value("points", FrequencyGrid::default_points(photons)),
                                  j.value("span_halfwidths", 50.0));
  }
  throw ConfigError("photon.grid must be \"tangent\" or \"uniform\"");
}

CommandOutput photon_grid(const Json& pj) {
  const int m = require(pj, "m").get<int>();
  const int n_atoms = pj.value("n_atoms", 10);
  const std::string model_name = pj.value("model", std::string("exact"));
  AmplitudeModel model;
  if (model_name == "exact") {
    model = AmplitudeModel::kExact;
  } else if (model_name == "hp") {
    model = AmplitudeModel::kHolsteinPrimakoff;
  } else {
    throw ConfigError("photon.model must be \"exact\" or \"hp\"");
  }
  if (m < 1 || m > kMaxGridPhotons || m > n_atoms) {
    throw ConfigError("photon.m must be in 1..min(5, n_atoms)");
  }
  auto grid = grid_from_json(pj, m, n_atoms).with_emission_time(pj.value("emission_time", 0.0));
  const WavepacketGrid wave(m, n_atoms, std::move(grid), model);

  CommandOutput out;
  std::ostringstream csv;
  wave.write_csv(csv);
  out.csv_override = csv.str();
  out.json = Json::object();
  out.json["command"] = "photon";
  out.json["mode"] = "grid";
  out.json["m"] = m;
  out.json["n_atoms"] = n_atoms;
  out.json["model"] = model_name;
  out.json["grid"] = wave.grid().kind() == GridKind::kTangent ? "tangent" : "uniform";
  out.json["points_per_axis"] = wave.grid().size();
  out.json["emission_time"] = wave.grid().emission_time();
  out.json["squared_norm"] = wave.squared_norm();
  if (m == 1) {
    Json rows = Json::array();
    const auto& g = wave.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex a = wave.amplitude_flat(i);
      rows.push_back({g.detunings()[i], g.weights()[i], a.real(), a.imag()});
    }
    out.json["columns"] = {"delta_r", "weight", "re_A", "im_A"};
    out.json["amplitudes"] = std::move(rows);
  }
  return out;
}

CommandOutput photon_overlap(const Json& pj, int jobs) {
  const auto ms = int_list(require(pj, "m"), "photon.m");
  const auto ns = int_list(require(pj, "n_atoms"), "photon.n_atoms");
  struct Cell {
    int m;
    int n;
  };
  std::vector<Cell> cells;
  for (int m : ms) {
    for (int n : ns) {
      if (m < 1 || m > kMaxGridPhotons || m > n) {
        throw ConfigError("overlap table needs 1 <= m <= min(5, n_atoms)");
      }
      cells.push_back({m, n});
    }
  }
  const auto numeric = ordered_map<NumericOverlap>(cells.size(), jobs, [&](std::size_t i) {
    return overlap_hp_numeric(cells[i].m, cells[i].n,
                              FrequencyGrid::default_for(cells[i].m, cells[i].n));
  });

  CommandOutput out;
  out.table.header = {"m[count]", "n_atoms[count]", "overlap_closed[dimensionless]",
                      "one_minus_closed[dimensionless]", "overlap_numeric[dimensionless]",
                      "im_overlap_numeric[dimensionless]", "refinement_delta[dimensionless]"};
  Json rows = Json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto closed = overlap_hp_closed(cells[i].m, cells[i].n);
    const auto& nv = numeric[i];
    out.table.rows.push_back({num(cells[i].m), num(cells[i].n), num(closed.overlap),
                              num(closed.one_minus), num(nv.value.real()), num(nv.value.imag()),
                              num(nv.refinement_delta)});
    Json r = Json::object();
    r["m"] = cells[i].m;
    r["n_atoms"] = cells[i].n;
    r["overlap_closed"] = closed.overlap;
    r["one_minus_closed"] = closed.one_minus;
    r["overlap_numeric"] = nv.value.real();
    r["im_overlap_numeric"] = nv.value.imag();
    r["refinement_delta"] = nv.refinement_delta;
    rows.push_back(std::move(r));
  }
  out.json = Json::object();
  out.json["command"] = "photon";
  out.json["mode"] = "overlap";
  out.json["rows"] = std::move(rows);
  return out;
}

CommandOutput photon_superposition(const Json& pj) {
  const auto target = target_from_json(require(pj, "target"));
  const int n_atoms = pj.value("n_atoms", 10);
  if (target.m_max() > n_atoms || target.m_max() > kMaxGridPhotons) {
    throw ConfigError("superposition needs m_max <= min(5, n_atoms)");
  }
  const auto so = superposition_output(target, n_atoms);

  CommandOutput out;
  out.table.header = {"m[count]", "weight[dimensionless]", "overlap_closed[dimensionless]",
                      "grid_squared_norm[dimensionless]"};
  const auto& d = target.coefficients();
  out.table.rows.push_back({"0", num(so.vacuum_weight), "1", "1"});
  Json comps = Json::array();
  for (std::size_t i = 0; i < so.components.size(); ++i) {
    const int m = so.photon_numbers[i];
    const double w = std::norm(d[m]);
    const double overlap = overlap_hp_closed(m, n_atoms).overlap;
    const double norm = so.components[i].squared_norm();
    out.table.rows.push_back({num(m), num(w), num(overlap), num(norm)});
    Json c = Json::object();
    c["m"] = m;
    c["weight"] = w;
    c["overlap_closed"] = overlap;
    c["grid_squared_norm"] = norm;
    comps.push_back(std::move(c));
  }
  out.json = Json::object();
  out.json["command"] = "photon";
  out.json["mode"] = "superposition";
  out.json["n_atoms"] = n_atoms;
  out.json["vacuum_weight"] = so.vacuum_weight;
  out.json["single_mode_fidelity"] = so.single_mode_fidelity;
  out.json["components"] = std::move(comps);
  return out;
}

}  // namespace

CommandOutput cmd_photon(const RunConfig& config) {
  const Json& pj = require(config.document, "photon");
  if (!pj.is_object()) throw ConfigError("\"photon\" must be an object");
  const std::string mode = pj.value("mode", std::string("grid"));
  if (mode == "grid") return photon_grid(pj);
  if (mode == "overlap") return photon_overlap(pj, config.jobs);
  if (mode == "superposition") return photon_superposition(pj);
  throw ConfigError("photon.mode must be \"grid\", \"overlap\" or \"superposition\"");
}

CommandOutput cmd_analytic(const RunConfig& config) {
  const Json& doc = config.document;
  const Json& aj = section(doc, "analytic");
  const Json& base = section(doc, "params");
  const int n_atoms = base.value("n_atoms", 10);
  std::vector<double> purcells;
  if (aj.contains("purcell")) {
    purcells = number_list(aj.at("purcell"), "analytic.purcell");
  } else {
    purcells.push_back(params_from_json(base).purcell());
  }
  const int m_max = aj.value("m_max", 1);
  if (m_max < 1 || m_max > n_atoms) throw ConfigError("analytic.m_max must be in 1..n_atoms");
  const std::string model_name = aj.value("model", std::string("deterministic"));
  ErrorModel model;
  if (model_name == "deterministic") {
    model = ErrorModel::kDeterministic;
  } else if (model_name == "post-selected") {
    model = ErrorModel::kPostSelected;
  } else {
    throw ConfigError("analytic.model must be \"deterministic\" or \"post-selected\"");
  }
  const auto settings = protocol_from_json(section(doc, "protocol"));

  CommandOutput out;
  out.table.header = {"purcell[dimensionless]", "n_atoms[count]", "m[count]",
                      "delta_e[gamma_1d]", "omega_r[gamma_1d]", "eps_psi_e[gamma_1d]",
                      "eps_chi_s[gamma_1d]", "eps_chi_g[gamma_1d]", "t_op[1/gamma_1d]",
                      "per_step_infidelity[dimensionless]",
                      "asymptotic_step_infidelity[dimensionless]"};
  Json blocks = Json::array();
  for (double p : purcells) {
    Json pj = Json::object();
    pj["n_atoms"] = n_atoms;
    pj["purcell"] = p;
    const auto params = params_from_json(pj);
    const auto drive = settings.drive_for(params);
    const double asym = model == ErrorModel::kDeterministic
                            ? asymptotic_step_infidelity(drive.delta_e, params)
                            : asymptotic_step_infidelity_post_selected(drive.delta_e, params);
    Json budgets = Json::array();
    for (int m = 1; m <= m_max; ++m) {
      const auto b = error_rates(m, n_atoms, drive.omega_r, drive.delta_e, params, model);
      out.table.rows.push_back({num(p), num(n_atoms), num(m), num(b.delta_e), num(b.omega_r),
                                num(b.eps_psi_e), num(b.eps_chi_s), num(b.eps_chi_g), num(b.t_op),
                                num(b.per_step_infidelity), num(asym)});
      budgets.push_back(to_json(b));
    }
    Json block = Json::object();
    block["params"] = to_json(params);
    block["asymptotic_step_infidelity"] = asym;
    block["budgets"] = std::move(budgets);
    block["totals"] = to_json(total_infidelities(m_max, params));
    blocks.push_back(std::move(block));
  }
  out.json = Json::object();
  out.json["command"] = "analytic";
  out.json["model"] = model_name;
  out.json["points"] = std::move(blocks);
  return out;
}

CommandOutput cmd_feasibility(const RunConfig& config) {
  const Json& doc = config.document;
  const Json& fj = section(doc, "feasibility");
  const auto spec = waveguide_from_json(section(doc, "waveguide"));
  const int n_atoms = fj.value("n_atoms", 100);
  if (n_atoms < 1) throw ConfigError("feasibility.n_atoms must be >= 1");
  const auto purcell = purcell_ratio(spec);
  const double ratio = fj.value("gamma_1d_ratio", purcell.ratio);
  const double spacing = fj.value("spacing_over_lambda_a", 0.5);
  const auto prop = propagation_and_retardation(spec, n_atoms, ratio, spacing);

  CommandOutput out;
  out.table.header = {"cross_section[um^2]", "purcell_ratio[dimensionless]", "p1d[dimensionless]",
                      "lambda_a[um]", "l_prop_over_lambda_a[dimensionless]",
                      "group_velocity[m/s]", "gamma_1d[rad/s]", "spacing[um]",
                      "n_max[count]", "n_atoms[count]", "eps_prop[dimensionless]"};
  out.table.rows.push_back({num(purcell.cross_section_um2), num(purcell.ratio), num(purcell.p1d),
                            num(prop.lambda_a_um), num(prop.l_prop_over_lambda_a),
                            num(prop.group_velocity), num(prop.gamma_1d), num(prop.spacing_um),
                            num(prop.n_max), num(n_atoms), num(prop.eps_prop)});
  out.json = Json::object();
  out.json["command"] = "feasibility";
  out.json["waveguide"] = to_json(spec);
  out.json["purcell"] = to_json(purcell);
  out.json["n_atoms"] = n_atoms;
  out.json["propagation"] = to_json(prop);
  return out;
}

CommandOutput dispatch(const RunConfig& config) {
  const std::string& c = config.command;
  if (c == "simulate") return cmd_simulate(config);
  if (c == "sweep") return cmd_sweep(config);
  if (c == "plan") return cmd_plan(config);
  if (c == "photon") return cmd_photon(config);
  if (c == "analytic") return cmd_analytic(config);
  if (c == "feasibility") return cmd_feasibility(config);
  throw ConfigError("unknown command \"" + c + "\"");
}

void write_output(const CommandOutput& output, Format format, std::ostream& out) {
  if (format == Format::kJson) {
    out << output.json.dump(2) << '\n';
  } else if (output.csv_override) {
    out << *output.csv_override;
  } else {
    output.table.write_csv(out);
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dicke-ladder photon-state preparation: simulation, planning and analytics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_name;
  int jobs = 0;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Run one target through the restricted-basis dynamics"},
      {"sweep", "Infidelity versus Purcell factor for a list of targets"},
      {"plan", "Print the pulse sequence for a target"},
      {"photon", "Emitted wavepackets, overlap tables and superposition outputs"},
      {"analytic", "Closed-form error budgets"},
      {"feasibility", "Waveguide Purcell, propagation and retardation estimates"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig config;
  config.command = app.get_subcommands().front()->get_name();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      config.document = parse_config(buf.str());
    }
    const Json& output = section(config.document, "output");
    config.format = output.value("format", std::string("json")) == "csv" ? Format::kCsv : Format::kJson;
    if (output.contains("format") && output.at("format") != "csv" && output.at("format") != "json") {
      throw ConfigError("output.format must be \"csv\" or \"json\"");
    }
    if (output.contains("path")) config.out_path = output.at("path").get<std::string>();
    config.jobs = output.value("jobs", 1);
    if (!format_name.empty()) config.format = format_name == "csv" ? Format::kCsv : Format::kJson;
    if (!out_path.empty()) config.out_path = out_path;
    if (jobs > 0) config.jobs = jobs;
    if (config.jobs < 1) throw ConfigError("jobs must be >= 1");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  CommandOutput result;
  try {
    result = dispatch(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  if (config.out_path) {
    std::ofstream file(*config.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << *config.out_path << " for writing\n";
      return kExitRuntime;
    }
    write_output(result, config.format, file);
  } else {
    write_output(result, config.format, out);
  }
  return kExitOk;
}

}  // namespace dfsphoton::cli
