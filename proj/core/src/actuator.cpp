#include "wristkit/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wristkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void MotorSpec::validate() const {
  if (!(rated_torque > 0.0) || !(rated_speed_rpm > 0.0) || !(rotor_inertia > 0.0)) {
    throw Error(ErrorCode::InvalidModel, "motor parameters must be positive");
  }
}

void GearboxSpec::validate() const {
  if (!(ratio > 1.0)) {
    throw Error(ErrorCode::InvalidModel, "gear ratio must exceed 1");
  }
  for (double v : {module_mm, face_width_mm, lewis_form_factor, allowable_stress_mpa,
                   pitch_radius_mm}) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidModel, "gear geometry must be positive");
  }
  if (!(dynamic_factor >= 1.0)) {
    throw Error(ErrorCode::InvalidModel, "dynamic factor must be >= 1");
  }
}

double outputTorque(const MotorSpec& motor, const GearboxSpec& gear, double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw Error(ErrorCode::NonPositiveInput, "efficiency must lie in (0, 1]");
  }
  return motor.rated_torque * gear.ratio * efficiency;
}

ReflectedInertia reflectedInertiaRatio(const MotorSpec& motor, const GearboxSpec& gear,
                                       double load_inertia) {
  if (!(load_inertia > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "load inertia must be > 0");
  }
  ReflectedInertia r;
  const double n2 = gear.ratio * gear.ratio;
  r.ratio = motor.rotor_inertia * n2 / load_inertia;
  r.motor_side = motor.rotor_inertia / (n2 * load_inertia);
  r.qdd = r.ratio < 1e-5;
  return r;
}

LewisResult lewisBendingCheck(const GearboxSpec& gear, double transmitted_torque) {
  if (transmitted_torque < 0.0) {
    throw Error(ErrorCode::NonPositiveInput, "transmitted torque must be >= 0");
  }
  LewisResult out;
  out.tangential_force = transmitted_torque / (gear.pitch_radius_mm * 1e-3);
  const double b = gear.face_width_mm * 1e-3;
  const double m = gear.module_mm * 1e-3;
  const double stress_pa =
      gear.dynamic_factor * out.tangential_force / (b * m * gear.lewis_form_factor);
  out.bending_stress_mpa = stress_pa * 1e-6;
  out.factor_of_safety =
      out.bending_stress_mpa > 0.0 ? gear.allowable_stress_mpa / out.bending_stress_mpa : kInf;
  return out;
}

double bandwidthFromRiseTime(double rise_time_s) {
  if (!(rise_time_s > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "rise time must be > 0");
  }
  return 0.35 / rise_time_s;
}

double riseTimeFromBandwidth(double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "bandwidth must be > 0");
  }
  return 0.35 / bandwidth_hz;
}

double torqueFromForce(double force_n, double lever_m) {
  if (!(lever_m > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "lever arm must be > 0");
  }
  return force_n * lever_m;
}

namespace {

// First time |signal| crosses `level` going up, linearly interpolated.
std::optional<double> crossingTime(const std::vector<PdSimSample>& trace,
                                   double (*value)(const PdSimSample&), double level) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double v0 = value(trace[i - 1]);
    const double v1 = value(trace[i]);
    if (v0 < level && v1 >= level) {
      const double f = (level - v0) / (v1 - v0);
      return trace[i - 1].t + f * (trace[i].t - trace[i - 1].t);
    }
  }
  return std::nullopt;
}

}  // namespace

PdSimResult simulatePdStep(const PdSimConfig& cfg) {
  if (!(cfg.inertia > 0.0) || !(cfg.dt > 0.0) || !(cfg.duration > 0.0) ||
      cfg.damping < 0.0 || cfg.torque_limit < 0.0) {
    throw Error(ErrorCode::NonPositiveInput, "invalid PD simulation parameters");
  }
  PdSimResult result;
  const int steps = static_cast<int>(std::llround(cfg.duration / cfg.dt));
  result.trace.reserve(steps + 1);

  double pos = 0.0, vel = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt;
    double torque = cfg.kp * (cfg.step - pos) - cfg.kd * vel;
    torque = std::clamp(torque, -cfg.torque_limit, cfg.torque_limit);
    result.trace.push_back({t, pos, vel, torque});
    const double acc = (torque - cfg.damping * vel) / cfg.inertia;
    pos += vel * cfg.dt;
    vel += acc * cfg.dt;
    if (std::abs(pos) > 1e6 || std::abs(vel) > 1e6) {
      throw Error(ErrorCode::UnstableSimulation, "PD response diverged");
    }
  }

  const double amp = std::abs(cfg.step);
  if (amp > 0.0) {
    auto posValue = [](const PdSimSample& s) { return s.position; };
    const auto t10 = crossingTime(result.trace, posValue, 0.1 * cfg.step);
    const auto t90 = crossingTime(result.trace, posValue, 0.9 * cfg.step);
    if (t10 && t90 && *t90 > *t10) {
      result.rise_time_position = *t90 - *t10;
      result.bandwidth_hz = bandwidthFromRiseTime(*result.rise_time_position);
    }
    double peak = 0.0;
    for (const auto& s : result.trace) peak = std::max(peak, std::abs(s.torque));
    if (peak > 0.0) {
      auto torqueValue = [](const PdSimSample& s) { return std::abs(s.torque); };
      const auto q10 = crossingTime(result.trace, torqueValue, 0.1 * peak);
      const auto q90 = crossingTime(result.trace, torqueValue, 0.9 * peak);
      if (q10 && q90 && *q90 > *q10) result.rise_time_torque = *q90 - *q10;
    }
  }
  return result;
}

const char* requirementStateName(RequirementState s) {
  switch (s) {
    case RequirementState::Pass: return "pass";
    case RequirementState::Marginal: return "marginal";
    case RequirementState::Fail: return "fail";
  }
  return "unknown";
}

RequirementReport evaluateRequirements(std::vector<RequirementRow> rows) {
  RequirementReport report;
  for (auto& row : rows) {
    if (row.min > row.max) {
      throw Error(ErrorCode::InvalidModel, "row '" + row.name + "' has min > max");
    }
    if (row.achieved >= row.min && row.achieved <= row.max) {
      row.state = RequirementState::Pass;
    } else {
      // Distance past the violated bound, relative to that bound's magnitude.
      const double bound = row.achieved < row.min ? row.min : row.max;
      const double overshoot = std::abs(row.achieved - bound);
      const double rel = std::abs(bound) > 0.0 ? overshoot / std::abs(bound) : kInf;
      row.state = (std::isfinite(bound) && rel <= 0.10) ? RequirementState::Marginal
                                                        : RequirementState::Fail;
    }
    switch (row.state) {
      case RequirementState::Pass: ++report.passed; break;
      case RequirementState::Marginal: ++report.marginal; break;
      case RequirementState::Fail: ++report.failed; break;
    }
  }
  report.rows = std::move(rows);
  return report;
}

std::vector<RequirementRow> loadRequirementsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<RequirementRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.rfind("name,", 0) != 0) {
        throw Error(ErrorCode::ParseError, "line 1: expected header starting with 'name,'");
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 6 || cells.size() > 7) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 6 or 7 columns");
    }
    auto num = [&](const std::string& s, const char* what) {
      if (s == "inf") return kInf;
      if (s == "-inf") return -kInf;
      try {
        return std::stod(s);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad " +
                                               what + " '" + s + "'");
      }
    };
    RequirementRow row;
    row.name = cells[0];
    row.desired = num(cells[1], "desired");
    row.min = num(cells[2], "min");
    row.max = num(cells[3], "max");
    row.achieved = num(cells[4], "achieved");
    row.uncertainty = num(cells[5], "uncertainty");
    if (cells.size() == 7) row.units = cells[6];
    rows.push_back(row);
  }
  return rows;
}

Json requirementReportToJson(const RequirementReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["passed"] = report.passed;
  j["marginal"] = report.marginal;
  j["failed"] = report.failed;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["name"] = row.name;
    r["desired"] = row.desired;
    r["min"] = std::isfinite(row.min) ? Json(row.min) : Json(nullptr);
    r["max"] = std::isfinite(row.max) ? Json(row.max) : Json(nullptr);
    r["achieved"] = row.achieved;
    r["uncertainty"] = row.uncertainty;
    r["units"] = row.units;
    r["state"] = requirementStateName(row.state);
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

ActuatorSpec actuatorSpecFromJson(const Json& j) {
  ActuatorSpec spec;
  if (j.contains("motor")) {
    const auto& m = j.at("motor");
    spec.motor.name = m.value("name", spec.motor.name);
    spec.motor.rated_torque = m.value("rated_torque_nm", spec.motor.rated_torque);
    spec.motor.rated_speed_rpm = m.value("rated_speed_rpm", spec.motor.rated_speed_rpm);
    spec.motor.rotor_inertia = m.value("rotor_inertia_kg_m2", spec.motor.rotor_inertia);
  }
  if (j.contains("gearbox")) {
    const auto& g = j.at("gearbox");
    spec.gearbox.ratio = g.value("ratio", spec.gearbox.ratio);
    spec.gearbox.module_mm = g.value("module_mm", spec.gearbox.module_mm);
    spec.gearbox.face_width_mm = g.value("face_width_mm", spec.gearbox.face_width_mm);
    spec.gearbox.lewis_form_factor = g.value("lewis_form_factor", spec.gearbox.lewis_form_factor);
    spec.gearbox.dynamic_factor = g.value("dynamic_factor", spec.gearbox.dynamic_factor);
    spec.gearbox.allowable_stress_mpa =
        g.value("allowable_stress_mpa", spec.gearbox.allowable_stress_mpa);
    spec.gearbox.pitch_radius_mm = g.value("pitch_radius_mm", spec.gearbox.pitch_radius_mm);
  }
  spec.efficiency = j.value("efficiency", spec.efficiency);
  spec.load_inertia = j.value("load_inertia_kg_m2", spec.load_inertia);
  spec.torque_target = j.value("torque_target_nm", spec.torque_target);
  spec.lewis_torque = j.value("lewis_torque_nm", spec.lewis_torque);
  spec.lever_m = j.value("lever_m", spec.lever_m);
  spec.backdrive_force_n = j.value("backdrive_force_n", spec.backdrive_force_n);
  spec.backdrive_budget = j.value("backdrive_budget_nm", spec.backdrive_budget);
  if (j.contains("pd")) {
    const auto& p = j.at("pd");
    spec.pd.inertia = p.value("inertia_kg_m2", spec.pd.inertia);
    spec.pd.damping = p.value("damping_nm_s", spec.pd.damping);
    spec.pd.kp = p.value("kp", spec.pd.kp);
    spec.pd.kd = p.value("kd", spec.pd.kd);
    spec.pd.torque_limit = p.value("torque_limit_nm", spec.pd.torque_limit);
    spec.pd.step = p.value("step_rad", spec.pd.step);
    spec.pd.dt = p.value("dt_s", spec.pd.dt);
    spec.pd.duration = p.value("duration_s", spec.pd.duration);
  }
  spec.motor.validate();
  spec.gearbox.validate();
  return spec;
}

ActuatorSpec loadActuatorSpec(const std::string& path) {
  return actuatorSpecFromJson(loadJsonFile(path));
}

Json actuatorReport(const ActuatorSpec& spec) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["motor"] = spec.motor.name;
  j["parameters_note"] = "representative, calibrated; not measured values";

  const double tau = outputTorque(spec.motor, spec.gearbox, spec.efficiency);
  j["output_torque"] = {{"value_nm", tau},
                        {"target_nm", spec.torque_target},
                        {"pass", tau >= spec.torque_target}};

  const ReflectedInertia ri = reflectedInertiaRatio(spec.motor, spec.gearbox, spec.load_inertia);
  j["reflected_inertia"] = {{"output_side_ratio", ri.ratio},
                            {"motor_side_ratio", ri.motor_side},
                            {"qdd_criterion", 1e-5},
                            {"qdd", ri.qdd}};

  const LewisResult lewis = lewisBendingCheck(spec.gearbox, spec.lewis_torque);
  j["lewis"] = {{"torque_nm", spec.lewis_torque},
                {"tangential_force_n", lewis.tangential_force},
                {"bending_stress_mpa", lewis.bending_stress_mpa},
                {"factor_of_safety",
                 std::isfinite(lewis.factor_of_safety) ? Json(lewis.factor_of_safety)
                                                       : Json(nullptr)},
                {"pass", lewis.factor_of_safety >= 3.0}};

  const double backdrive = torqueFromForce(spec.backdrive_force_n, spec.lever_m);
  j["backdrive"] = {{"force_n", spec.backdrive_force_n},
                    {"lever_m", spec.lever_m},
                    {"torque_nm", backdrive},
                    {"budget_nm", spec.backdrive_budget},
                    {"within_budget", backdrive <= spec.backdrive_budget}};

  const PdSimResult sim = simulatePdStep(spec.pd);
  Json pd;
  pd["rise_time_position_s"] =
      sim.rise_time_position ? Json(*sim.rise_time_position) : Json(nullptr);
  pd["rise_time_torque_s"] = sim.rise_time_torque ? Json(*sim.rise_time_torque) : Json(nullptr);
  pd["bandwidth_hz"] = sim.bandwidth_hz ? Json(*sim.bandwidth_hz) : Json(nullptr);
  j["pd_step"] = pd;
  return j;
}

}  // namespace wristkit
