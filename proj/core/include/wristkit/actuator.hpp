#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wristkit/error.hpp"
#include "wristkit/json_io.hpp"

namespace wristkit {

struct MotorSpec {
  std::string name;
  double rated_torque = 0.25;      // Nm
  double rated_speed_rpm = 100.0;  // RPM
  double rotor_inertia = 6.0e-6;   // kg m^2

  void validate() const;
};

struct GearboxSpec {
  double ratio = 13.0;               // dimensionless, > 1
  double module_mm = 0.8;            // gear module
  double face_width_mm = 8.0;
  double lewis_form_factor = 0.34;   // Y
  double dynamic_factor = 1.2;       // K_d, >= 1
  double allowable_stress_mpa = 530.0;  // sigma_allow
  double pitch_radius_mm = 16.0;

  void validate() const;
};

/// tau_out = tau_motor * ratio * efficiency. `efficiency` in (0, 1].
double outputTorque(const MotorSpec& motor, const GearboxSpec& gear, double efficiency);

struct ReflectedInertia {
  double ratio;          // (rotor inertia * N^2) / load inertia, at the output
  double motor_side;     // rotor inertia / (N^2 * load inertia), for reference
  bool qdd;              // ratio < 1e-5, strict
};

/// Reflected-inertia convention: rotor inertia scaled by N^2 when referenced
/// to the output, compared against the load inertia at the output.
ReflectedInertia reflectedInertiaRatio(const MotorSpec& motor, const GearboxSpec& gear,
                                       double load_inertia);

struct LewisResult {
  double tangential_force;  // N
  double bending_stress_mpa;
  double factor_of_safety;  // +inf at zero torque
};

/// Lewis bending check: F_t = tau / r_pitch, sigma = K_d F_t / (b m Y),
/// everything converted to SI internally, stress reported in MPa.
LewisResult lewisBendingCheck(const GearboxSpec& gear, double transmitted_torque);

/// B = 0.35 / t_r. Throws NonPositiveInput.
double bandwidthFromRiseTime(double rise_time_s);
double riseTimeFromBandwidth(double bandwidth_hz);

/// tau = F * lever. Throws NonPositiveInput for lever <= 0.
double torqueFromForce(double force_n, double lever_m);

struct PdSimConfig {
  double inertia = 0.01;      // kg m^2
  double damping = 0.05;      // Nm s/rad
  double kp = 95.0;           // Nm/rad
  double kd = 1.90;           // Nm s/rad
  double torque_limit = 3.75; // Nm
  double step = 0.03;         // rad
  double dt = 1e-3;           // s
  double duration = 1.0;      // s
};

struct PdSimSample {
  double t, position, velocity, torque;
};

struct PdSimResult {
  std::vector<PdSimSample> trace;
  // 10% -> 90% of the commanded step, measured on the position trace with
  // linear interpolation between samples. Unset when never reached.
  std::optional<double> rise_time_position;
  // 10% -> 90% of the peak command torque on the |torque| trace, rising
  // direction only. Unset when the trace starts saturated or never rises.
  std::optional<double> rise_time_torque;
  std::optional<double> bandwidth_hz;  // from the position rise time
};

/// Explicit-Euler simulation of inertia*acc + damping*vel = clamp(PD torque).
/// Throws UnstableSimulation if |state| exceeds 1e6.
PdSimResult simulatePdStep(const PdSimConfig& cfg);

enum class RequirementState { Pass, Marginal, Fail };
const char* requirementStateName(RequirementState s);

struct RequirementRow {
  std::string name;
  double desired = 0.0;
  double min = 0.0;  // acceptable range; may be -inf / +inf
  double max = 0.0;
  double achieved = 0.0;
  double uncertainty = 0.0;
  std::string units;
  RequirementState state = RequirementState::Fail;
};

struct RequirementReport {
  std::vector<RequirementRow> rows;
  int passed = 0, marginal = 0, failed = 0;
};

/// Pass when achieved lies inside [min, max]; marginal when outside by at
/// most 10% of the nearer bound's magnitude; fail otherwise.
RequirementReport evaluateRequirements(std::vector<RequirementRow> rows);

/// CSV columns: name, desired, min, max, achieved, uncertainty[, units].
/// min/max accept "inf"/"-inf". Throws ParseError with line numbers.
std::vector<RequirementRow> loadRequirementsCsv(const std::string& path);

Json requirementReportToJson(const RequirementReport& report);

/// Full actuator spec as read by the `actuator-check` CLI subcommand.
struct ActuatorSpec {
  MotorSpec motor;
  GearboxSpec gearbox;
  double efficiency = 1.0;
  double load_inertia = 0.1;       // kg m^2
  double torque_target = 3.0;      // Nm
  double lewis_torque = 3.75;      // Nm, load for the bending check
  double lever_m = 0.07;           // m, force-sensor lever arm
  double backdrive_force_n = 5.0;  // N
  double backdrive_budget = 0.4;   // Nm
  PdSimConfig pd;
};

ActuatorSpec actuatorSpecFromJson(const Json& j);
ActuatorSpec loadActuatorSpec(const std::string& path);
Json actuatorReport(const ActuatorSpec& spec);

}  // namespace wristkit
