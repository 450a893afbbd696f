#ifndef RBSIM_SIM_TYPES_HPP
#define RBSIM_SIM_TYPES_HPP

#include <optional>
#include <string>
#include <vector>

#include "rbsim/drivetrain.hpp"
#include "rbsim/traction_drive.hpp"
#include "rbsim/vehicle_dynamics.hpp"

namespace rbsim {

/// Everything known about one train at one time node.
struct TrainStepState {
    double position = 0.0;  // m
    double speed = 0.0;     // m/s
    double accel = 0.0;     // m/s^2, slope of the active profile segment
    ForceBreakdown forces;
    AxleOutput axle;
    MotorShaftPoint motor;
    double mech_power = 0.0;        // W, motor-side mechanical (all motors)
    double electrical_power = 0.0;  // W at the train terminals (+ = drawing)
    double voltage = 0.0;           // V, solved node voltage
    double current = 0.0;           // A, terminal current (P/V)
    double chopper_power = 0.0;     // W dissipated onboard
    double cumulative_energy = 0.0;         // J, integral of electrical power
    double cumulative_chopper_energy = 0.0; // J
};

/// One solved snapshot of the corridor. Interior profile breakpoints appear
/// twice (identical t) carrying the one-sided accelerations.
struct StepRecord {
    double t = 0.0;
    std::vector<TrainStepState> trains;
    std::vector<double> substation_currents;  // A
    std::vector<double> substation_voltages;  // V at the rail node
    std::vector<double> substation_powers;    // W delivered to the rail
    std::vector<double> node_voltages;        // V, full solver output
    double rail_loss_power = 0.0;             // W
    double substation_loss_power = 0.0;       // W inside the Thevenin lumps
    int solver_iterations = 0;
    double solver_residual = 0.0;             // A
    double cumulative_substation_energy = 0.0;  // J, all substations
    double cumulative_rail_loss_energy = 0.0;   // J
    double cumulative_chopper_energy = 0.0;     // J, all trains
};

/// Per-train energy bookkeeping over a completed run.
struct TrainEnergy {
    double accel_energy = 0.0;  // J drawn during acceleration phases
    double decel_energy = 0.0;  // J returned during deceleration phases (only P < 0 counted)
    std::optional<double> regen_ratio;  // decel/accel, absent when accel == 0
    double chopper_energy = 0.0;        // J dumped onboard
    double total_energy = 0.0;          // J, signed net at the terminals
    double kinetic_delta = 0.0;         // J, exact 0.5*M*(v_end^2 - v_start^2)
    double rolling_work = 0.0;          // J against rolling friction
    double aero_work = 0.0;             // J against drag
    double grade_work = 0.0;            // J against grade
    double gearbox_loss = 0.0;          // J
    double drive_loss = 0.0;            // J (electrical minus mechanical at the motor shaft)
};

/// Run-level energy conservation:
///   sum(substation delivered) = sum(kinetic_delta + rolling + aero + grade
///     + gearbox + drive losses + chopper) + rail I^2R + aux loads.
/// ledger_residual is the imbalance of that identity in joules.
struct EnergyReport {
    std::vector<TrainEnergy> trains;
    std::vector<double> substation_energy;  // J delivered at each rail node
    double rail_loss_energy = 0.0;          // J
    double substation_loss_energy = 0.0;    // J inside R_th (upstream of "delivered")
    double chopper_energy_total = 0.0;      // J
    double aux_energy = 0.0;                // J
    double ledger_residual = 0.0;           // J
    double ledger_scale = 0.0;              // J, |delivered| used for the relative check
};

struct RunResult {
    std::vector<StepRecord> records;
    EnergyReport report;
    std::vector<std::string> warnings;
    // drive-level mode: one waveform sample per network step per train
    std::vector<std::vector<DriveSample>> drive_waveforms;
};

} // namespace rbsim

#endif
