#ifndef RBSIM_SIM_ENGINE_HPP
#define RBSIM_SIM_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rbsim/drivetrain.hpp"
#include "rbsim/network_solver.hpp"
#include "rbsim/scenario.hpp"
#include "rbsim/sim_types.hpp"
#include "rbsim/traction_drive.hpp"

namespace rbsim {

/// Advances the corridor through time. The grid is the union of the uniform
/// dt_network grid and every profile breakpoint; at an interior breakpoint
/// two records share the timestamp, carrying the one-sided accelerations,
/// so trapezoidal integration is exact on each linear profile segment.
class SimEngine {
public:
    static RunResult run(const Scenario& scenario) {
        RunResult result;
        result.warnings = scenario.validate();

        const double t_end = end_time(scenario);
        const std::vector<double> breakpoints = build_breakpoints(scenario, t_end);

        std::vector<double> positions;
        for (const auto& t : scenario.trains) positions.push_back(t.initial_position);

        std::vector<TractionDrive> drives;
        if (scenario.mode == SimMode::DriveLevel) {
            for (const auto& t : scenario.trains) drives.emplace_back(t.drive, t.chopper);
            result.drive_waveforms.resize(scenario.trains.size());
        }

        std::vector<double> warm_voltages;
        std::vector<double> drive_powers(scenario.trains.size(), 0.0);
        bool have_drive_powers = false;

        for (std::size_t span = 0; span + 1 < breakpoints.size(); ++span) {
            const double b0 = breakpoints[span];
            const double b1 = breakpoints[span + 1];
            const double mid = 0.5 * (b0 + b1);
            std::vector<double> span_accels;
            for (const auto& t : scenario.trains)
                span_accels.push_back(accel_from_profile(t.profile, std::min(mid, t.profile.duration())));

            const int steps = std::max(1, static_cast<int>(std::ceil((b1 - b0) / scenario.dt_network - 1e-9)));
            for (int k = 0; k <= steps; ++k) {
                const double t = k == steps ? b1 : b0 + k * scenario.dt_network;
                if (k > 0) {
                    const double t_prev = result.records.back().t;
                    advance_positions(scenario, positions, t_prev, t, result);
                }
                if (scenario.mode == SimMode::DriveLevel && !result.records.empty()) {
                    const double t_prev = result.records.back().t;
                    if (t > t_prev) {
                        step_drives(scenario, drives, result.records.back(), t_prev, t,
                                    span_accels, drive_powers);
                        have_drive_powers = true;
                        for (std::size_t i = 0; i < drives.size(); ++i)
                            result.drive_waveforms[i].push_back(
                                drives[i].sample(drives[i].speed_ctrl().torque_ref));
                    }
                }
                result.records.push_back(make_record(scenario, t, positions, span_accels,
                                                     have_drive_powers ? &drive_powers : nullptr,
                                                     warm_voltages));
                warm_voltages = result.records.back().node_voltages;
            }
        }

        integrate(scenario, result);
        return result;
    }

private:
    static double end_time(const Scenario& scenario) {
        double t_end = std::numeric_limits<double>::infinity();
        for (const auto& t : scenario.trains) t_end = std::min(t_end, t.profile.duration());
        if (!(t_end > 0.0)) throw ValidationError("run: profiles must span positive time");
        return t_end;
    }

    static std::vector<double> build_breakpoints(const Scenario& scenario, double t_end) {
        std::set<double> pts{0.0, t_end};
        for (const auto& t : scenario.trains)
            for (const auto& s : t.profile.samples)
                if (s.t > 0.0 && s.t < t_end) pts.insert(s.t);
        return {pts.begin(), pts.end()};
    }

    static void advance_positions(const Scenario& scenario, std::vector<double>& positions,
                                  double t0, double t1, const RunResult& result) {
        for (std::size_t i = 0; i < scenario.trains.size(); ++i) {
            const auto& train = scenario.trains[i];
            const double v0 = sample_speed(train.profile, t0);
            const double v1 = sample_speed(train.profile, t1);
            const double dir = train.direction == Direction::Eastbound ? 1.0 : -1.0;
            positions[i] += dir * 0.5 * (v0 + v1) * (t1 - t0);
            if (!scenario.layout.contains(positions[i]))
                throw PlacementError("train " + std::to_string(i) + " leaves the layout at t=" +
                                     std::to_string(t1) + " s (position " +
                                     std::to_string(positions[i]) + " m)");
        }
        (void)result;
    }

    /// Backward chain for one train at (t, v, a): forces, axle, motor point
    /// and the terminal electrical power in quasi-static mode.
    static TrainStepState chain_state(const TrainSpec& train, double position, double v, double a) {
        TrainStepState s;
        s.position = position;
        s.speed = v;
        s.accel = a;
        s.forces = tractive_effort(a, v, train.vehicle);
        s.axle = axle_torque_speed(s.forces.tractive, v, train.vehicle);
        s.motor = wheel_to_motor(s.axle.torque, s.axle.omega, train.vehicle);
        s.mech_power = motor_count(train.vehicle) * s.motor.torque * s.motor.omega;
        s.electrical_power = s.mech_power >= 0.0 ? s.mech_power / train.drive_efficiency
                                                 : s.mech_power * train.drive_efficiency;
        return s;
    }

    static StepRecord make_record(const Scenario& scenario, double t,
                                  const std::vector<double>& positions,
                                  const std::vector<double>& span_accels,
                                  const std::vector<double>* drive_powers,
                                  const std::vector<double>& warm_voltages) {
        StepRecord rec;
        rec.t = t;
        std::vector<double> train_powers;
        std::vector<ChopperSetting> choppers;
        std::vector<int> directions;
        for (std::size_t i = 0; i < scenario.trains.size(); ++i) {
            const auto& train = scenario.trains[i];
            const double v = sample_speed(train.profile, std::min(t, train.profile.duration()));
            TrainStepState s = chain_state(train, positions[i], v, span_accels[i]);
            if (drive_powers)  // drive-level: measured DC power replaces the chain estimate
                s.electrical_power = (*drive_powers)[i];
            rec.trains.push_back(s);
            train_powers.push_back(s.electrical_power);
            // one chopper bank per motor: the node sees them in parallel
            choppers.push_back({train.chopper.v_activate, train.chopper.v_release,
                                train.vehicle.chopper_resistance / motor_count(train.vehicle)});
            directions.push_back(train.direction == Direction::Eastbound ? 1 : 0);
        }

        TrackLayout layout = scenario.layout;  // substation list is authoritative
        layout.substation_positions.clear();
        for (const auto& sub : scenario.substations)
            layout.substation_positions.push_back(sub.position);
        const NetworkGraph graph = build_combined_graph(layout, positions, directions);
        SolveResult solved;
        try {
            solved = solve(graph, train_powers, scenario.substations, choppers, scenario.solver,
                           warm_voltages.empty() ? nullptr : &warm_voltages);
        } catch (const InfeasibleError& e) {
            throw InfeasibleError("t=" + std::to_string(t) + " s: " + e.what(), e.train_index);
        } catch (const SolveError& e) {
            throw SolveError("t=" + std::to_string(t) + " s: " + e.what(), e.residual);
        }

        for (std::size_t i = 0; i < rec.trains.size(); ++i) {
            rec.trains[i].voltage = solved.node_voltages[graph.train_node[i]];
            rec.trains[i].current = solved.train_currents[i];
            rec.trains[i].chopper_power = solved.chopper_powers[i];
        }
        rec.substation_currents = solved.substation_currents;
        for (std::size_t j = 0; j < scenario.substations.size(); ++j) {
            const double v_node = solved.node_voltages[graph.substation_node[j]];
            rec.substation_voltages.push_back(v_node);
            rec.substation_powers.push_back(v_node * solved.substation_currents[j]);
        }
        rec.rail_loss_power = solved.rail_loss_power;
        rec.substation_loss_power = solved.substation_loss_power;
        rec.node_voltages = solved.node_voltages;
        rec.solver_iterations = solved.iterations;
        rec.solver_residual = solved.residual;
        return rec;
    }

    /// Runs every train's drive over [t0, t1] against the bus voltage of the
    /// last solve; deposits the interval-mean electrical power per train.
    static void step_drives(const Scenario& scenario, std::vector<TractionDrive>& drives,
                            const StepRecord& last, double t0, double t1,
                            const std::vector<double>& span_accels,
                            std::vector<double>& drive_powers) {
        for (std::size_t i = 0; i < scenario.trains.size(); ++i) {
            const auto& train = scenario.trains[i];
            const double v_dc = std::max(last.trains[i].voltage, 50.0);
            drives[i].note_bus_voltage(v_dc);
            const int n_motors = motor_count(train.vehicle);
            double t = t0;
            double energy = 0.0;
            while (t < t1 - 1e-12) {
                const double dt = std::min(scenario.dt_control, t1 - t);
                const double v = sample_speed(train.profile, std::min(t, train.profile.duration()));
                const TrainStepState s = chain_state(train, 0.0, v, span_accels[i]);
                const double omega_ref = s.axle.omega * train.vehicle.gear_ratio;
                // the backward chain torque is the shaft load the motor must hold
                const double load = s.motor.torque;
                MachineStepResult r = drives[i].step_speed_ref(omega_ref, load, v_dc, train.vehicle);
                energy += r.p_electrical * dt;
                t += dt;
            }
            drive_powers[i] = n_motors * energy / (t1 - t0);
        }
    }

    static void integrate(const Scenario& scenario, RunResult& result) {
        auto& records = result.records;
        auto& report = result.report;
        report.trains.assign(scenario.trains.size(), {});
        report.substation_energy.assign(scenario.substations.size(), 0.0);

        for (std::size_t k = 0; k + 1 < records.size(); ++k) {
            StepRecord& r0 = records[k];
            StepRecord& r1 = records[k + 1];
            const double dt = r1.t - r0.t;
            if (dt <= 0.0) {  // breakpoint twin; carry cumulative columns over
                copy_cumulatives(r0, r1);
                continue;
            }
            for (std::size_t i = 0; i < scenario.trains.size(); ++i) {
                TrainEnergy& te = report.trains[i];
                const TrainStepState& a = r0.trains[i];
                const TrainStepState& b = r1.trains[i];
                const double e_step = 0.5 * (a.electrical_power + b.electrical_power) * dt;
                te.total_energy += e_step;
                te.chopper_energy += 0.5 * (a.chopper_power + b.chopper_power) * dt;
                if (a.accel > 0.0) {
                    te.accel_energy += e_step;
                } else if (a.accel < 0.0) {
                    te.decel_energy += -0.5 * (std::min(a.electrical_power, 0.0) +
                                               std::min(b.electrical_power, 0.0)) * dt;
                }
                te.rolling_work += 0.5 * (a.forces.rolling * a.speed + b.forces.rolling * b.speed) * dt;
                te.aero_work += 0.5 * (a.forces.aero * a.speed + b.forces.aero * b.speed) * dt;
                te.grade_work += 0.5 * (a.forces.grade * a.speed + b.forces.grade * b.speed) * dt;
                te.gearbox_loss += 0.5 * ((a.mech_power - a.forces.tractive * a.speed) +
                                          (b.mech_power - b.forces.tractive * b.speed)) * dt;
                te.drive_loss += 0.5 * ((a.electrical_power - a.mech_power) +
                                        (b.electrical_power - b.mech_power)) * dt;
                r1.trains[i].cumulative_energy = r0.trains[i].cumulative_energy + e_step;
                r1.trains[i].cumulative_chopper_energy =
                    r0.trains[i].cumulative_chopper_energy +
                    0.5 * (a.chopper_power + b.chopper_power) * dt;
            }
            for (std::size_t j = 0; j < scenario.substations.size(); ++j)
                report.substation_energy[j] +=
                    0.5 * (r0.substation_powers[j] + r1.substation_powers[j]) * dt;
            report.rail_loss_energy += 0.5 * (r0.rail_loss_power + r1.rail_loss_power) * dt;
            report.substation_loss_energy +=
                0.5 * (r0.substation_loss_power + r1.substation_loss_power) * dt;

            r1.cumulative_substation_energy =
                r0.cumulative_substation_energy +
                0.5 * (sum(r0.substation_powers) + sum(r1.substation_powers)) * dt;
            r1.cumulative_rail_loss_energy =
                r0.cumulative_rail_loss_energy +
                0.5 * (r0.rail_loss_power + r1.rail_loss_power) * dt;
            double chop0 = 0.0, chop1 = 0.0;
            for (const auto& ts : r0.trains) chop0 += ts.chopper_power;
            for (const auto& ts : r1.trains) chop1 += ts.chopper_power;
            r1.cumulative_chopper_energy =
                r0.cumulative_chopper_energy + 0.5 * (chop0 + chop1) * dt;
        }

        const double duration = records.empty() ? 0.0 : records.back().t - records.front().t;
        for (const auto& sub : scenario.substations) report.aux_energy += sub.aux_load * duration;

        for (std::size_t i = 0; i < scenario.trains.size(); ++i) {
            TrainEnergy& te = report.trains[i];
            const auto& profile = scenario.trains[i].profile;
            const double t_last = records.empty() ? 0.0 : records.back().t;
            const double v0 = sample_speed(profile, 0.0);
            const double v1 = sample_speed(profile, std::min(t_last, profile.duration()));
            te.kinetic_delta = 0.5 * scenario.trains[i].vehicle.total_mass() * (v1 * v1 - v0 * v0);
            if (te.accel_energy > 1e-9) te.regen_ratio = te.decel_energy / te.accel_energy;
            te.chopper_energy = std::max(te.chopper_energy, 0.0);
        }

        // global conservation ledger (see EnergyReport for the identity)
        double rhs = report.rail_loss_energy + report.aux_energy;
        double delivered = 0.0;
        for (double e : report.substation_energy) delivered += e;
        for (const auto& te : report.trains) {
            rhs += te.kinetic_delta + te.rolling_work + te.aero_work + te.grade_work +
                   te.gearbox_loss + te.drive_loss + te.chopper_energy;
            report.chopper_energy_total += te.chopper_energy;
        }
        report.ledger_residual = delivered - rhs;
        report.ledger_scale = std::max(std::abs(delivered), 1.0);
    }

    static void copy_cumulatives(const StepRecord& from, StepRecord& to) {
        for (std::size_t i = 0; i < to.trains.size(); ++i) {
            to.trains[i].cumulative_energy = from.trains[i].cumulative_energy;
            to.trains[i].cumulative_chopper_energy = from.trains[i].cumulative_chopper_energy;
        }
        to.cumulative_substation_energy = from.cumulative_substation_energy;
        to.cumulative_rail_loss_energy = from.cumulative_rail_loss_energy;
        to.cumulative_chopper_energy = from.cumulative_chopper_energy;
    }

    static double sum(const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
};

inline RunResult run(const Scenario& scenario) { return SimEngine::run(scenario); }

} // namespace rbsim

#endif
