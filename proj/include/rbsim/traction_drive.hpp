#ifndef RBSIM_TRACTION_DRIVE_HPP
#define RBSIM_TRACTION_DRIVE_HPP

#include <functional>
#include <vector>

#include "rbsim/chopper.hpp"
#include "rbsim/dtc.hpp"
#include "rbsim/induction_machine.hpp"

namespace rbsim {

/// Containment bands for the drive (the comparators trip at half of these
/// so that one-step switching ripple stays inside; see DriveConfig notes).
struct DriveConfig {
    MachineParams machine;
    double torque_band = 100.0;     // N*m (5% of the 2000 N*m limit)
    double flux_band = 0.018;       // Wb (2% of rated flux)
    double dt_control = 50e-6;      // s

    HysteresisBands trip_bands() const {
        // torque trips at the full band (classic); flux trips at half so the
        // per-step flux excursion of an active vector stays inside the band
        return {torque_band, 0.5 * flux_band};
    }
};

/// One waveform sample for the optional drive dump.
struct DriveSample {
    double t;
    double torque_ref;
    double torque;
    double flux_mag;
    double i_alpha;
    double i_beta;
    double v_dc;
};

/// Closed-loop direct-torque-controlled drive around one representative
/// machine: estimator, hysteresis comparators, switching table and the
/// onboard chopper. Starts in a magnetization state (fixed radial vector)
/// until the stator flux first reaches its reference band.
class TractionDrive {
public:
    explicit TractionDrive(const DriveConfig& cfg) : cfg_(cfg) {
        cfg_.machine.validate();
        chopper_.validate();
    }

    TractionDrive(const DriveConfig& cfg, const ChopperState& chopper)
        : cfg_(cfg), chopper_(chopper) {
        cfg_.machine.validate();
        chopper_.validate();
    }

    /// Advances one control step against an externally torque-referenced
    /// DTC loop. Returns the machine step bookkeeping.
    MachineStepResult step_torque_ref(double torque_ref, double load_torque, double v_dc) {
        const HysteresisBands bands = cfg_.trip_bands();
        GateVector gate;
        const MachineOutputs before = machine_outputs(machine_state_, cfg_.machine);
        const double flux_mag = dtc_.flux_estimate.magnitude();
        if (!magnetized_) {
            if (flux_mag >= cfg_.machine.rated_flux - bands.flux) magnetized_ = true;
        }
        if (!magnetized_) {
            gate = kGateVectors[1];  // fixed radial vector builds flux from rest
            dtc_.sector = flux_sector(dtc_.flux_estimate);
            dtc_.last_gate = gate;
        } else {
            const double torque_est =
                1.5 * cfg_.machine.pole_pairs *
                (dtc_.flux_estimate.alpha * before.stator_current.beta -
                 dtc_.flux_estimate.beta * before.stator_current.alpha);
            gate = dtc_select_vector(torque_ref, torque_est, cfg_.machine.rated_flux, dtc_, bands);
        }

        const AlphaBeta v = inverter_voltage(gate, v_dc);
        MachineStepResult r = machine_step(gate, v_dc, load_torque, cfg_.dt_control,
                                           machine_state_, cfg_.machine, step_count_);
        estimate_flux_torque(v, before.stator_current, cfg_.dt_control, dtc_, cfg_.machine);
        chopper_power_ = chopper_step(v_dc, chopper_);
        t_ += cfg_.dt_control;
        ++step_count_;
        return r;
    }

    /// Advances one control step tracking a speed reference through the PI
    /// controller (corridor operation).
    MachineStepResult step_speed_ref(double omega_ref, double load_torque, double v_dc,
                                     const VehicleParams& vehicle) {
        speed_controller_step(omega_ref, machine_state_.omega_mech, cfg_.dt_control, speed_ctrl_,
                              vehicle, cfg_.machine);
        return step_torque_ref(speed_ctrl_.torque_ref, load_torque, v_dc);
    }

    const MachineState& machine_state() const { return machine_state_; }
    MachineState& machine_state() { return machine_state_; }
    const DtcState& dtc_state() const { return dtc_; }
    const SpeedCtrlState& speed_ctrl() const { return speed_ctrl_; }
    const ChopperState& chopper() const { return chopper_; }
    double chopper_power() const { return chopper_power_; }
    double time() const { return t_; }
    const DriveConfig& config() const { return cfg_; }
    bool magnetized() const { return magnetized_; }

    DriveSample sample(double torque_ref) const {
        const MachineOutputs o = machine_outputs(machine_state_, cfg_.machine);
        return {t_, torque_ref, o.torque, dtc_.flux_estimate.magnitude(),
                o.stator_current.alpha, o.stator_current.beta, last_v_dc_};
    }

    void note_bus_voltage(double v_dc) { last_v_dc_ = v_dc; }

private:
    DriveConfig cfg_;
    MachineState machine_state_;
    DtcState dtc_;
    SpeedCtrlState speed_ctrl_;
    ChopperState chopper_;
    bool magnetized_ = false;
    double chopper_power_ = 0.0;
    double t_ = 0.0;
    long step_count_ = 0;
    double last_v_dc_ = 0.0;
};

} // namespace rbsim

#endif
