#ifndef RBSIM_INDUCTION_MACHINE_HPP
#define RBSIM_INDUCTION_MACHINE_HPP

#include <array>
#include <cmath>
#include <string>

#include "rbsim/errors.hpp"

namespace rbsim {

/// Squirrel-cage induction machine constants (stationary alpha-beta frame,
/// amplitude-invariant Clarke transform). The defaults are a documented,
/// physically consistent traction-motor set; every acceptance check on the
/// drive is relative to whatever set is configured.
struct MachineParams {
    double r_stator = 29.7e-3;   // ohm
    double r_rotor = 22.1e-3;    // ohm
    double l_stator = 35.3e-3;   // H
    double l_rotor = 35.3e-3;    // H
    double l_mutual = 34.6e-3;   // H
    int pole_pairs = 2;
    double inertia = 3.0;        // kg*m^2, rotor only
    double rated_flux = 0.9;     // Wb, stator flux reference

    double flux_determinant() const { return l_stator * l_rotor - l_mutual * l_mutual; }

    void validate() const {
        if (r_stator <= 0.0 || r_rotor <= 0.0)
            throw ValidationError("machine: resistances must be > 0");
        if (l_stator <= 0.0 || l_rotor <= 0.0 || l_mutual <= 0.0)
            throw ValidationError("machine: inductances must be > 0");
        if (flux_determinant() <= 0.0)
            throw ValidationError("machine: need L_s*L_r > L_m^2 (physical leakage)");
        if (pole_pairs < 1) throw ValidationError("machine: pole_pairs must be >= 1");
        if (inertia <= 0.0) throw ValidationError("machine: inertia must be > 0");
        if (rated_flux <= 0.0) throw ValidationError("machine: rated flux must be > 0");
    }
};

/// Inverter gate triple (upper-switch states of phases a, b, c).
struct GateVector {
    int a = 0, b = 0, c = 0;
    bool operator==(const GateVector&) const = default;
    bool is_zero() const { return a == b && b == c; }
};

// The eight canonical two-level vectors. index 0 -> V0(000), 1..6 -> V1..V6,
// 7 -> V7(111).
inline constexpr std::array<GateVector, 8> kGateVectors = {{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 1, 1}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1},
}};

struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
    double magnitude() const { return std::hypot(alpha, beta); }
};

/// Stator voltage produced by a gate vector on a bus at v_dc
/// (amplitude-invariant Clarke of the three phase-to-neutral voltages).
inline AlphaBeta inverter_voltage(const GateVector& g, double v_dc) {
    const double va = v_dc * (2 * g.a - g.b - g.c) / 3.0;
    const double vb = v_dc * (2 * g.b - g.a - g.c) / 3.0;
    const double vc = v_dc * (2 * g.c - g.a - g.b) / 3.0;
    return {(2.0 / 3.0) * (va - 0.5 * vb - 0.5 * vc), (vb - vc) / std::sqrt(3.0)};
}

/// Full electromagnetic + mechanical state of one machine.
struct MachineState {
    AlphaBeta stator_flux;   // Wb
    AlphaBeta rotor_flux;    // Wb
    double omega_mech = 0.0; // rad/s

    bool finite() const {
        return std::isfinite(stator_flux.alpha) && std::isfinite(stator_flux.beta) &&
               std::isfinite(rotor_flux.alpha) && std::isfinite(rotor_flux.beta) &&
               std::isfinite(omega_mech);
    }
};

/// Algebraic outputs derived from a machine state.
struct MachineOutputs {
    AlphaBeta stator_current;  // A
    AlphaBeta rotor_current;   // A
    double torque = 0.0;       // N*m, electromagnetic
    double magnetic_energy = 0.0;  // J stored in the field
};

inline MachineOutputs machine_outputs(const MachineState& s, const MachineParams& m) {
    const double det = m.flux_determinant();
    MachineOutputs out;
    out.stator_current = {(m.l_rotor * s.stator_flux.alpha - m.l_mutual * s.rotor_flux.alpha) / det,
                          (m.l_rotor * s.stator_flux.beta - m.l_mutual * s.rotor_flux.beta) / det};
    out.rotor_current = {(m.l_stator * s.rotor_flux.alpha - m.l_mutual * s.stator_flux.alpha) / det,
                         (m.l_stator * s.rotor_flux.beta - m.l_mutual * s.stator_flux.beta) / det};
    out.torque = 1.5 * m.pole_pairs *
                 (s.stator_flux.alpha * out.stator_current.beta -
                  s.stator_flux.beta * out.stator_current.alpha);
    out.magnetic_energy = 0.75 * (s.stator_flux.alpha * out.stator_current.alpha +
                                  s.stator_flux.beta * out.stator_current.beta +
                                  s.rotor_flux.alpha * out.rotor_current.alpha +
                                  s.rotor_flux.beta * out.rotor_current.beta);
    return out;
}

/// Per-step bookkeeping from machine_step. The powers are step averages
/// (trapezoid-consistent with the Heun update); the torque is the
/// instantaneous start-of-step value the comparators act on.
struct MachineStepResult {
    double torque = 0.0;            // N*m at the start of the step
    double p_electrical = 0.0;      // W drawn from the DC bus (negative = regen)
    double i_dc = 0.0;              // A, p_electrical / v_dc
    double copper_loss = 0.0;       // W, stator + rotor
    double p_mechanical = 0.0;      // W, electromagnetic torque times shaft speed
};

namespace detail {

struct MachineDerivative {
    double d_psi_s_alpha, d_psi_s_beta;
    double d_psi_r_alpha, d_psi_r_beta;
    double d_omega;
};

inline MachineDerivative machine_derivative(const MachineState& s, const MachineOutputs& o,
                                            const AlphaBeta& v, double load_torque,
                                            const MachineParams& m) {
    const double omega_e = m.pole_pairs * s.omega_mech;
    return {
        v.alpha - m.r_stator * o.stator_current.alpha,
        v.beta - m.r_stator * o.stator_current.beta,
        -m.r_rotor * o.rotor_current.alpha - omega_e * s.rotor_flux.beta,
        -m.r_rotor * o.rotor_current.beta + omega_e * s.rotor_flux.alpha,
        (o.torque - load_torque) / m.inertia,
    };
}

inline MachineState machine_advance(const MachineState& s, const MachineDerivative& d, double dt) {
    MachineState out = s;
    out.stator_flux.alpha += d.d_psi_s_alpha * dt;
    out.stator_flux.beta += d.d_psi_s_beta * dt;
    out.rotor_flux.alpha += d.d_psi_r_alpha * dt;
    out.rotor_flux.beta += d.d_psi_r_beta * dt;
    out.omega_mech += d.d_omega * dt;
    return out;
}

} // namespace detail

/// Advances the machine one explicit Heun step of length dt under the given
/// gate vector (held for the whole step), bus voltage and shaft load torque.
/// dt must respect the explicit integration stability bound (<= 100 us).
inline MachineStepResult machine_step(const GateVector& gate, double v_dc, double load_torque,
                                      double dt, MachineState& s, const MachineParams& m,
                                      long step_index = -1) {
    if (dt <= 0.0 || dt > 100e-6)
        throw ValidationError("machine_step: dt must be in (0, 100 us]");
    const AlphaBeta v = inverter_voltage(gate, v_dc);
    const MachineOutputs o = machine_outputs(s, m);

    const auto k1 = detail::machine_derivative(s, o, v, load_torque, m);
    const MachineState predicted = detail::machine_advance(s, k1, dt);
    const auto k2 = detail::machine_derivative(predicted, machine_outputs(predicted, m), v,
                                               load_torque, m);
    const double omega_start = s.omega_mech;
    s.stator_flux.alpha += 0.5 * (k1.d_psi_s_alpha + k2.d_psi_s_alpha) * dt;
    s.stator_flux.beta += 0.5 * (k1.d_psi_s_beta + k2.d_psi_s_beta) * dt;
    s.rotor_flux.alpha += 0.5 * (k1.d_psi_r_alpha + k2.d_psi_r_alpha) * dt;
    s.rotor_flux.beta += 0.5 * (k1.d_psi_r_beta + k2.d_psi_r_beta) * dt;
    s.omega_mech += 0.5 * (k1.d_omega + k2.d_omega) * dt;

    if (!s.finite())
        throw NumericError("machine_step: state diverged at step " +
                           (step_index >= 0 ? std::to_string(step_index) : std::string("?")));

    const MachineOutputs o_end = machine_outputs(s, m);
    auto electrical = [&v](const MachineOutputs& out) {
        return 1.5 * (v.alpha * out.stator_current.alpha + v.beta * out.stator_current.beta);
    };
    auto copper = [&m](const MachineOutputs& out) {
        return 1.5 * (m.r_stator * (out.stator_current.alpha * out.stator_current.alpha +
                                    out.stator_current.beta * out.stator_current.beta) +
                      m.r_rotor * (out.rotor_current.alpha * out.rotor_current.alpha +
                                   out.rotor_current.beta * out.rotor_current.beta));
    };
    MachineStepResult r;
    r.torque = o.torque;
    r.p_electrical = 0.5 * (electrical(o) + electrical(o_end));
    r.i_dc = v_dc > 0.0 ? r.p_electrical / v_dc : 0.0;
    r.copper_loss = 0.5 * (copper(o) + copper(o_end));
    r.p_mechanical = 0.5 * (o.torque * omega_start + o_end.torque * s.omega_mech);
    return r;
}

} // namespace rbsim

#endif
