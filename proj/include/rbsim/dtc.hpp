#ifndef RBSIM_DTC_HPP
#define RBSIM_DTC_HPP

#include <cmath>
#include <numbers>

#include "rbsim/induction_machine.hpp"
#include "rbsim/vehicle_dynamics.hpp"

namespace rbsim {

enum class TorqueDemand { Decrease = -1, Hold = 0, Increase = 1 };
enum class FluxDemand { Decrease = 0, Increase = 1 };

/// Direct-torque-control estimator + comparator memory. The flux estimate
/// is the voltage-model integral psi += (v - R_s i) dt; the comparator
/// states persist between calls (hysteresis).
struct DtcState {
    AlphaBeta flux_estimate;
    TorqueDemand torque_demand = TorqueDemand::Hold;
    FluxDemand flux_demand = FluxDemand::Increase;
    int sector = 1;  // 1..6, sector 1 spans [-30, +30) degrees
    GateVector last_gate;
};

struct HysteresisBands {
    double torque = 100.0;  // N*m, trip half-width
    double flux = 0.009;    // Wb, trip half-width
};

/// Voltage-model flux estimator. Returns the torque implied by the updated
/// estimate and the measured current.
inline double estimate_flux_torque(const AlphaBeta& v_stator, const AlphaBeta& i_stator,
                                   double dt, DtcState& s, const MachineParams& m) {
    if (dt <= 0.0) throw ValidationError("estimate_flux_torque: dt must be > 0");
    s.flux_estimate.alpha += (v_stator.alpha - m.r_stator * i_stator.alpha) * dt;
    s.flux_estimate.beta += (v_stator.beta - m.r_stator * i_stator.beta) * dt;
    return 1.5 * m.pole_pairs *
           (s.flux_estimate.alpha * i_stator.beta - s.flux_estimate.beta * i_stator.alpha);
}

inline int flux_sector(const AlphaBeta& flux) {
    const double ang = std::atan2(flux.beta, flux.alpha);
    const double pi = std::numbers::pi;
    int k = static_cast<int>(std::floor((ang + pi / 6.0) / (pi / 3.0)));
    return ((k % 6) + 6) % 6 + 1;
}

/// Takahashi switching table plus a flux-priority hold state: while the
/// torque comparator is satisfied, the radial vector V_k is applied whenever
/// the flux magnitude has sagged below its reference — the plain table can
/// only select zero vectors in that row and would let the flux drift out of
/// band at low speed.
inline GateVector dtc_select_vector(double torque_ref, double torque_est, double flux_ref,
                                    DtcState& s, const HysteresisBands& bands) {
    const double torque_err = torque_ref - torque_est;
    if (torque_err > bands.torque) {
        s.torque_demand = TorqueDemand::Increase;
    } else if (torque_err < -bands.torque) {
        s.torque_demand = TorqueDemand::Decrease;
    } else if ((s.torque_demand == TorqueDemand::Increase && torque_err <= 0.0) ||
               (s.torque_demand == TorqueDemand::Decrease && torque_err >= 0.0)) {
        s.torque_demand = TorqueDemand::Hold;
    }

    const double flux_mag = s.flux_estimate.magnitude();
    if (flux_mag < flux_ref - bands.flux) s.flux_demand = FluxDemand::Increase;
    else if (flux_mag > flux_ref + bands.flux) s.flux_demand = FluxDemand::Decrease;

    s.sector = flux_sector(s.flux_estimate);
    const int k = s.sector - 1;  // 0-based
    const bool flux_up = s.flux_demand == FluxDemand::Increase;

    GateVector gate;
    switch (s.torque_demand) {
        case TorqueDemand::Increase:
            gate = kGateVectors[(flux_up ? (k + 1) : (k + 2)) % 6 + 1];
            break;
        case TorqueDemand::Decrease:
            gate = kGateVectors[(flux_up ? (k + 5) : (k + 4)) % 6 + 1];
            break;
        case TorqueDemand::Hold:
            if (flux_mag < flux_ref)
                gate = kGateVectors[k % 6 + 1];  // radial: feed flux, ~zero torque
            else
                gate = (s.sector % 2 == 0) ? kGateVectors[0] : kGateVectors[7];
            break;
    }
    s.last_gate = gate;
    return gate;
}

/// PI speed controller producing the drive torque reference (Fig-5 shaped):
/// T_ref = clamp(Kp*e + Ki*integral(e)), integrator frozen while the output
/// is clamped. The flux reference is the machine's rated flux.
struct SpeedCtrlState {
    double integral = 0.0;    // accumulated N*m contribution / Ki
    double torque_ref = 0.0;  // N*m
    double flux_ref = 0.0;    // Wb
};

inline void speed_controller_step(double omega_ref, double omega, double dt, SpeedCtrlState& s,
                                  const VehicleParams& p, const MachineParams& m) {
    if (dt <= 0.0) throw ValidationError("speed_controller_step: dt must be > 0");
    const double err = omega_ref - omega;
    const double candidate = p.speed_kp * err + p.speed_ki * (s.integral + err * dt);
    if (candidate > p.torque_max) {
        s.torque_ref = p.torque_max;
    } else if (candidate < p.torque_min) {
        s.torque_ref = p.torque_min;
    } else {
        s.integral += err * dt;
        s.torque_ref = candidate;
    }
    s.flux_ref = m.rated_flux;
}

} // namespace rbsim

#endif
