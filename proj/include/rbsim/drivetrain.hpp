#ifndef RBSIM_DRIVETRAIN_HPP
#define RBSIM_DRIVETRAIN_HPP

#include <cmath>

#include "rbsim/vehicle_dynamics.hpp"

namespace rbsim {

/// Operating point on the motor side of the gearbox.
struct MotorShaftPoint {
    double torque = 0.0;       // T_G, N*m
    double omega = 0.0;        // omega_G, rad/s (= omega_w * gamma_G)
    double loss_torque = 0.0;  // B >= 0, N*m at the wheel side
};

/// Gearbox map, wheel side -> motor side. The loss torque B = |T_w|*(1-eta)
/// always opposes power flow: added to the magnitude while motoring,
/// subtracted from it while braking, so the gearbox is dissipative in both
/// directions.
inline MotorShaftPoint wheel_to_motor(double wheel_torque, double wheel_omega,
                                      const VehicleParams& p) {
    MotorShaftPoint out;
    out.loss_torque = std::abs(wheel_torque) * (1.0 - p.gearbox_efficiency);
    // motoring: |T| grows by B; braking: adding positive B to negative T_w
    // shrinks the recovered magnitude
    out.torque = (wheel_torque + out.loss_torque) / p.gear_ratio;
    out.omega = wheel_omega * p.gear_ratio;
    return out;
}

/// One traction motor per axle, four axles per car.
inline int motor_count(const VehicleParams& p) { return 4 * p.n_cars; }

} // namespace rbsim

#endif
