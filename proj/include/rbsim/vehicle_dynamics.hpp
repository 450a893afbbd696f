#ifndef RBSIM_VEHICLE_DYNAMICS_HPP
#define RBSIM_VEHICLE_DYNAMICS_HPP

#include <cmath>
#include <string>

#include "rbsim/errors.hpp"
#include "rbsim/speed_profile.hpp"
#include "rbsim/units.hpp"

namespace rbsim {

/// Consist-level vehicle constants. Defaults are a 10-car metro consist;
/// the braking chopper and speed-controller entries belong to the drive
/// but ride along here because they are per-vehicle.
struct VehicleParams {
    double mass_per_car = 38000.0;   // kg
    int n_cars = 10;
    double rolling_resistance = 0.002;   // f_R, dimensionless
    double gravity = 9.81;               // N/kg
    double slope_angle = 0.0;            // rad, per-scenario constant grade
    double drag_coefficient = 0.5;       // C_w
    double frontal_area = 9.0;           // m^2
    double air_density = 1.225;          // kg/m^3
    double wheel_radius = 0.432;         // m
    double gear_ratio = 6.64;            // gamma_G
    double gearbox_efficiency = 0.96;    // eta_G
    double chopper_resistance = 2.0;     // ohm, onboard brake resistor
    double speed_kp = 30.0;              // speed controller gains
    double speed_ki = 100.0;
    double torque_min = -2000.0;         // N*m, per motor
    double torque_max = 2000.0;
    double accel_min = -3.0 * kMphToMps; // m/s^2 (vehicle limit, -3 mph/s)
    double accel_max = 3.5 * kMphToMps;  // m/s^2 (+3.5 mph/s)

    double total_mass() const { return mass_per_car * n_cars; }

    void validate() const {
        if (mass_per_car <= 0.0) throw ValidationError("vehicle: mass_per_car must be > 0");
        if (n_cars < 1) throw ValidationError("vehicle: n_cars must be >= 1");
        if (gearbox_efficiency <= 0.0 || gearbox_efficiency > 1.0)
            throw ValidationError("vehicle: gearbox efficiency must be in (0, 1]");
        if (wheel_radius <= 0.0) throw ValidationError("vehicle: wheel radius must be > 0");
        if (gear_ratio <= 0.0) throw ValidationError("vehicle: gear ratio must be > 0");
        if (chopper_resistance <= 0.0) throw ValidationError("vehicle: chopper resistance must be > 0");
        if (!(torque_min < 0.0 && 0.0 < torque_max))
            throw ValidationError("vehicle: torque limits must straddle zero");
        if (!(accel_min < 0.0 && 0.0 < accel_max))
            throw ValidationError("vehicle: acceleration limits must straddle zero");
    }
};

/// All forces acting on the consist at one instant (N).
struct ForceBreakdown {
    double tractive = 0.0;   // F_T, signed (negative while braking)
    double rolling = 0.0;    // F_N >= 0
    double grade = 0.0;      // F_g, 0 on flat track
    double aero = 0.0;       // F_a >= 0
};

/// Torque and speed at one axle.
struct AxleOutput {
    double torque = 0.0;   // T_w, N*m, sign follows tractive effort
    double omega = 0.0;    // rad/s, >= 0
};

struct ResistiveForces {
    double rolling;
    double grade;
    double aero;
};

/// F_N = f_R*M*g*cos(theta), F_g = M*g*sin(theta), F_a = 0.5*C_w*A*rho*v^2.
inline ResistiveForces resistive_forces(double v, const VehicleParams& p) {
    const double m = p.total_mass();
    return {
        p.rolling_resistance * m * p.gravity * std::cos(p.slope_angle),
        m * p.gravity * std::sin(p.slope_angle),
        0.5 * p.drag_coefficient * p.frontal_area * p.air_density * v * v,
    };
}

/// Tractive effort needed to realize `accel` at speed `v`:
/// F_T = M*a + F_N + F_g + F_a.
inline ForceBreakdown tractive_effort(double accel, double v, const VehicleParams& p) {
    const ResistiveForces r = resistive_forces(v, p);
    ForceBreakdown out;
    out.rolling = r.rolling;
    out.grade = r.grade;
    out.aero = r.aero;
    out.tractive = p.total_mass() * accel + r.rolling + r.grade + r.aero;
    return out;
}

/// Per-axle torque and speed: T_w = F_T*r/(4*n_cars), omega_w = v/r.
/// Four motored axles per car.
inline AxleOutput axle_torque_speed(double tractive_force, double v, const VehicleParams& p) {
    return {
        tractive_force * p.wheel_radius / (4.0 * p.n_cars),
        v / p.wheel_radius,
    };
}

/// Checks every profile segment against the vehicle acceleration limits.
/// Returns an empty string when within limits, else a description of the
/// worst violation (callers decide whether that is a warning or an error).
inline std::string check_accel_limits(const SpeedProfile& profile, const VehicleParams& p) {
    auto [max_down, max_up] = slope_extremes(profile);
    std::string msg;
    if (max_up > p.accel_max + 1e-12)
        msg = "profile acceleration " + std::to_string(max_up) + " m/s^2 exceeds limit " +
              std::to_string(p.accel_max);
    if (max_down < p.accel_min - 1e-12) {
        if (!msg.empty()) msg += "; ";
        msg += "profile deceleration " + std::to_string(max_down) + " m/s^2 exceeds limit " +
               std::to_string(p.accel_min);
    }
    return msg;
}

} // namespace rbsim

#endif
