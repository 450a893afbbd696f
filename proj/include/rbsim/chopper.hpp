#ifndef RBSIM_CHOPPER_HPP
#define RBSIM_CHOPPER_HPP

#include "rbsim/errors.hpp"

namespace rbsim {

/// Hysteresis-controlled braking resistor on the DC bus. The IGBT turns on
/// when the bus rises above the activation threshold and off again only
/// when it falls below the (lower) release threshold.
struct ChopperState {
    bool on = false;
    double v_activate = 780.0;  // V, upper activation limit
    double v_release = 760.0;   // V, lower shutdown limit
    double resistance = 2.0;    // ohm

    void validate() const {
        if (!(v_release < v_activate))
            throw ValidationError("chopper: release voltage must be below activation voltage");
        if (resistance <= 0.0)
            throw ValidationError("chopper: resistance must be > 0");
    }
};

/// Advances the switch state for the bus voltage seen this step and returns
/// the power dissipated in the resistor bank (W). The switch never conducts
/// at or below the release voltage.
inline double chopper_step(double v_dc, ChopperState& s) {
    if (!s.on && v_dc > s.v_activate) s.on = true;
    else if (s.on && v_dc <= s.v_release) s.on = false;
    return s.on ? v_dc * v_dc / s.resistance : 0.0;
}

} // namespace rbsim

#endif
