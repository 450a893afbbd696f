#ifndef RBSIM_SUBSTATION_HPP
#define RBSIM_SUBSTATION_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbsim/errors.hpp"

namespace rbsim {

/// Rectifier substation reduced to a Thevenin source behind an ideal series
/// diode: it can only push current into the rail, never absorb. `diode`
/// exists so oracle tests can exercise the bidirectional closed form; real
/// scenarios leave it on.
struct SubstationParams {
    double position = 0.0;       // m along the corridor
    double no_load_voltage = 650.0;   // V0
    double internal_resistance = 0.05;  // ohm, transformer + commutation lump
    double aux_load = 0.0;       // W constant auxiliary draw at the node
    bool diode = true;

    void validate() const {
        if (no_load_voltage <= 0.0) throw ValidationError("substation: V0 must be > 0");
        if (internal_resistance <= 0.0) throw ValidationError("substation: R_th must be > 0");
        if (aux_load < 0.0) throw ValidationError("substation: aux load must be >= 0");
    }
};

/// Current delivered at rail voltage v_rail: max(0, (V0 - V)/R_th).
inline double substation_current(double v_rail, const SubstationParams& p) {
    const double i = (p.no_load_voltage - v_rail) / p.internal_resistance;
    return p.diode ? std::max(0.0, i) : i;
}

/// Ideal 12-pulse no-load DC voltage from the transformer secondary
/// line-line RMS: V0 = (3*sqrt(2)/pi) * V_ll * arrangement. The parallel
/// circuit pair of the reference substation has arrangement factor 1.
inline double twelve_pulse_no_load(double v_ll_secondary, double arrangement_factor = 1.0) {
    if (v_ll_secondary <= 0.0)
        throw ValidationError("twelve_pulse_no_load: secondary voltage must be > 0");
    return 3.0 * std::sqrt(2.0) / std::numbers::pi * v_ll_secondary * arrangement_factor;
}

} // namespace rbsim

#endif
