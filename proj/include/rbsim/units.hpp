#ifndef RBSIM_UNITS_HPP
#define RBSIM_UNITS_HPP

#include <string>

#include "rbsim/errors.hpp"

namespace rbsim {

// Internal quantities are strictly SI; other units exist only at the I/O
// boundary.
enum class SpeedUnit { MetersPerSecond, KilometersPerHour, MilesPerHour };

constexpr double kMphToMps = 0.44704;        // exact by definition
constexpr double kKmhToMps = 1.0 / 3.6;
constexpr double kJoulesPerKwh = 3.6e6;

constexpr double to_mps(double value, SpeedUnit unit) {
    switch (unit) {
        case SpeedUnit::MetersPerSecond: return value;
        case SpeedUnit::KilometersPerHour: return value * kKmhToMps;
        case SpeedUnit::MilesPerHour: return value * kMphToMps;
    }
    return value;
}

inline SpeedUnit parse_speed_unit(const std::string& tag) {
    if (tag == "m/s" || tag == "mps") return SpeedUnit::MetersPerSecond;
    if (tag == "km/h" || tag == "kmh") return SpeedUnit::KilometersPerHour;
    if (tag == "mph") return SpeedUnit::MilesPerHour;
    throw ParseError("unknown speed unit '" + tag + "' (expected m/s, km/h or mph)");
}

inline const char* speed_unit_name(SpeedUnit unit) {
    switch (unit) {
        case SpeedUnit::MetersPerSecond: return "m/s";
        case SpeedUnit::KilometersPerHour: return "km/h";
        case SpeedUnit::MilesPerHour: return "mph";
    }
    return "?";
}

constexpr double joules_to_kwh(double joules) { return joules / kJoulesPerKwh; }

} // namespace rbsim

#endif
