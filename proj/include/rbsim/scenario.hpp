#ifndef RBSIM_SCENARIO_HPP
#define RBSIM_SCENARIO_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbsim/chopper.hpp"
#include "rbsim/errors.hpp"
#include "rbsim/network_solver.hpp"
#include "rbsim/rail_network.hpp"
#include "rbsim/speed_profile.hpp"
#include "rbsim/substation.hpp"
#include "rbsim/traction_drive.hpp"
#include "rbsim/vehicle_dynamics.hpp"

namespace rbsim {

enum class Direction { Westbound, Eastbound };
enum class SimMode { QuasiStatic, DriveLevel };

/// One train entry of a scenario: the consist, its prescribed speed
/// trajectory and where it starts.
struct TrainSpec {
    VehicleParams vehicle;
    SpeedProfile profile;
    double initial_position = 0.0;  // m
    Direction direction = Direction::Eastbound;
    double drive_efficiency = 1.0;  // quasi-static stand-in for drive losses
    ChopperState chopper;           // onboard device (thresholds shared with the solver)
    DriveConfig drive;              // drive-level mode only
};

struct Scenario {
    TrackLayout layout;
    std::vector<SubstationParams> substations;
    std::vector<TrainSpec> trains;
    SimMode mode = SimMode::QuasiStatic;
    double dt_network = 0.1;   // s
    double dt_control = 50e-6; // s, drive-level only
    bool strict_accel_limits = false;
    SolverOptions solver;

    /// Enforces the structural invariants; returns accumulated soft
    /// warnings (profile limit violations when not strict).
    std::vector<std::string> validate() const {
        std::vector<std::string> warnings;
        layout.validate();
        if (substations.empty()) throw ValidationError("scenario: need at least one substation");
        if (trains.empty()) throw ValidationError("scenario: need at least one train");
        if (!(dt_network > 0.0)) throw ValidationError("scenario: dt_network must be > 0");
        if (mode == SimMode::DriveLevel) {
            if (!(dt_control > 0.0)) throw ValidationError("scenario: dt_control must be > 0");
            if (dt_control > dt_network)
                throw ValidationError("scenario: dt_control must be <= dt_network");
        }
        for (const auto& s : substations) {
            s.validate();
            if (!layout.contains(s.position))
                throw ValidationError("scenario: substation outside layout extent");
        }
        for (std::size_t i = 0; i < trains.size(); ++i) {
            const auto& t = trains[i];
            t.vehicle.validate();
            t.chopper.validate();
            if (!layout.contains(t.initial_position))
                throw ValidationError("scenario: train " + std::to_string(i) +
                                      " starts outside the layout extent");
            if (t.drive_efficiency <= 0.0 || t.drive_efficiency > 1.0)
                throw ValidationError("scenario: drive efficiency must be in (0, 1]");
            if (t.profile.samples.size() < 2)
                throw ValidationError("scenario: train " + std::to_string(i) +
                                      " needs a profile with at least two samples");
            std::string msg = check_accel_limits(t.profile, t.vehicle);
            if (!msg.empty()) {
                if (strict_accel_limits)
                    throw ValidationError("train " + std::to_string(i) + ": " + msg);
                warnings.push_back("train " + std::to_string(i) + ": " + msg);
            }
        }
        return warnings;
    }
};

namespace detail {

struct ConfigSection {
    std::string name;
    int line;
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    std::string get(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end())
            throw ParseError("scenario: [" + name + "] is missing key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const {
        double out;
        if (!parse_number(get(key), out))
            throw ParseError("scenario: [" + name + "] key '" + key + "' is not a number");
        return out;
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& tok : split_fields(get(key))) {
            double v;
            if (!parse_number(tok, v))
                throw ParseError("scenario: [" + name + "] key '" + key +
                                 "' has a non-numeric entry '" + tok + "'");
            out.push_back(v);
        }
        return out;
    }

    bool flag_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ParseError("scenario: [" + name + "] key '" + key + "' must be a boolean");
    }
};

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<ConfigSection> parse_sections(std::istream& in) {
    std::vector<ConfigSection> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("scenario: malformed section header at line " +
                                 std::to_string(lineno));
            sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("scenario: expected 'key = value' at line " + std::to_string(lineno));
        if (sections.empty())
            throw ParseError("scenario: key before any [section] at line " + std::to_string(lineno));
        sections.back().values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return sections;
}

inline VehicleParams vehicle_from(const ConfigSection& s) {
    VehicleParams p;  // defaults are the reference consist
    p.mass_per_car = s.number_or("mass_per_car", p.mass_per_car);
    p.n_cars = static_cast<int>(s.number_or("n_cars", p.n_cars));
    p.rolling_resistance = s.number_or("rolling_resistance", p.rolling_resistance);
    p.gravity = s.number_or("gravity", p.gravity);
    p.slope_angle = s.number_or("slope_angle", p.slope_angle);
    p.drag_coefficient = s.number_or("drag_coefficient", p.drag_coefficient);
    p.frontal_area = s.number_or("frontal_area", p.frontal_area);
    p.air_density = s.number_or("air_density", p.air_density);
    p.wheel_radius = s.number_or("wheel_radius", p.wheel_radius);
    p.gear_ratio = s.number_or("gear_ratio", p.gear_ratio);
    p.gearbox_efficiency = s.number_or("gearbox_efficiency", p.gearbox_efficiency);
    p.chopper_resistance = s.number_or("chopper_resistance", p.chopper_resistance);
    p.speed_kp = s.number_or("speed_kp", p.speed_kp);
    p.speed_ki = s.number_or("speed_ki", p.speed_ki);
    if (s.has("torque_limit")) {
        auto lim = s.numbers("torque_limit");
        if (lim.size() != 2) throw ParseError("scenario: torque_limit needs two values");
        p.torque_min = lim[0];
        p.torque_max = lim[1];
    }
    if (s.has("accel_limit_mph_s")) {
        auto lim = s.numbers("accel_limit_mph_s");
        if (lim.size() != 2) throw ParseError("scenario: accel_limit_mph_s needs two values");
        p.accel_min = lim[0] * kMphToMps;
        p.accel_max = lim[1] * kMphToMps;
    }
    if (s.has("accel_limit")) {
        auto lim = s.numbers("accel_limit");
        if (lim.size() != 2) throw ParseError("scenario: accel_limit needs two values");
        p.accel_min = lim[0];
        p.accel_max = lim[1];
    }
    return p;
}

} // namespace detail

/// Loads a scenario from the documented key=value section format. Profile
/// paths are resolved relative to the scenario file's directory.
inline Scenario load_scenario(std::istream& in, const std::filesystem::path& base_dir = ".") {
    Scenario sc;
    bool saw_layout = false;
    for (const auto& section : detail::parse_sections(in)) {
        if (section.name == "layout") {
            saw_layout = true;
            auto extent = section.numbers("extent");
            if (extent.size() != 2)
                throw ParseError("scenario: layout extent needs 'min max'");
            sc.layout.extent_min = extent[0];
            sc.layout.extent_max = extent[1];
            if (section.has("stations")) sc.layout.station_positions = section.numbers("stations");
            sc.layout.r_power_per_m =
                section.number_or("power_rail_resistance_per_m", sc.layout.r_power_per_m);
            sc.layout.r_traction_per_m =
                section.number_or("traction_rail_resistance_per_m", sc.layout.r_traction_per_m);
        } else if (section.name == "simulation") {
            if (section.has("mode")) {
                const std::string mode = section.get("mode");
                if (mode == "quasi_static") sc.mode = SimMode::QuasiStatic;
                else if (mode == "drive_level") sc.mode = SimMode::DriveLevel;
                else throw ParseError("scenario: unknown mode '" + mode + "'");
            }
            sc.dt_network = section.number_or("dt_network", sc.dt_network);
            sc.dt_control = section.number_or("dt_control", sc.dt_control);
            sc.strict_accel_limits =
                section.flag_or("strict_accel_limits", sc.strict_accel_limits);
            sc.solver.tolerance = section.number_or("solver_tolerance", sc.solver.tolerance);
            sc.solver.max_iterations = static_cast<int>(
                section.number_or("solver_max_iterations", sc.solver.max_iterations));
            sc.solver.strict_disconnect =
                section.flag_or("strict_disconnect", sc.solver.strict_disconnect);
        } else if (section.name == "substation") {
            SubstationParams sub;
            sub.position = section.number("position");
            sub.no_load_voltage = section.number_or("no_load_voltage", sub.no_load_voltage);
            sub.internal_resistance =
                section.number_or("internal_resistance", sub.internal_resistance);
            sub.aux_load = section.number_or("aux_load", sub.aux_load);
            sc.substations.push_back(sub);
        } else if (section.name == "train") {
            TrainSpec train;
            train.vehicle = detail::vehicle_from(section);
            train.initial_position = section.number("initial_position");
            if (section.has("direction")) {
                const std::string dir = section.get("direction");
                if (dir == "westbound") train.direction = Direction::Westbound;
                else if (dir == "eastbound") train.direction = Direction::Eastbound;
                else throw ParseError("scenario: unknown direction '" + dir + "'");
            }
            train.drive_efficiency = section.number_or("drive_efficiency", 1.0);

            SpeedUnit unit = SpeedUnit::MetersPerSecond;
            if (section.has("profile_unit")) unit = parse_speed_unit(section.get("profile_unit"));
            const std::filesystem::path profile_path = base_dir / section.get("profile");
            std::ifstream pf(profile_path);
            if (!pf)
                throw ParseError("scenario: cannot open profile file '" + profile_path.string() +
                                 "'");
            train.profile = parse_speed_profile(pf, unit);

            // chopper thresholds default to 1.2 x nominal (and 20 V release
            // hysteresis); nominal is the highest substation no-load voltage
            // seen so far, else the 650 V class default
            double v_nominal = 650.0;
            for (const auto& sub : sc.substations) v_nominal = std::max(v_nominal, sub.no_load_voltage);
            train.chopper.v_activate = section.number_or("chopper_activation", 1.2 * v_nominal);
            train.chopper.v_release =
                section.number_or("chopper_release", train.chopper.v_activate - 20.0);
            train.chopper.resistance = train.vehicle.chopper_resistance;

            train.drive.dt_control = sc.dt_control;
            if (section.has("machine_rated_flux"))
                train.drive.machine.rated_flux = section.number("machine_rated_flux");
            train.drive.torque_band = section.number_or("dtc_torque_band", train.drive.torque_band);
            train.drive.flux_band = section.number_or("dtc_flux_band", train.drive.flux_band);
            sc.trains.push_back(train);
        } else {
            throw ParseError("scenario: unknown section [" + section.name + "] at line " +
                             std::to_string(section.line));
        }
    }
    if (!saw_layout) throw ParseError("scenario: missing [layout] section");
    for (auto& train : sc.trains) train.drive.dt_control = sc.dt_control;
    sc.layout.substation_positions.clear();
    for (const auto& sub : sc.substations) sc.layout.substation_positions.push_back(sub.position);
    return sc;
}

inline Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("scenario: cannot open '" + path.string() + "'");
    return load_scenario(in, path.parent_path().empty() ? "." : path.parent_path());
}

} // namespace rbsim

#endif
