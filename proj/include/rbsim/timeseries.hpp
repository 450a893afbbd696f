#ifndef RBSIM_TIMESERIES_HPP
#define RBSIM_TIMESERIES_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "rbsim/sim_types.hpp"
#include "rbsim/traction_drive.hpp"
#include "rbsim/units.hpp"

namespace rbsim {

namespace detail {
inline void append_number(std::string& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    out += buf;
}
} // namespace detail

/// Comma-separated time series of a run. Column order (documented in the
/// README): time_s; per train position_m, speed_mps, tractive_force_N,
/// electrical_power_W, current_A, voltage_V, chopper_power_W, energy_J; per
/// substation current_A; then cumulative substation_energy_J,
/// rail_loss_energy_J, chopper_energy_J.
inline void emit_timeseries(const RunResult& result, std::ostream& out, std::size_t n_trains,
                            std::size_t n_substations) {
    std::string line = "time_s";
    for (std::size_t i = 1; i <= n_trains; ++i) {
        const std::string p = "train" + std::to_string(i) + "_";
        for (const char* col : {"position_m", "speed_mps", "tractive_force_N",
                                "electrical_power_W", "current_A", "voltage_V",
                                "chopper_power_W", "energy_J"})
            line += "," + p + col;
    }
    for (std::size_t j = 1; j <= n_substations; ++j)
        line += ",sub" + std::to_string(j) + "_current_A";
    line += ",substation_energy_J,rail_loss_energy_J,chopper_energy_J";
    out << line << "\n";

    for (const auto& rec : result.records) {
        line.clear();
        detail::append_number(line, rec.t);
        for (const auto& ts : rec.trains) {
            for (double v : {ts.position, ts.speed, ts.forces.tractive, ts.electrical_power,
                             ts.current, ts.voltage, ts.chopper_power, ts.cumulative_energy}) {
                line += ',';
                detail::append_number(line, v);
            }
        }
        for (double i : rec.substation_currents) {
            line += ',';
            detail::append_number(line, i);
        }
        for (double v : {rec.cumulative_substation_energy, rec.cumulative_rail_loss_energy,
                         rec.cumulative_chopper_energy}) {
            line += ',';
            detail::append_number(line, v);
        }
        out << line << "\n";
    }
}

inline std::size_t timeseries_column_count(std::size_t n_trains, std::size_t n_substations) {
    return 1 + 8 * n_trains + n_substations + 3;
}

/// Human-readable run summary: the global key: value block plus per-train
/// and per-substation breakdowns, in kWh with joules alongside.
inline void emit_summary(const EnergyReport& report, std::ostream& out) {
    double accel = 0.0, decel = 0.0, chopper = 0.0, substat = 0.0;
    for (const auto& te : report.trains) {
        accel += te.accel_energy;
        decel += te.decel_energy;
        chopper += te.chopper_energy;
    }
    for (double e : report.substation_energy) substat += e;

    auto kv = [&out](const std::string& key, double joules) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s: %.6g (%.6g J)\n", key.c_str(),
                      joules_to_kwh(joules), joules);
        out << buf;
    };
    kv("accel_kWh", accel);
    kv("decel_kWh", decel);
    if (accel > 0.0) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "regen_ratio: %.4f\n", decel / accel);
        out << buf;
    } else {
        out << "regen_ratio: n/a\n";
    }
    kv("chopper_kWh", chopper);
    kv("substation_kWh", substat);
    kv("rail_loss_kWh", report.rail_loss_energy);

    for (std::size_t i = 0; i < report.trains.size(); ++i) {
        const auto& te = report.trains[i];
        out << "train " << i + 1 << ":\n";
        kv("  accel_kWh", te.accel_energy);
        kv("  decel_kWh", te.decel_energy);
        if (te.regen_ratio) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "  regen_ratio: %.4f\n", *te.regen_ratio);
            out << buf;
        } else {
            out << "  regen_ratio: n/a\n";
        }
        kv("  chopper_kWh", te.chopper_energy);
    }
    for (std::size_t j = 0; j < report.substation_energy.size(); ++j)
        kv("substation " + std::to_string(j + 1) + " delivered_kWh",
           report.substation_energy[j]);
    {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "energy_ledger_residual: %.3g%% of delivered\n",
                      100.0 * report.ledger_residual /
                          (report.ledger_scale > 0.0 ? report.ledger_scale : 1.0));
        out << buf;
    }
}

/// Drive waveform dump (drive-level mode): same delimited format as the
/// main time series.
inline void emit_drive_waveforms(const std::vector<DriveSample>& samples, std::ostream& out) {
    out << "time_s,torque_ref_Nm,torque_Nm,flux_Wb,i_alpha_A,i_beta_A,v_dc_V\n";
    std::string line;
    for (const auto& s : samples) {
        line.clear();
        detail::append_number(line, s.t);
        for (double v : {s.torque_ref, s.torque, s.flux_mag, s.i_alpha, s.i_beta, s.v_dc}) {
            line += ',';
            detail::append_number(line, v);
        }
        out << line << "\n";
    }
}

} // namespace rbsim

#endif
