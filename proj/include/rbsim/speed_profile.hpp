#ifndef RBSIM_SPEED_PROFILE_HPP
#define RBSIM_SPEED_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rbsim/errors.hpp"
#include "rbsim/units.hpp"

namespace rbsim {

/// A measured or synthetic train speed trajectory, stored as an exact
/// piecewise-linear function of time. Internal storage is always m/s.
struct SpeedProfile {
    struct Sample {
        double t;  // s
        double v;  // m/s
    };
    std::vector<Sample> samples;
    SpeedUnit source_unit = SpeedUnit::MetersPerSecond;  // provenance only

    double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
    double peak_speed() const {
        double m = 0.0;
        for (const auto& s : samples) m = std::max(m, s.v);
        return m;
    }
};

enum class PhaseKind { Accel, Cruise, Decel };

struct PhaseInterval {
    PhaseKind kind;
    double t_begin;
    double t_end;
};

namespace detail {

inline bool parse_number(const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end != tok.c_str() && *end == '\0' && std::isfinite(out);
}

// Splits on commas, semicolons, tabs or runs of spaces.
inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == ';' || c == '\t' || c == ' ') {
            if (!cur.empty()) { out.push_back(cur); cur.clear(); }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace detail

/// Parses a two-column (time, speed) text stream into a profile, converting
/// speeds from `unit` into m/s. Lines starting with '#' (and blank lines)
/// are ignored; a single leading non-numeric header row is tolerated.
inline SpeedProfile parse_speed_profile(std::istream& in, SpeedUnit unit) {
    SpeedProfile profile;
    profile.source_unit = unit;
    std::string line;
    int row = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++row;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        double t, v;
        if (!detail::parse_number(fields[0], t)) {
            if (header_allowed) { header_allowed = false; continue; }
            throw ParseError("speed profile: unparseable time at row " + std::to_string(row));
        }
        header_allowed = false;
        if (fields.size() < 2 || !detail::parse_number(fields[1], v))
            throw ParseError("speed profile: missing/unparseable speed at row " + std::to_string(row));
        if (v < 0.0)
            throw ParseError("speed profile: negative speed at row " + std::to_string(row));
        if (!profile.samples.empty() && t <= profile.samples.back().t)
            throw ParseError("speed profile: non-monotonic time at row " + std::to_string(row));
        profile.samples.push_back({t, to_mps(v, unit)});
    }
    if (profile.samples.empty())
        throw ParseError("speed profile: empty input");
    if (profile.samples.front().t != 0.0)
        throw ParseError("speed profile: first sample time must be 0");
    return profile;
}

inline SpeedProfile parse_speed_profile(const std::string& text, SpeedUnit unit) {
    std::istringstream in(text);
    return parse_speed_profile(in, unit);
}

/// Two-column text form of a profile (time, speed in m/s), parseable by
/// parse_speed_profile. Round-trips samples to full double precision.
inline std::string format_speed_profile(const SpeedProfile& profile) {
    std::string out = "# time_s speed_mps\n";
    char buf[64];
    for (const auto& s : profile.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", s.t, s.v);
        out += buf;
    }
    return out;
}

/// Linear interpolation between the bracketing samples; exact at samples.
inline double sample_speed(const SpeedProfile& profile, double t) {
    const auto& s = profile.samples;
    if (s.empty() || t < s.front().t || t > s.back().t)
        throw ValidationError("sample_speed: t=" + std::to_string(t) + " outside profile range");
    auto it = std::lower_bound(s.begin(), s.end(), t,
                               [](const SpeedProfile::Sample& a, double tt) { return a.t < tt; });
    if (it->t == t) return it->v;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double w = (t - lo.t) / (hi.t - lo.t);
    return lo.v + w * (hi.v - lo.v);
}

/// Index of the segment whose slope applies at time t: the segment to the
/// right of a sample point, the last segment at the final point.
inline std::size_t segment_index_at(const SpeedProfile& profile, double t) {
    const auto& s = profile.samples;
    if (s.size() < 2 || t < s.front().t || t > s.back().t)
        throw ValidationError("profile slope: t=" + std::to_string(t) + " outside profile range");
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double tt, const SpeedProfile::Sample& a) { return tt < a.t; });
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    if (i == s.size()) i = s.size() - 1;            // final point: left segment
    if (i == 0) i = 1;
    return i - 1;                                   // segment [i-1, i]
}

inline double segment_slope(const SpeedProfile& profile, std::size_t seg) {
    const auto& a = profile.samples[seg];
    const auto& b = profile.samples[seg + 1];
    return (b.v - a.v) / (b.t - a.t);
}

/// dv/dt at time t: the exact slope of the active linear segment.
inline double accel_from_profile(const SpeedProfile& profile, double t) {
    return segment_slope(profile, segment_index_at(profile, t));
}

/// Partition of [0, duration] into acceleration / cruise / deceleration
/// intervals by the sign of each segment's slope. Adjacent segments with
/// the same sign are merged.
inline std::vector<PhaseInterval> phase_split(const SpeedProfile& profile) {
    std::vector<PhaseInterval> phases;
    const auto& s = profile.samples;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        PhaseKind kind = s[i + 1].v > s[i].v   ? PhaseKind::Accel
                         : s[i + 1].v < s[i].v ? PhaseKind::Decel
                                               : PhaseKind::Cruise;
        if (!phases.empty() && phases.back().kind == kind)
            phases.back().t_end = s[i + 1].t;
        else
            phases.push_back({kind, s[i].t, s[i + 1].t});
    }
    return phases;
}

/// Largest positive and negative segment slopes (m/s^2), for limit checks.
inline std::pair<double, double> slope_extremes(const SpeedProfile& profile) {
    double max_up = 0.0, max_down = 0.0;
    for (std::size_t i = 0; i + 1 < profile.samples.size(); ++i) {
        double a = segment_slope(profile, i);
        max_up = std::max(max_up, a);
        max_down = std::min(max_down, a);
    }
    return {max_down, max_up};
}

} // namespace rbsim

#endif
