#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "rbsim/speed_profile.hpp"

using namespace rbsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("parse: identity conversion for m/s input") {
    auto p = parse_speed_profile("0,0\n10,20", SpeedUnit::MetersPerSecond);
    REQUIRE(p.samples.size() == 2);
    CHECK(p.samples[0].t == 0.0);
    CHECK(p.samples[0].v == 0.0);
    CHECK(p.samples[1].t == 10.0);
    CHECK(p.samples[1].v == 20.0);
    CHECK(p.source_unit == SpeedUnit::MetersPerSecond);
}

TEST_CASE("parse: mph converts by 0.44704 exactly") {
    auto p = parse_speed_profile("0,0\n10,44.704", SpeedUnit::MilesPerHour);
    CHECK_THAT(p.samples[1].v, WithinRel(44.704 * 0.44704, 1e-15));
}

TEST_CASE("parse: km/h conversion") {
    auto p = parse_speed_profile("0,0\n10,36", SpeedUnit::KilometersPerHour);
    CHECK_THAT(p.samples[1].v, WithinRel(10.0, 1e-12));
}

TEST_CASE("parse: error cases name the offending row") {
    CHECK_THROWS_WITH(parse_speed_profile("0,0\n5,10\n5,12", SpeedUnit::MetersPerSecond),
                      Catch::Matchers::ContainsSubstring("row 3"));
    CHECK_THROWS_AS(parse_speed_profile("0,0\n5,-1", SpeedUnit::MetersPerSecond), ParseError);
    CHECK_THROWS_AS(parse_speed_profile("", SpeedUnit::MetersPerSecond), ParseError);
    CHECK_THROWS_AS(parse_speed_profile("   \n# only comments\n", SpeedUnit::MetersPerSecond),
                    ParseError);
    CHECK_THROWS_AS(parse_speed_profile("1,0\n5,10", SpeedUnit::MetersPerSecond), ParseError);
}

TEST_CASE("parse: header row, comments and mixed delimiters are tolerated") {
    auto p = parse_speed_profile("time,speed\n# comment\n0 0\n5\t12.5\n10;20\n",
                                 SpeedUnit::MetersPerSecond);
    REQUIRE(p.samples.size() == 3);
    CHECK(p.samples[1].v == 12.5);
}

TEST_CASE("sample_speed: interpolation and edges") {
    auto p = parse_speed_profile("0,0\n10,20\n20,20", SpeedUnit::MetersPerSecond);
    CHECK_THAT(sample_speed(p, 5.0), WithinAbs(10.0, 1e-12));   // midpoint of ramp
    CHECK_THAT(sample_speed(p, 10.0), WithinAbs(20.0, 1e-12));  // exact at sample
    CHECK_THAT(sample_speed(p, 15.0), WithinAbs(20.0, 1e-12));  // constant segment
    CHECK_THAT(sample_speed(p, 0.0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(sample_speed(p, 20.0), WithinAbs(20.0, 1e-12));
    CHECK_THROWS_AS(sample_speed(p, -0.1), ValidationError);
    CHECK_THROWS_AS(sample_speed(p, 20.1), ValidationError);
}

TEST_CASE("accel_from_profile: segment slopes, one-sided at samples") {
    auto up = parse_speed_profile("0,0\n10,20", SpeedUnit::MetersPerSecond);
    CHECK_THAT(accel_from_profile(up, 5.0), WithinAbs(2.0, 1e-12));

    auto flat = parse_speed_profile("0,15\n10,15", SpeedUnit::MetersPerSecond);
    CHECK(accel_from_profile(flat, 5.0) == 0.0);

    auto down = parse_speed_profile("0,20\n10,0", SpeedUnit::MetersPerSecond);
    CHECK_THAT(accel_from_profile(down, 5.0), WithinAbs(-2.0, 1e-12));

    auto tri = parse_speed_profile("0,0\n10,20\n20,0", SpeedUnit::MetersPerSecond);
    CHECK_THAT(accel_from_profile(tri, 10.0), WithinAbs(-2.0, 1e-12));  // right segment
    CHECK_THAT(accel_from_profile(tri, 20.0), WithinAbs(-2.0, 1e-12));  // final: left segment
    CHECK_THAT(accel_from_profile(tri, 0.0), WithinAbs(2.0, 1e-12));
}

TEST_CASE("round-trip: format then parse reproduces samples to 12 digits") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dv(0.0, 35.0);
    std::uniform_real_distribution<double> dt(0.01, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        SpeedProfile p;
        double t = 0.0;
        for (int i = 0; i < 20; ++i) {
            p.samples.push_back({t, dv(rng)});
            t += dt(rng);
        }
        auto q = parse_speed_profile(format_speed_profile(p), SpeedUnit::MetersPerSecond);
        REQUIRE(q.samples.size() == p.samples.size());
        for (std::size_t i = 0; i < p.samples.size(); ++i) {
            CHECK_THAT(q.samples[i].t, WithinRel(p.samples[i].t, 1e-12));
            if (p.samples[i].v != 0.0)
                CHECK_THAT(q.samples[i].v, WithinRel(p.samples[i].v, 1e-12));
            else
                CHECK(q.samples[i].v == 0.0);
        }
    }
}

TEST_CASE("unit conversion is linear in the speeds") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dv(0.0, 60.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double k = 3.5;
        std::ostringstream base, scaled;
        base.precision(17);
        scaled.precision(17);
        double t = 0.0;
        for (int i = 0; i < 8; ++i) {
            double v = dv(rng);
            base << t << "," << v << "\n";
            scaled << t << "," << k * v << "\n";
            t += 5.0;
        }
        auto pb = parse_speed_profile(base.str(), SpeedUnit::MilesPerHour);
        auto ps = parse_speed_profile(scaled.str(), SpeedUnit::MilesPerHour);
        for (std::size_t i = 0; i < pb.samples.size(); ++i)
            CHECK_THAT(ps.samples[i].v, WithinRel(k * pb.samples[i].v, 1e-12));
    }
}

TEST_CASE("phase_split: trapezoid gives one interval of each kind") {
    auto p = parse_speed_profile("0,0\n30,15\n90,15\n120,0", SpeedUnit::MetersPerSecond);
    auto phases = phase_split(p);
    REQUIRE(phases.size() == 3);
    CHECK(phases[0].kind == PhaseKind::Accel);
    CHECK(phases[0].t_begin == 0.0);
    CHECK(phases[0].t_end == 30.0);
    CHECK(phases[1].kind == PhaseKind::Cruise);
    CHECK(phases[2].kind == PhaseKind::Decel);
    CHECK(phases[2].t_end == 120.0);
}

TEST_CASE("phase_split: monotone ramp is a single accel interval") {
    auto p = parse_speed_profile("0,0\n10,5\n30,20", SpeedUnit::MetersPerSecond);
    auto phases = phase_split(p);
    REQUIRE(phases.size() == 1);
    CHECK(phases[0].kind == PhaseKind::Accel);
    CHECK(phases[0].t_begin == 0.0);
    CHECK(phases[0].t_end == 30.0);
}

TEST_CASE("phase_split: multi-ramp profile partitions the time axis") {
    auto p = parse_speed_profile("0,0\n20,16\n55,16\n72,0\n80,0\n100,12\n130,12\n142,0",
                                 SpeedUnit::MetersPerSecond);
    auto phases = phase_split(p);
    REQUIRE(phases.size() >= 4);
    CHECK(phases.front().t_begin == 0.0);
    CHECK(phases.back().t_end == 142.0);
    for (std::size_t i = 0; i + 1 < phases.size(); ++i) {
        CHECK(phases[i].t_end == phases[i + 1].t_begin);   // disjoint, contiguous
        CHECK(phases[i].kind != phases[i + 1].kind);       // maximal intervals
    }
}
