#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rbsim/vehicle_dynamics.hpp"

using namespace rbsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
VehicleParams table_defaults() { return VehicleParams{}; }
}

TEST_CASE("resistive forces at 20 m/s with reference parameters") {
    auto p = table_defaults();
    auto r = resistive_forces(20.0, p);
    CHECK_THAT(r.rolling, WithinAbs(7455.6, 1e-9));   // 0.002*380000*9.81
    CHECK(r.grade == 0.0);                            // sin 0
    CHECK_THAT(r.aero, WithinAbs(1102.5, 1e-9));      // 0.5*0.5*9*1.225*400
}

TEST_CASE("aero force vanishes at standstill") {
    auto r = resistive_forces(0.0, table_defaults());
    CHECK(r.aero == 0.0);
}

TEST_CASE("tractive effort hand examples") {
    auto p = table_defaults();
    SECTION("accelerating at 1 m/s^2, 20 m/s") {
        auto f = tractive_effort(1.0, 20.0, p);
        CHECK_THAT(f.tractive, WithinAbs(388558.1, 1e-6));
    }
    SECTION("holding still") {
        auto f = tractive_effort(0.0, 0.0, p);
        CHECK_THAT(f.tractive, WithinAbs(7455.6, 1e-9));
    }
    SECTION("braking at -1.2 m/s^2, 10 m/s") {
        auto f = tractive_effort(-1.2, 10.0, p);
        CHECK_THAT(f.tractive, WithinAbs(-448268.775, 1e-6));
        CHECK_THAT(f.aero, WithinAbs(275.625, 1e-9));
    }
}

TEST_CASE("axle torque and speed") {
    auto p = table_defaults();
    auto a = axle_torque_speed(388558.1, 20.0, p);
    CHECK_THAT(a.torque, WithinAbs(388558.1 * 0.432 / 40.0, 1e-12));
    CHECK_THAT(a.torque, WithinAbs(4196.43, 1e-2));
    CHECK_THAT(a.omega, WithinAbs(20.0 / 0.432, 1e-12));
    CHECK_THAT(a.omega, WithinAbs(46.2963, 1e-4));
    CHECK(axle_torque_speed(0.0, 5.0, p).torque == 0.0);
    CHECK(axle_torque_speed(1000.0, 0.0, p).omega == 0.0);
}

TEST_CASE("equation consistency: accel recovered from forces to 1e-12") {
    auto p = table_defaults();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> da(-1.5, 1.5), dv(0.0, 30.0);
    for (int i = 0; i < 200; ++i) {
        double accel = da(rng), v = dv(rng);
        auto f = tractive_effort(accel, v, p);
        double back = (f.tractive - f.rolling - f.grade - f.aero) / p.total_mass();
        CHECK_THAT(back, WithinAbs(accel, 1e-12 * std::max(1.0, std::abs(accel))));
    }
}

TEST_CASE("monotonicity of aero in speed and tractive effort in accel") {
    auto p = table_defaults();
    double prev_aero = resistive_forces(0.5, p).aero;
    for (double v = 1.0; v <= 40.0; v += 0.5) {
        double aero = resistive_forces(v, p).aero;
        CHECK(aero > prev_aero);
        prev_aero = aero;
    }
    double prev_ft = tractive_effort(-2.0, 12.0, p).tractive;
    for (double a = -1.9; a <= 2.0; a += 0.1) {
        double ft = tractive_effort(a, 12.0, p).tractive;
        CHECK(ft > prev_ft);
        prev_ft = ft;
    }
}

TEST_CASE("wheel power identity: 4*n*T_w*w_w == F_T*v") {
    auto p = table_defaults();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> da(-1.5, 1.5), dv(0.1, 30.0);
    for (int i = 0; i < 200; ++i) {
        double accel = da(rng), v = dv(rng);
        auto f = tractive_effort(accel, v, p);
        auto ax = axle_torque_speed(f.tractive, v, p);
        double wheel_power = 4.0 * p.n_cars * ax.torque * ax.omega;
        CHECK_THAT(wheel_power, WithinRel(f.tractive * v, 1e-12));
    }
}

TEST_CASE("grade force follows the slope angle") {
    auto p = table_defaults();
    p.slope_angle = 0.01;  // ~1% climb
    auto r = resistive_forces(10.0, p);
    CHECK_THAT(r.grade, WithinRel(p.total_mass() * 9.81 * std::sin(0.01), 1e-12));
    CHECK(r.rolling < 7455.6);  // cos(theta) < 1
}

TEST_CASE("acceleration limit check flags out-of-limit profiles") {
    auto p = table_defaults();  // limits -1.34112 .. +1.56464 m/s^2
    auto ok = parse_speed_profile("0,0\n20,20", SpeedUnit::MetersPerSecond);   // 1.0
    CHECK(check_accel_limits(ok, p).empty());
    auto hot = parse_speed_profile("0,0\n10,20", SpeedUnit::MetersPerSecond);  // 2.0
    CHECK_FALSE(check_accel_limits(hot, p).empty());
    auto hard_brake = parse_speed_profile("0,20\n10,0", SpeedUnit::MetersPerSecond);  // -2.0
    CHECK_FALSE(check_accel_limits(hard_brake, p).empty());
}

TEST_CASE("table acceleration limits are the converted mph/s values") {
    auto p = table_defaults();
    CHECK_THAT(p.accel_min, WithinAbs(-1.34112, 1e-12));
    CHECK_THAT(p.accel_max, WithinAbs(1.56464, 1e-12));
}

TEST_CASE("parameter validation rejects nonsense") {
    auto p = table_defaults();
    p.n_cars = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = table_defaults();
    p.gearbox_efficiency = 1.2;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = table_defaults();
    p.torque_min = 100.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
