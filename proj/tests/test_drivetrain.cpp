#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rbsim/drivetrain.hpp"

using namespace rbsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("gearbox hand examples") {
    VehicleParams p;  // gamma 6.64, eta 0.96
    SECTION("motoring 1000 N*m") {
        auto m = wheel_to_motor(1000.0, 40.0, p);
        CHECK_THAT(m.loss_torque, WithinAbs(40.0, 1e-12));
        CHECK_THAT(m.torque, WithinAbs(1040.0 / 6.64, 1e-12));
        CHECK_THAT(m.torque, WithinAbs(156.627, 1e-3));
        CHECK_THAT(m.omega, WithinAbs(40.0 * 6.64, 1e-12));
    }
    SECTION("braking -1000 N*m recovers less") {
        auto m = wheel_to_motor(-1000.0, 40.0, p);
        CHECK_THAT(m.loss_torque, WithinAbs(40.0, 1e-12));
        CHECK_THAT(m.torque, WithinAbs(-960.0 / 6.64, 1e-12));
        CHECK_THAT(m.torque, WithinAbs(-144.578, 1e-3));
    }
    SECTION("zero torque") {
        auto m = wheel_to_motor(0.0, 10.0, p);
        CHECK(m.torque == 0.0);
        CHECK(m.loss_torque == 0.0);
    }
}

TEST_CASE("motor count is four per car") {
    VehicleParams p;
    CHECK(motor_count(p) == 40);
    p.n_cars = 1;
    CHECK(motor_count(p) == 4);
    p.n_cars = 8;
    CHECK(motor_count(p) == 32);
}

TEST_CASE("gearbox losses always dissipate") {
    VehicleParams p;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dT(-5000.0, 5000.0), dw(0.1, 80.0);
    for (int i = 0; i < 300; ++i) {
        double tw = dT(rng), ww = dw(rng);
        auto m = wheel_to_motor(tw, ww, p);
        double wheel_power = tw * ww;
        double motor_power = m.torque * m.omega;
        if (tw > 0.0) CHECK(motor_power > wheel_power);           // motoring draws extra
        if (tw < 0.0) CHECK(std::abs(motor_power) < std::abs(wheel_power));  // braking returns less
        if (tw == 0.0) CHECK(motor_power == 0.0);
    }
}

TEST_CASE("ideal gearbox is lossless and exact") {
    VehicleParams p;
    p.gearbox_efficiency = 1.0;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dT(-5000.0, 5000.0);
    for (int i = 0; i < 100; ++i) {
        double tw = dT(rng);
        auto m = wheel_to_motor(tw, 10.0, p);
        CHECK_THAT(m.torque, WithinRel(tw / p.gear_ratio, 1e-15));
        CHECK(m.loss_torque == 0.0);
    }
}

TEST_CASE("loss asymmetry: braking magnitude never exceeds motoring") {
    VehicleParams p;
    for (double tw : {1.0, 10.0, 500.0, 4196.43}) {
        auto fwd = wheel_to_motor(tw, 10.0, p);
        auto rev = wheel_to_motor(-tw, 10.0, p);
        CHECK(std::abs(rev.torque) < std::abs(fwd.torque));
    }
    auto z = wheel_to_motor(0.0, 10.0, p);
    CHECK(std::abs(z.torque) == 0.0);
    p.gearbox_efficiency = 1.0;
    auto sym = wheel_to_motor(123.0, 10.0, p);
    auto sym_rev = wheel_to_motor(-123.0, 10.0, p);
    CHECK_THAT(std::abs(sym_rev.torque), WithinRel(std::abs(sym.torque), 1e-15));
}
