#include <catch2/catch_amalgamated.hpp>

#include "rbsim/substation.hpp"

using namespace rbsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("thevenin current with ideal diode") {
    SubstationParams p{0.0, 650.0, 0.05, 0.0, true};
    CHECK(substation_current(650.0, p) == 0.0);                       // zero drop
    CHECK_THAT(substation_current(600.0, p), WithinAbs(1000.0, 1e-9));
    CHECK(substation_current(700.0, p) == 0.0);                       // diode blocks
}

TEST_CASE("current is continuous, non-increasing, zero above V0") {
    SubstationParams p{0.0, 650.0, 0.05, 0.0, true};
    double prev = substation_current(0.0, p);
    for (double v = 1.0; v <= 900.0; v += 1.0) {
        double i = substation_current(v, p);
        CHECK(i <= prev + 1e-12);
        CHECK(i >= 0.0);
        CHECK(v * i >= 0.0);  // power never flows back in
        if (v >= 650.0) CHECK(i == 0.0);
        prev = i;
    }
    // continuity across the diode knee
    CHECK_THAT(substation_current(650.0 - 1e-9, p), WithinAbs(0.0, 1e-6));
}

TEST_CASE("twelve pulse no-load relation") {
    CHECK_THAT(twelve_pulse_no_load(481.3), WithinAbs(650.0, 0.05));
    CHECK_THAT(twelve_pulse_no_load(2.0 * 481.3), WithinRel(2.0 * twelve_pulse_no_load(481.3), 1e-15));
    CHECK_THROWS_AS(twelve_pulse_no_load(0.0), ValidationError);
    CHECK_THROWS_AS(twelve_pulse_no_load(-10.0), ValidationError);
}

TEST_CASE("parameter validation") {
    SubstationParams p;
    p.internal_resistance = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = SubstationParams{};
    p.aux_load = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
