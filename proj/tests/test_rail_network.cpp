#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rbsim/rail_network.hpp"

using namespace rbsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
TrackLayout corridor() {
    TrackLayout l;
    l.extent_min = 0.0;
    l.extent_max = 3000.0;
    l.station_positions = {0.0, 1500.0, 3000.0};
    l.substation_positions = {0.0, 1500.0, 3000.0};  // electrical ties at the stations
    l.r_power_per_m = 10e-6;
    l.r_traction_per_m = 20e-6;
    return l;
}
}

TEST_CASE("branch resistances are span length times per-unit values") {
    auto layout = corridor();
    SECTION("train at the west node: zero west branch") {
        auto g = build_graph(layout, {0.0});  // merges with substation at 0
        // merged node: first branch starts at the shared node
        CHECK(g.nodes.size() == 3);
        CHECK(g.train_node[0] == g.substation_node[0]);
    }
    SECTION("train 500 m east of the west node") {
        auto g = build_graph(layout, {500.0});
        REQUIRE(g.nodes.size() == 4);
        CHECK_THAT(g.branches[0].r_power, WithinRel(0.005, 1e-12));     // (p - x1) * R_Ppu
        CHECK_THAT(g.branches[0].r_traction, WithinRel(0.010, 1e-12));  // (p - x1) * R_Tpu
        CHECK_THAT(g.branches[1].r_power, WithinRel(0.010, 1e-12));     // (x2 - p) * R_Ppu
    }
    SECTION("two trains in one section: three spans telescope") {
        auto g = build_graph(layout, {400.0, 900.0});
        REQUIRE(g.nodes.size() == 5);
        double sum = 0.0;
        for (const auto& br : g.branches)
            if (g.nodes[br.b].position <= 1500.0 + 1e-9) sum += br.r_power;
        CHECK_THAT(sum, WithinRel(1500.0 * layout.r_power_per_m, 1e-12));
    }
}

TEST_CASE("literal section equations: two westbound trains") {
    // stations at x_p1 < x_p2 < x_p3; train 1 in section 1, train 2 in
    // section 2; the eight per-section resistances fall out of the chain
    auto layout = corridor();
    const double p1 = 600.0, p2 = 2100.0;
    auto g = build_graph(layout, {p1, p2});
    REQUIRE(g.nodes.size() == 5);
    const double rp = layout.r_power_per_m, rt = layout.r_traction_per_m;
    // R_WP1 / R_WT1: west of train 1 back to station 1
    CHECK_THAT(g.branches[0].r_power, WithinRel((p1 - 0.0) * rp, 1e-12));
    CHECK_THAT(g.branches[0].r_traction, WithinRel((p1 - 0.0) * rt, 1e-12));
    // R_EP1 / R_ET1: east of train 1 up to station 2
    CHECK_THAT(g.branches[1].r_power, WithinRel((1500.0 - p1) * rp, 1e-12));
    CHECK_THAT(g.branches[1].r_traction, WithinRel((1500.0 - p1) * rt, 1e-12));
    // R_WP2 / R_WT2: west of train 2 back to station 2
    CHECK_THAT(g.branches[2].r_power, WithinRel((p2 - 1500.0) * rp, 1e-12));
    CHECK_THAT(g.branches[2].r_traction, WithinRel((p2 - 1500.0) * rt, 1e-12));
    // R_EP2 / R_ET2: east of train 2 up to station 3
    CHECK_THAT(g.branches[3].r_power, WithinRel((3000.0 - p2) * rp, 1e-12));
    CHECK_THAT(g.branches[3].r_traction, WithinRel((3000.0 - p2) * rt, 1e-12));
}

TEST_CASE("telescoping invariant over random positions") {
    auto layout = corridor();
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dp(1.0, 1499.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double p = dp(rng);
        auto g = build_graph(layout, {p});
        CHECK_THAT(g.branches[0].r_power + g.branches[1].r_power,
                   WithinRel(1500.0 * layout.r_power_per_m, 1e-12));
        CHECK_THAT(g.branches[0].r_traction + g.branches[1].r_traction,
                   WithinRel(1500.0 * layout.r_traction_per_m, 1e-12));
    }
}

TEST_CASE("moving a train shifts adjacent branch resistances linearly") {
    auto layout = corridor();
    const double p = 700.0, delta = 13.5;
    auto g0 = build_graph(layout, {p});
    auto g1 = build_graph(layout, {p + delta});
    CHECK_THAT(g1.branches[0].r_power - g0.branches[0].r_power,
               WithinRel(delta * layout.r_power_per_m, 1e-9));
    CHECK_THAT(g1.branches[1].r_power - g0.branches[1].r_power,
               WithinRel(-delta * layout.r_power_per_m, 1e-9));
}

TEST_CASE("node counting and coincident-train merging") {
    auto layout = corridor();
    auto g = build_graph(layout, {100.0, 200.0, 700.0});
    CHECK(g.nodes.size() == 3 + 3);  // trains + substations, all distinct
    auto merged = build_graph(layout, {100.0, 100.0, 700.0});
    CHECK(merged.nodes.size() == 2 + 3);
    CHECK(merged.train_node[0] == merged.train_node[1]);
}

TEST_CASE("placement outside the extent is rejected") {
    auto layout = corridor();
    CHECK_THROWS_AS(build_graph(layout, {-5.0}), PlacementError);
    CHECK_THROWS_AS(build_graph(layout, {3200.0}), PlacementError);
}

TEST_CASE("loop resistance along the chain") {
    auto layout = corridor();
    layout.substation_positions = {0.0, 1000.0};
    auto g = build_graph(layout, {});
    CHECK(loop_resistance(g, 0, 0) == 0.0);
    CHECK_THAT(loop_resistance(g, 0, 1), WithinRel(0.03, 1e-12));  // 1000*(10+20) uOhm/m
    CHECK_THAT(loop_resistance(g, 1, 0), WithinRel(loop_resistance(g, 0, 1), 1e-15));
}

TEST_CASE("combined graph shares substations across directions") {
    auto layout = corridor();
    // two eastbound (dir 1) and one westbound (dir 0) train
    std::vector<double> positions{400.0, 900.0, 2200.0};
    std::vector<int> directions{1, 1, 0};
    auto g = build_combined_graph(layout, positions, directions);
    CHECK(g.nodes.size() == 3 + 3);  // 3 substations shared + 3 trains
    // substation nodes appear in branches of both chains
    int sub_mid = g.substation_node[1];
    int touching = 0;
    for (const auto& br : g.branches)
        if (br.a == sub_mid || br.b == sub_mid) ++touching;
    CHECK(touching >= 3);  // two spans on the eastbound chain + westbound chain

    // single direction collapses to the plain chain
    auto single = build_combined_graph(layout, {400.0, 900.0}, {1, 1});
    CHECK(single.branches.size() == single.nodes.size() - 1);
}

TEST_CASE("layout validation") {
    TrackLayout l;
    l.extent_min = 0.0;
    l.extent_max = -1.0;
    CHECK_THROWS_AS(l.validate(), ValidationError);
    l = corridor();
    l.station_positions = {10.0, 10.0};
    CHECK_THROWS_AS(l.validate(), ValidationError);
    l = corridor();
    l.r_power_per_m = 0.0;
    CHECK_THROWS_AS(l.validate(), ValidationError);
    l = corridor();
    l.substation_positions = {9999.0};
    CHECK_THROWS_AS(l.validate(), ValidationError);
}
