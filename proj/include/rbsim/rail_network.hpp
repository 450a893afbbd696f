#ifndef RBSIM_RAIL_NETWORK_HPP
#define RBSIM_RAIL_NETWORK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "rbsim/errors.hpp"

namespace rbsim {

/// Static geometry and per-unit electrical data of one corridor.
struct TrackLayout {
    std::vector<double> station_positions;     // m, strictly increasing
    std::vector<double> substation_positions;  // m
    double r_power_per_m = 10e-6;    // ohm/m, third rail
    double r_traction_per_m = 20e-6; // ohm/m, running-rail return
    double extent_min = 0.0;         // m
    double extent_max = 0.0;         // m

    void validate() const {
        if (!(extent_min < extent_max))
            throw ValidationError("layout: extent must be a nonempty interval");
        if (r_power_per_m <= 0.0 || r_traction_per_m <= 0.0)
            throw ValidationError("layout: per-unit rail resistances must be > 0");
        for (std::size_t i = 0; i + 1 < station_positions.size(); ++i)
            if (!(station_positions[i] < station_positions[i + 1]))
                throw ValidationError("layout: station positions must be strictly increasing");
        auto inside = [&](double p) { return p >= extent_min && p <= extent_max; };
        for (double p : station_positions)
            if (!inside(p)) throw ValidationError("layout: station outside extent");
        for (double p : substation_positions)
            if (!inside(p)) throw ValidationError("layout: substation outside extent");
    }

    bool contains(double position) const {
        return position >= extent_min && position <= extent_max;
    }
};

enum class NodeKind { Substation, Train, Junction };

/// Electrical graph for one snapshot of train positions. Node voltages are
/// the power-rail-to-traction-rail (train terminal) potentials; each branch
/// carries the power-rail and traction-rail resistance of one rail span, in
/// series around the current loop.
struct NetworkGraph {
    struct Node {
        NodeKind kind;
        double position;  // m
    };
    struct Branch {
        int a;
        int b;
        double r_power;     // ohm
        double r_traction;  // ohm
        double loop_resistance() const { return r_power + r_traction; }
    };

    std::vector<Node> nodes;
    std::vector<Branch> branches;
    std::vector<int> train_node;       // per train index -> node index (-1 if unused)
    std::vector<int> substation_node;  // per substation index -> node index
};

// Positions closer than this are one electrical node.
inline constexpr double kNodeMergeEpsilon = 1e-3;  // m

/// Builds the corridor chain for one track: nodes are the substations and
/// the given trains sorted by position, coincident positions merged, and
/// consecutive nodes joined by one branch with resistance = span length x
/// per-unit value (the generalized per-section form; the literal two-train
/// section equations fall out as a special case).
inline NetworkGraph build_graph(const TrackLayout& layout,
                                const std::vector<double>& train_positions) {
    layout.validate();
    for (std::size_t i = 0; i < train_positions.size(); ++i)
        if (!layout.contains(train_positions[i]))
            throw PlacementError("train " + std::to_string(i) + " at " +
                                 std::to_string(train_positions[i]) + " m is outside the layout");

    struct Entry {
        double pos;
        bool is_train;
        int index;
    };
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < layout.substation_positions.size(); ++j)
        entries.push_back({layout.substation_positions[j], false, static_cast<int>(j)});
    for (std::size_t i = 0; i < train_positions.size(); ++i)
        entries.push_back({train_positions[i], true, static_cast<int>(i)});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& x, const Entry& y) { return x.pos < y.pos; });

    NetworkGraph g;
    g.train_node.assign(train_positions.size(), -1);
    g.substation_node.assign(layout.substation_positions.size(), -1);
    for (const Entry& e : entries) {
        bool merged = !g.nodes.empty() &&
                      std::abs(g.nodes.back().position - e.pos) <= kNodeMergeEpsilon;
        if (!merged) {
            g.nodes.push_back({e.is_train ? NodeKind::Train : NodeKind::Substation, e.pos});
        } else if (g.nodes.back().kind != (e.is_train ? NodeKind::Train : NodeKind::Substation)) {
            g.nodes.back().kind = NodeKind::Junction;  // hosts both kinds
        }
        const int node = static_cast<int>(g.nodes.size()) - 1;
        (e.is_train ? g.train_node[e.index] : g.substation_node[e.index]) = node;
    }
    for (int n = 0; n + 1 < static_cast<int>(g.nodes.size()); ++n) {
        const double span = g.nodes[n + 1].position - g.nodes[n].position;
        g.branches.push_back(
            {n, n + 1, span * layout.r_power_per_m, span * layout.r_traction_per_m});
    }
    return g;
}

/// Series power+traction rail resistance along the (unique, on a chain)
/// path between two nodes.
inline double loop_resistance(const NetworkGraph& g, int node_a, int node_b) {
    const int n = static_cast<int>(g.nodes.size());
    if (node_a < 0 || node_a >= n || node_b < 0 || node_b >= n)
        throw ValidationError("loop_resistance: node index out of range");
    if (node_a == node_b) return 0.0;

    // BFS with path cost; branch lists are tiny so adjacency is rebuilt ad hoc
    std::vector<double> cost(n, -1.0);
    std::deque<int> queue{node_a};
    cost[node_a] = 0.0;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        if (cur == node_b) return cost[cur];
        for (const auto& br : g.branches) {
            int other = br.a == cur ? br.b : br.b == cur ? br.a : -1;
            if (other >= 0 && cost[other] < 0.0) {
                cost[other] = cost[cur] + br.loop_resistance();
                queue.push_back(other);
            }
        }
    }
    throw ValidationError("loop_resistance: nodes are not connected");
}

/// Combined network for trains on both tracks: one shared set of substation
/// nodes, one chain of branches per direction. Train node indices follow
/// the order of `train_positions`; `direction_of[i]` selects the chain.
inline NetworkGraph build_combined_graph(const TrackLayout& layout,
                                         const std::vector<double>& train_positions,
                                         const std::vector<int>& direction_of,
                                         int n_directions = 2) {
    if (direction_of.size() != train_positions.size())
        throw ValidationError("build_combined_graph: direction list mismatch");

    // single-direction corridors collapse to the plain chain
    bool single = true;
    for (int d : direction_of) single = single && d == (direction_of.empty() ? 0 : direction_of[0]);
    if (single || train_positions.empty()) return build_graph(layout, train_positions);

    NetworkGraph combined;
    combined.train_node.assign(train_positions.size(), -1);
    for (int dir = 0; dir < n_directions; ++dir) {
        std::vector<double> positions;
        std::vector<int> original_index;
        for (std::size_t i = 0; i < train_positions.size(); ++i) {
            if (direction_of[i] == dir) {
                positions.push_back(train_positions[i]);
                original_index.push_back(static_cast<int>(i));
            }
        }
        NetworkGraph chain = build_graph(layout, positions);
        // splice the chain into the combined graph, sharing substation nodes
        std::vector<int> remap(chain.nodes.size(), -1);
        for (std::size_t j = 0; j < chain.substation_node.size(); ++j) {
            const int cn = chain.substation_node[j];
            if (dir == 0) combined.substation_node.push_back(-1);  // filled below
            if (combined.substation_node[j] < 0) {
                if (remap[cn] < 0) {  // substations merged in-chain share one node
                    combined.nodes.push_back(chain.nodes[cn]);
                    remap[cn] = static_cast<int>(combined.nodes.size()) - 1;
                }
                combined.substation_node[j] = remap[cn];
            }
            remap[cn] = combined.substation_node[j];
        }
        for (std::size_t c = 0; c < chain.nodes.size(); ++c) {
            if (remap[c] >= 0) continue;
            combined.nodes.push_back(chain.nodes[c]);
            remap[c] = static_cast<int>(combined.nodes.size()) - 1;
        }
        for (std::size_t i = 0; i < positions.size(); ++i)
            combined.train_node[original_index[i]] = remap[chain.train_node[i]];
        for (const auto& br : chain.branches)
            combined.branches.push_back({remap[br.a], remap[br.b], br.r_power, br.r_traction});
    }
    return combined;
}

} // namespace rbsim

#endif
