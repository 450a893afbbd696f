#ifndef RBSIM_NETWORK_SOLVER_HPP
#define RBSIM_NETWORK_SOLVER_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "rbsim/errors.hpp"
#include "rbsim/rail_network.hpp"
#include "rbsim/substation.hpp"

namespace rbsim {

struct SolverOptions {
    double tolerance = 0.01;      // A, max nodal current mismatch
    int max_iterations = 200;
    bool strict_disconnect = false;  // overvoltage disconnects the train instead of chopping
    double voltage_floor = 1.0;      // V, below this the load flow has collapsed
};

/// Network-side view of one train's chopper: the averaged (duty-cycled)
/// model of the onboard hysteresis switch. Below the release voltage the
/// resistor is out; across the hysteresis band the duty ramps 0 -> 1; above
/// the activation voltage it conducts fully. `resistance` is the effective
/// resistance seen at the train node (the per-motor bank divided by the
/// motor count).
struct ChopperSetting {
    double v_activate = 780.0;   // V
    double v_release = 760.0;    // V
    double resistance = 0.05;    // ohm, effective at the DC node

    double duty(double v) const {
        if (v <= v_release) return 0.0;
        if (v >= v_activate) return 1.0;
        return (v - v_release) / (v_activate - v_release);
    }
    /// Average current drawn at bus voltage v (A).
    double current(double v) const { return duty(v) * v / resistance; }
    /// d(current)/dV, the companion-model conductance (S).
    double conductance(double v) const {
        if (v <= v_release) return 0.0;
        if (v >= v_activate) return 1.0 / resistance;
        return (2.0 * v - v_release) / (resistance * (v_activate - v_release));
    }
};

struct SolveResult {
    std::vector<double> node_voltages;       // V per graph node
    std::vector<double> substation_currents; // A per substation, >= 0 with diode
    std::vector<double> train_currents;      // A per train at its terminals (P/V, + = drawing)
    std::vector<double> chopper_powers;      // W per train, >= 0
    std::vector<double> train_powers;        // W per train, the solved injections (input copy)
    double residual = 0.0;                   // A, final max mismatch
    int iterations = 0;
    double rail_loss_power = 0.0;            // W in the rail branches
    double substation_loss_power = 0.0;      // W in the Thevenin resistances
};

/// Quasi-static DC load flow over one corridor snapshot.
///
/// Constant-power train branches are handled by successive linearization
/// (current-source iteration I = P/V), substation diodes by an active set
/// (a blocked substation is removed and re-checked), and the braking
/// choppers by their averaged duty characteristic stamped as a companion
/// conductance, so a regenerating train's node settles onto the chopper
/// curve whenever the rail cannot take the power. Converged when the
/// largest nodal current mismatch drops below `opts.tolerance` with a
/// stable diode set.
class NetworkSolver {
public:
    static SolveResult solve(const NetworkGraph& graph, const std::vector<double>& train_powers,
                             const std::vector<SubstationParams>& substations,
                             const std::vector<ChopperSetting>& choppers,
                             const SolverOptions& opts = {},
                             const std::vector<double>* warm_start = nullptr) {
        const int n_nodes = static_cast<int>(graph.nodes.size());
        const int n_trains = static_cast<int>(train_powers.size());
        const int n_subs = static_cast<int>(substations.size());
        if (static_cast<int>(graph.train_node.size()) != n_trains ||
            static_cast<int>(graph.substation_node.size()) != n_subs)
            throw ValidationError("solve: graph does not match train/substation counts");
        if (static_cast<int>(choppers.size()) != n_trains)
            throw ValidationError("solve: need one chopper setting per train");
        if (opts.tolerance <= 0.0) throw ValidationError("solve: tolerance must be > 0");
        for (const auto& s : substations) s.validate();

        std::vector<double> node_power(n_nodes, 0.0);  // W drawn at node (trains + aux)
        std::vector<char> node_has_regen(n_nodes, 0);
        for (int i = 0; i < n_trains; ++i) {
            node_power[graph.train_node[i]] += train_powers[i];
            if (train_powers[i] < 0.0) node_has_regen[graph.train_node[i]] = 1;
        }
        for (int j = 0; j < n_subs; ++j)
            node_power[graph.substation_node[j]] += substations[j].aux_load;

        double v_ref = 0.0;  // starting guess / idle voltage
        for (const auto& s : substations) v_ref = std::max(v_ref, s.no_load_voltage);
        if (v_ref <= 0.0) v_ref = 1.0;

        Eigen::VectorXd v(n_nodes);
        if (warm_start && static_cast<int>(warm_start->size()) == n_nodes)
            for (int n = 0; n < n_nodes; ++n) v[n] = std::max((*warm_start)[n], opts.voltage_floor);
        else
            v.setConstant(v_ref);

        std::vector<char> sub_active(n_subs, 1);
        std::vector<char> disconnected(n_nodes, 0);  // strict_disconnect latch
        // strict mode reads the overvoltage protection as a hard disconnect:
        // no averaged chopper on the rail side, the train dumps onboard
        const bool network_chopper = !opts.strict_disconnect;

        Eigen::MatrixXd g_matrix(n_nodes, n_nodes);
        Eigen::VectorXd rhs(n_nodes);

        double residual = std::numeric_limits<double>::infinity();
        int iter = 0;
        for (; iter < opts.max_iterations; ++iter) {
            // a fully blocked network needs some anchor: when every diode is
            // off and no chopper conducts at the current iterate, nudge the
            // most regenerative node into its chopper band (or fail if there
            // is nothing that could absorb the load)
            if (!any(sub_active) &&
                (!network_chopper || !any_chopper_conducting(graph, choppers, disconnected, v))) {
                double net_load = 0.0;
                for (int n = 0; n < n_nodes; ++n)
                    net_load += effective_node_power(n, node_power, disconnected);
                if (net_load > 0.0) {
                    // net consumption with every diode latched off can only
                    // mean the iterate is stale; voltage must fall until the
                    // substations conduct again
                    std::fill(sub_active.begin(), sub_active.end(), 1);
                    continue;
                }
                int worst = -1;
                double most_regen = 0.0;
                for (int i = 0; i < n_trains; ++i) {
                    const int n = graph.train_node[i];
                    if (disconnected[n]) continue;
                    if (train_powers[i] < most_regen) {
                        most_regen = train_powers[i];
                        worst = i;
                    }
                }
                if (worst >= 0 && !network_chopper) {
                    disconnected[graph.train_node[worst]] = 1;
                    continue;
                } else if (worst >= 0) {
                    // start the node just inside its chopper band; the knee
                    // capture below keeps the iterate from tunnelling out
                    const auto& ch = choppers[worst];
                    v[graph.train_node[worst]] =
                        std::max(v[graph.train_node[worst]],
                                 ch.v_release + 0.1 * (ch.v_activate - ch.v_release));
                } else {
                    bool all_idle = true;
                    for (int n = 0; n < n_nodes; ++n)
                        all_idle = all_idle &&
                                   effective_node_power(n, node_power, disconnected) == 0.0;
                    if (all_idle) {
                        v.setConstant(v_ref);
                        residual = 0.0;
                        break;
                    }
                    throw SolveError("solve: no source can supply the remaining load", residual);
                }
            }

            g_matrix.setZero();
            rhs.setZero();
            for (const auto& br : graph.branches) {
                const double g = 1.0 / br.loop_resistance();
                g_matrix(br.a, br.a) += g;
                g_matrix(br.b, br.b) += g;
                g_matrix(br.a, br.b) -= g;
                g_matrix(br.b, br.a) -= g;
            }
            for (int j = 0; j < n_subs; ++j) {
                if (!sub_active[j]) continue;
                const int n = graph.substation_node[j];
                g_matrix(n, n) += 1.0 / substations[j].internal_resistance;
                rhs[n] += substations[j].no_load_voltage / substations[j].internal_resistance;
            }
            for (int n = 0; n < n_nodes; ++n) {
                const double p = effective_node_power(n, node_power, disconnected);
                if (p != 0.0) rhs[n] -= p / std::max(v[n], opts.voltage_floor);
            }
            if (network_chopper) {
                for (int i = 0; i < n_trains; ++i) {
                    const int n = graph.train_node[i];
                    if (disconnected[n]) continue;
                    const double g_ch = choppers[i].conductance(v[n]);
                    if (g_ch > 0.0) {
                        g_matrix(n, n) += g_ch;
                        rhs[n] += g_ch * v[n] - choppers[i].current(v[n]);
                    }
                }
            }

            const Eigen::VectorXd v_old = v;
            v = g_matrix.partialPivLu().solve(rhs);
            if (!v.allFinite())
                throw SolveError("solve: linear stage produced non-finite voltages", residual);

            // knee capture for the chopper curve: a Newton step that jumps
            // across the conduction knee oscillates forever (the linearized
            // conductance flips between 0 and ~1e3 S), so a downward crossing
            // slides geometrically onto the knee instead. Once the duty is
            // negligible the crossing is free and the node settles below.
            for (int i = 0; i < n_trains && network_chopper; ++i) {
                const int n = graph.train_node[i];
                if (disconnected[n]) continue;
                const double knee = choppers[i].v_release;
                if (v_old[n] > knee && v[n] < knee && choppers[i].duty(v_old[n]) > 1e-12)
                    v[n] = 0.5 * (v_old[n] + knee);
                else if (v_old[n] <= knee && v[n] > knee)
                    v[n] = std::min(v[n], choppers[i].v_activate);
            }

            // collapse check: a constant-power load below the floor cannot be served
            for (int n = 0; n < n_nodes; ++n) {
                if (v[n] < opts.voltage_floor &&
                    effective_node_power(n, node_power, disconnected) > 0.0)
                    throw InfeasibleError(
                        "solve: voltage collapse at node " + std::to_string(n) + " (train " +
                            std::to_string(first_train_at(graph, n)) +
                            "): load exceeds network capability",
                        first_train_at(graph, n));
            }

            bool set_changed = false;

            // diode complementarity, with a tolerance-scaled dead band
            // against boundary cycling
            for (int j = 0; j < n_subs; ++j) {
                const int n = graph.substation_node[j];
                if (!substations[j].diode) continue;
                if (sub_active[j]) {
                    const double i = (substations[j].no_load_voltage - v[n]) /
                                     substations[j].internal_resistance;
                    if (i < -opts.tolerance) {
                        sub_active[j] = 0;
                        set_changed = true;
                    }
                } else if (v[n] < substations[j].no_load_voltage -
                                      opts.tolerance * substations[j].internal_resistance) {
                    sub_active[j] = 1;
                    set_changed = true;
                }
            }

            // strict mode: overvoltage latches a full disconnect of the node
            if (opts.strict_disconnect) {
                for (int i = 0; i < n_trains; ++i) {
                    const int n = graph.train_node[i];
                    if (!disconnected[n] && node_has_regen[n] &&
                        v[n] > choppers[i].v_activate + 1e-12) {
                        disconnected[n] = 1;
                        set_changed = true;
                    }
                }
            }

            residual = max_mismatch(graph, substations, sub_active, disconnected, choppers,
                                    network_chopper, node_power, v, opts);
            if (!set_changed && residual < opts.tolerance) {
                ++iter;
                break;
            }
        }
        if (residual >= opts.tolerance) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "solve: no convergence after %d iterations (residual %.3e A)", iter,
                          residual);
            throw SolveError(buf, residual);
        }

        return finalize(graph, train_powers, substations, sub_active, disconnected, choppers,
                        network_chopper, v, residual, iter, opts);
    }

private:
    static bool any(const std::vector<char>& flags) {
        for (char f : flags)
            if (f) return true;
        return false;
    }

    static bool any_chopper_conducting(const NetworkGraph& graph,
                                       const std::vector<ChopperSetting>& choppers,
                                       const std::vector<char>& disconnected,
                                       const Eigen::VectorXd& v) {
        for (std::size_t i = 0; i < choppers.size(); ++i) {
            const int n = graph.train_node[i];
            if (!disconnected[n] && choppers[i].conductance(v[n]) > 0.0) return true;
        }
        return false;
    }

    static double effective_node_power(int n, const std::vector<double>& node_power,
                                       const std::vector<char>& disconnected) {
        // a disconnected node no longer exchanges train power with the rail
        return disconnected[n] ? 0.0 : node_power[n];
    }

    static int first_train_at(const NetworkGraph& graph, int node) {
        for (std::size_t i = 0; i < graph.train_node.size(); ++i)
            if (graph.train_node[i] == node) return static_cast<int>(i);
        return -1;
    }

    static double max_mismatch(const NetworkGraph& graph,
                               const std::vector<SubstationParams>& substations,
                               const std::vector<char>& sub_active,
                               const std::vector<char>& disconnected,
                               const std::vector<ChopperSetting>& choppers, bool network_chopper,
                               const std::vector<double>& node_power, const Eigen::VectorXd& v,
                               const SolverOptions& opts) {
        const int n_nodes = static_cast<int>(graph.nodes.size());
        std::vector<double> mismatch(n_nodes, 0.0);
        for (const auto& br : graph.branches) {
            const double i = (v[br.a] - v[br.b]) / br.loop_resistance();
            mismatch[br.a] -= i;
            mismatch[br.b] += i;
        }
        for (std::size_t j = 0; j < substations.size(); ++j) {
            if (!sub_active[j]) continue;
            const int n = graph.substation_node[j];
            mismatch[n] += (substations[j].no_load_voltage - v[n]) /
                           substations[j].internal_resistance;
        }
        for (int n = 0; n < n_nodes; ++n) {
            const double p = effective_node_power(n, node_power, disconnected);
            if (p != 0.0) mismatch[n] -= p / std::max(v[n], opts.voltage_floor);
        }
        for (std::size_t i = 0; network_chopper && i < choppers.size(); ++i) {
            const int n = graph.train_node[i];
            if (!disconnected[n]) mismatch[n] -= choppers[i].current(v[n]);
        }
        double worst = 0.0;
        for (int n = 0; n < n_nodes; ++n) worst = std::max(worst, std::abs(mismatch[n]));
        return worst;
    }

    static SolveResult finalize(const NetworkGraph& graph, const std::vector<double>& train_powers,
                                const std::vector<SubstationParams>& substations,
                                const std::vector<char>& sub_active,
                                const std::vector<char>& disconnected,
                                const std::vector<ChopperSetting>& choppers, bool network_chopper,
                                const Eigen::VectorXd& v, double residual, int iterations,
                                const SolverOptions& opts) {
        SolveResult out;
        out.residual = residual;
        out.iterations = iterations;
        out.train_powers = train_powers;
        out.node_voltages.assign(v.data(), v.data() + v.size());

        out.substation_currents.resize(substations.size(), 0.0);
        for (std::size_t j = 0; j < substations.size(); ++j) {
            if (!sub_active[j]) continue;
            const int n = graph.substation_node[j];
            const double i = (substations[j].no_load_voltage - v[n]) /
                             substations[j].internal_resistance;
            out.substation_currents[j] = substations[j].diode ? std::max(i, 0.0) : i;
            out.substation_loss_power += i * i * substations[j].internal_resistance;
        }

        for (const auto& br : graph.branches) {
            const double dv = v[br.a] - v[br.b];
            out.rail_loss_power += dv * dv / br.loop_resistance();
        }

        const int n_nodes = static_cast<int>(graph.nodes.size());
        std::vector<double> node_regen(n_nodes, 0.0);
        for (std::size_t i = 0; i < train_powers.size(); ++i)
            if (train_powers[i] < 0.0) node_regen[graph.train_node[i]] += -train_powers[i];

        out.train_currents.resize(train_powers.size(), 0.0);
        out.chopper_powers.resize(train_powers.size(), 0.0);
        for (std::size_t i = 0; i < train_powers.size(); ++i) {
            const int n = graph.train_node[i];
            const double vn = std::max(v[n], opts.voltage_floor);
            out.train_currents[i] = train_powers[i] / vn;
            if (disconnected[n]) {
                // onboard bank takes the train's own braking power in full
                if (train_powers[i] < 0.0) out.chopper_powers[i] = -train_powers[i];
            } else if (network_chopper) {
                out.chopper_powers[i] = vn * choppers[i].current(vn);
            }
        }
        return out;
    }
};

inline SolveResult solve(const NetworkGraph& graph, const std::vector<double>& train_powers,
                         const std::vector<SubstationParams>& substations,
                         const std::vector<ChopperSetting>& choppers, const SolverOptions& opts = {},
                         const std::vector<double>* warm_start = nullptr) {
    return NetworkSolver::solve(graph, train_powers, substations, choppers, opts, warm_start);
}

/// How a regenerating train's braking power divided: returned to the rail
/// vs dissipated in its own chopper. Sums to |power|.
struct ReceptivitySplit {
    double to_network;  // W
    double to_chopper;  // W
};

inline ReceptivitySplit receptivity_split(const SolveResult& result, int train_index) {
    if (train_index < 0 || train_index >= static_cast<int>(result.train_powers.size()))
        throw ValidationError("receptivity_split: train index out of range");
    const double p = result.train_powers[train_index];
    if (p >= 0.0)
        throw ValidationError("receptivity_split: train " + std::to_string(train_index) +
                              " is not regenerating");
    const double to_chopper = std::min(result.chopper_powers[train_index], -p);
    return {-p - to_chopper, to_chopper};
}

} // namespace rbsim

#endif
