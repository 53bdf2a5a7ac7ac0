#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnskit/config.hpp"
#include "gnskit/digraph.hpp"
#include "gnskit/network.hpp"
#include "gnskit/rational.hpp"

namespace gnskit {

/// Fractional cycle packing: canonical cycle -> positive weight.
struct CyclePacking {
    std::map<Cycle, Rational> assignments;
    Rational value;

    bool operator==(const CyclePacking&) const = default;
};

/// Simple-cycle keys, non-negative weights, vertex loads <= 1 and the
/// stored value, all checked exactly.
bool is_valid_packing(const Digraph& g, const CyclePacking& packing);

/// Optimal fractional packing by exact simplex over all simple cycles.
/// CapacityError when g has more than caps.rcp_cycles cycles.
CyclePacking rcp_exact(const Digraph& g, const Caps& caps = {});

/// Directed multigraph with capacities and a terminal set; every cycle is
/// expected to pass through a terminal. Parallel links are merged into one
/// arc whose capacity is their count.
struct TerminalArc {
    int tail = 0;
    int head = 0;
    Rational capacity = 1;
    bool cuttable = true;         // uncuttable arcs keep length 0
    std::vector<LinkId> links;    // network links represented by the arc
};

struct TerminalNetwork {
    std::vector<std::string> node_names;
    std::vector<TerminalArc> arcs;  // no two with the same (tail, head)
    std::vector<int> terminals;     // sorted

    int node_count() const { return static_cast<int>(node_names.size()); }
};

/// G' of the network (source links of pair i run t_i -> s_i), arcs sorted
/// by (tail, head); terminals are the source nodes.
TerminalNetwork prime_network(const MUNetwork& net);

/// Arc v is v_in -> v_out (capacity 1), followed by an uncuttable
/// u_out -> v_in arc per edge; terminals are the v_out nodes. Its packing
/// LP is the cycle packing LP of g.
TerminalNetwork vertex_split_network(const Digraph& g);

struct SpreadingMetric {
    std::vector<Rational> lengths;  // per arc
    Rational objective;             // sum of capacity * length
    /// Dual certificate: arc cycles with weights, loads <= capacity.
    std::vector<std::pair<std::vector<int>, Rational>> packing;
    std::size_t constraints = 0;    // generated cycles
    std::size_t rounds = 0;
};

/// Fractional subset feedback edge set by constraint generation; the
/// objective is certified equal to the value of the dual packing.
SpreadingMetric solve_spreading_metric(const TerminalNetwork& tn, const Options& options = {});

/// True iff every cycle through a terminal has length >= 1.
bool metric_is_feasible(const TerminalNetwork& tn, const std::vector<Rational>& lengths);

struct TerminalCut {
    std::string terminal;
    Rational radius;
    std::size_t cut_weight = 0;
};

struct FesApprox {
    std::vector<LinkId> links;   // sorted, a feedback edge set of G'
    std::size_t weight = 0;
    Rational objective;          // spreading-metric value (= r_CP of G)
    std::optional<double> ratio; // weight / objective
    std::vector<TerminalCut> steps;
    bool used_fallback = false;
};

/// Sphere growing on the spreading metric of G', followed by a
/// minimality pass; validity is re-checked and a greedy cut takes over if
/// it ever fails.
FesApprox subset_fes_approx(const MUNetwork& net, const Options& options = {});

/// The vertices of to_index_graph(net) for the given links; ContractError
/// if `fes` is not a feedback edge set of G'.
VertexSet fes_to_fvs(const MUNetwork& net, const std::vector<LinkId>& fes);

/// weight <= constant * ln^2(k + 1) * rcp.
bool within_regression_bound(std::size_t weight, int k, const Rational& rcp, double constant = 8.0);

}  // namespace gnskit
