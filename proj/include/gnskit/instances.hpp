#pragma once

#include <cstdint>

#include "gnskit/config.hpp"
#include "gnskit/digraph.hpp"
#include "gnskit/indexcoding.hpp"
#include "gnskit/network.hpp"

namespace gnskit {

struct LSParams {
    int r = 1;  // ground set [r]
    int s = 1;  // subset size
    Residue p = 2;
    int b = 1;  // adjacency when |X & Y| = -1 mod p^b
    bool complemented = false;
};

/// Symmetric digraph on the s-subsets of [r] in colexicographic order,
/// labelled "{x,y,...}". CapacityError when C(r, s) > caps.ls_vertices.
Digraph lubetzky_stav(const LSParams& params, const Caps& caps = {});

/// Pair (s_i, t_i) per vertex, link s_i -> t_j per edge (i, j), and the
/// bottleneck a -> b fed by every s_i and feeding every t_i.
MUNetwork network_from_side_info_graph(const Digraph& g);

/// Checks that every adjacent transposition of the ground set maps edges
/// onto edges and that the group they generate is transitive on the
/// vertices. InputError when the subset labels are missing or malformed.
bool is_vertex_transitive_under_ground_permutations(const Digraph& g);

/// Edge (u, v), u != v, independently with probability `prob`.
Digraph random_digraph(int n, double prob, std::uint64_t seed);

struct DagNetworkParams {
    int nodes = 6;
    double prob = 0.4;      // link i -> j for i < j
    double parallel = 0.0;  // chance that a link gets a parallel twin
    int pairs = 2;
    int max_retries = 100;
};

/// Random DAG on v0..v{n-1} with distinct reachable pairs. InputError when
/// no draw within max_retries has enough reachable pairs.
MUNetwork random_dag_network(const DagNetworkParams& params, std::uint64_t seed);

}  // namespace gnskit
