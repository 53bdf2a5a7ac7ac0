#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gnskit/bounds.hpp"
#include "gnskit/cyclepack.hpp"
#include "gnskit/error.hpp"
#include "gnskit/instances.hpp"
#include "gnskit/simplex.hpp"
#include "oracles.hpp"

using namespace gnskit;

namespace {

MUNetwork net_of(const std::string& body) { return parse_network("network\n" + body); }

MUNetwork parallel_links() { return net_of("node s\nnode t\nlink s t\nlink s t\npair s t\n"); }

Digraph two_triangles(bool shared) {
    // shared: 0-1-2 and 0-3-4; otherwise 0-1-2 and 3-4-5
    if (shared) return Digraph(5, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}});
    return Digraph(6, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
}

/// Vertex lengths of the vertex-split metric (arc v is v_in -> v_out).
std::vector<Rational> vertex_lengths(const Digraph& g, const SpreadingMetric& metric) {
    return {metric.lengths.begin(), metric.lengths.begin() + g.order()};
}

std::vector<MUNetwork> corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<MUNetwork> nets;
    while (nets.size() < count) {
        DagNetworkParams params;
        params.nodes = 3 + static_cast<int>(rng() % 4);
        params.prob = 0.3 + 0.1 * static_cast<double>(rng() % 4);
        params.parallel = (rng() % 3 == 0) ? 0.25 : 0.0;
        params.pairs = 1 + static_cast<int>(rng() % 3);
        try {
            MUNetwork net = random_dag_network(params, rng());
            enumerate_simple_cycles(to_index_graph(net).graph, Caps{}.rcp_cycles);
            nets.push_back(std::move(net));
        } catch (const InputError&) {
        } catch (const CapacityError&) {
        }
    }
    return nets;
}

}  // namespace

TEST_CASE("exact simplex") {
    // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6
    const std::vector<SparseColumn> cols{{{0, 1}, {1, 3}}, {{0, 2}, {1, 1}}};
    const auto lp = maximize_exact(2, cols, {1, 1}, {4, 6});
    CHECK(lp.objective == Rational(14, 5));
    CHECK(lp.primal[0] == Rational(8, 5));
    CHECK(lp.primal[1] == Rational(6, 5));
    CHECK(lp.dual[0] == Rational(2, 5));
    CHECK(lp.dual[1] == Rational(1, 5));
    CHECK_THROWS_AS(maximize_exact(1, cols, {1, 1}, {4, 6}), InputError);
}

TEST_CASE("rcp_exact") {
    CHECK(rcp_exact(Digraph(4)).value == 0);
    const CyclePacking disjoint = rcp_exact(two_triangles(false));
    CHECK(disjoint.value == 2);
    CHECK(disjoint.assignments.size() == 2);
    for (const auto& [c, w] : disjoint.assignments) CHECK(w == 1);
    CHECK(rcp_exact(two_triangles(true)).value == 1);
    CHECK(rcp_exact(complete_digraph(3)).value == Rational(3, 2));

    SUBCASE("optimal by certificate") {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 150; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 7);
            const Digraph g = random_digraph(n, 0.15 + 0.1 * static_cast<double>(rng() % 5), rng());
            const CyclePacking p = rcp_exact(g);
            CHECK(is_valid_packing(g, p));
            const SpreadingMetric metric = solve_spreading_metric(vertex_split_network(g));
            CHECK(metric.objective == p.value);
            CHECK(oracle::packing_is_optimal(g, p.assignments, vertex_lengths(g, metric)));
            CHECK(p.value <= static_cast<long>(g.order() - oracle::mais(g)));
        }
    }
    SUBCASE("invalid packings are rejected") {
        CyclePacking bad;
        bad.assignments[{0, 1, 2}] = Rational(3, 2);
        bad.value = Rational(3, 2);
        CHECK_FALSE(is_valid_packing(directed_cycle(3), bad));
        CyclePacking not_a_cycle;
        not_a_cycle.assignments[{0, 2, 1}] = 1;
        not_a_cycle.value = 1;
        CHECK_FALSE(is_valid_packing(directed_cycle(3), not_a_cycle));
    }
    SUBCASE("capacity") {
        Caps caps;
        caps.rcp_cycles = 3;
        CHECK_THROWS_AS(rcp_exact(complete_digraph(4), caps), CapacityError);
    }
}

TEST_CASE("spreading metric") {
    SUBCASE("acyclic terminal network") {
        // every MU network has a cycle in G', so build the terminal network directly
        TerminalNetwork tn;
        tn.node_names = {"x", "y"};
        tn.arcs = {TerminalArc{0, 1, 1, true, {}}};
        tn.terminals = {0};
        const SpreadingMetric m = solve_spreading_metric(tn);
        CHECK(m.objective == 0);
        for (const auto& l : m.lengths) CHECK(l == 0);
    }
    SUBCASE("single 2-cycle") {
        const SpreadingMetric m = solve_spreading_metric(prime_network(net_of("node s\nnode t\nlink s t\npair s t\n")));
        CHECK(m.objective == 1);
        CHECK(metric_is_feasible(prime_network(net_of("node s\nnode t\nlink s t\npair s t\n")), m.lengths));
    }
    SUBCASE("parallel links") {
        const TerminalNetwork tn = prime_network(parallel_links());
        CHECK(tn.arcs.size() == 2);  // merged s->t with capacity 2, and t->s with capacity 2
        const SpreadingMetric m = solve_spreading_metric(tn);
        CHECK(m.objective == 2);
        CHECK(m.objective == rcp_exact(to_index_graph(parallel_links()).graph).value);
    }
    SUBCASE("equals rcp on random networks") {
        for (const auto& net : corpus(60, 31)) {
            const TerminalNetwork tn = prime_network(net);
            Options options;
            options.threads = 2;
            const SpreadingMetric m = solve_spreading_metric(tn, options);
            CHECK(m.objective == rcp_exact(to_index_graph(net).graph).value);
            CHECK(metric_is_feasible(tn, m.lengths));
        }
    }
    SUBCASE("uncuttable cycles are input errors") {
        TerminalNetwork tn;
        tn.node_names = {"x", "y"};
        tn.arcs = {TerminalArc{0, 1, 1, false, {}}, TerminalArc{1, 0, 1, false, {}}};
        tn.terminals = {0};
        CHECK_THROWS_AS(solve_spreading_metric(tn), InputError);
    }
}

TEST_CASE("subset_fes_approx") {
    SUBCASE("single pair single path") {
        const MUNetwork net = net_of("node s\nnode a\nnode t\nlink s a\nlink a t\npair s t\n");
        const FesApprox fes = subset_fes_approx(net);
        CHECK(fes.weight == 1);
        CHECK(is_feedback_edge_set(net, fes.links));
    }
    SUBCASE("parallel links") {
        const FesApprox fes = subset_fes_approx(parallel_links());
        CHECK(fes.weight == 2);
        REQUIRE(fes.ratio);
        CHECK(*fes.ratio == 1.0);
        const VertexSet fvs = fes_to_fvs(parallel_links(), fes.links);
        CHECK(fvs.size() == 2);
        CHECK(fvs.size() == 4 - oracle::mais(to_index_graph(parallel_links()).graph));
    }
    SUBCASE("random networks") {
        double worst = 0;
        for (const auto& net : corpus(80, 77)) {
            const FesApprox fes = subset_fes_approx(net);
            CHECK(is_feedback_edge_set(net, fes.links));
            const Digraph g = to_index_graph(net).graph;
            const Rational rcp = rcp_exact(g).value;
            CHECK(fes.objective == rcp);
            CHECK(fes.weight >= static_cast<std::size_t>(g.order()) - mais_exact(g).value);
            CHECK(within_regression_bound(fes.weight, net.pair_count(), rcp));
            if (fes.ratio) worst = std::max(worst, *fes.ratio);
            // parallel links between the same nodes are cut all-or-none
            std::map<std::pair<int, int>, int> cut_count, total_count;
            for (LinkId e = 0; e < net.link_count(); ++e) {
                const auto key = std::make_pair(prime_tail(net, e), net.link(e).head);
                ++total_count[key];
                if (std::binary_search(fes.links.begin(), fes.links.end(), e)) ++cut_count[key];
            }
            for (const auto& [key, c] : cut_count) CHECK((c == 0 || c == total_count[key]));
        }
        MESSAGE("worst approximation ratio " << worst);
    }
}

TEST_CASE("fes_to_fvs") {
    const MUNetwork single = net_of("node s\nnode t\nlink s t\npair s t\n");
    CHECK(fes_to_fvs(single, {0}).size() == 1);
    CHECK_THROWS_AS(fes_to_fvs(single, {}), ContractError);
    CHECK(fes_to_fvs(single, {0, 1}).size() == 2);
}

TEST_CASE("regression bound") {
    CHECK(within_regression_bound(0, 1, 0));
    CHECK(within_regression_bound(2, 1, 2));
    CHECK_FALSE(within_regression_bound(100, 1, 2, 8.0));
    CHECK(within_regression_bound(100, 1, 2, 200.0));
}
