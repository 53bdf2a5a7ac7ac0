#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gnskit/bounds.hpp"
#include "gnskit/error.hpp"
#include "gnskit/instances.hpp"
#include "oracles.hpp"

using namespace gnskit;

namespace {

Digraph two_disjoint_2cycles() {
    const std::vector<Edge> e{{0, 1}, {1, 0}, {2, 3}, {3, 2}};
    return Digraph(4, e);
}

MUNetwork net_of(const std::string& body) { return parse_network("network\n" + body); }

bool acyclic_subset(const Digraph& g, const VertexSet& set) { return is_acyclic(induced_subgraph(g, set)); }

bool independent(const Digraph& g, const VertexSet& set) {
    for (Vertex u : set)
        for (Vertex v : set)
            if (g.has_edge(u, v)) return false;
    return true;
}

const ReportCheck* find_check(const BoundReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("mais_exact") {
    const Digraph dag(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
    CHECK(mais_exact(dag).value == 3);
    CHECK(mais_exact(directed_cycle(3)).value == 2);
    CHECK(mais_exact(Digraph(0)).value == 0);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const Digraph g = random_digraph(n, 0.1 * static_cast<double>(1 + rng() % 8), rng());
        const MaisResult r = mais_exact(g);
        CHECK(r.value == oracle::mais(g));
        CHECK(r.set.size() == r.value);
        CHECK(acyclic_subset(g, r.set));
    }
    Caps caps;
    caps.mais_vertices = 3;
    CHECK_THROWS_AS(mais_exact(complete_digraph(4), caps), CapacityError);
}

TEST_CASE("alpha_exact") {
    CHECK(alpha_exact(Digraph(6)).value == 6);
    CHECK(alpha_exact(undirected_cycle(5)).value == 2);
    CHECK(alpha_exact(strong_product(undirected_cycle(5), undirected_cycle(5))).value == 5);

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const Digraph g = random_digraph(n, 0.1 * static_cast<double>(1 + rng() % 8), rng());
        const AlphaResult r = alpha_exact(g);
        CHECK(r.value == oracle::alpha(g));
        CHECK(r.set.size() == r.value);
        CHECK(independent(g, r.set));
        CHECK(r.value <= mais_exact(g).value);
    }
}

TEST_CASE("min_fvs_exact") {
    CHECK(min_fvs_exact(Digraph(5)).empty());
    CHECK(min_fvs_exact(directed_cycle(3)) == VertexSet({0}));
    CHECK(min_fvs_exact(two_disjoint_2cycles()).size() == 2);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 9);
        const Digraph g = random_digraph(n, 0.1 * static_cast<double>(1 + rng() % 8), rng());
        const VertexSet fvs = min_fvs_exact(g);
        CHECK(fvs.members() == oracle::min_fvs(g));
        CHECK(is_feedback_vertex_set(g, fvs));
    }
}

TEST_CASE("tensor and Shannon bounds") {
    const Digraph c3 = directed_cycle(3);
    const auto q1 = tensor_bound(c3, 1, 3);
    CHECK(q1.mais == 2);
    CHECK(q1.value == doctest::Approx(1.0));
    const auto q2 = tensor_bound(c3, 2, 3);
    CHECK(q2.mais == 4);
    CHECK(q2.value == 1.0);
    CHECK(q2.value <= 3.0 - 2.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        // a random DAG: orient every edge upward
        const Digraph r = random_digraph(4, 0.5, seed);
        std::vector<Edge> up;
        for (const auto& e : r.edges())
            if (e.from < e.to) up.push_back(e);
        const Digraph dag(4, up);
        for (int q : {1, 2}) {
            const auto b = tensor_bound(dag, q, 10);
            CHECK(b.mais == static_cast<std::size_t>(std::pow(4, q)));
            CHECK(b.value == 6.0);
        }
    }

    CHECK(shannon_capacity_lb(Digraph(3), 1).value == 3.0);
    CHECK(shannon_capacity_lb(Digraph(3), 2).value == 3.0);
    CHECK(shannon_capacity_lb(undirected_cycle(5), 2).value == doctest::Approx(2.2360679775).epsilon(1e-10));
    CHECK(shannon_capacity_lb(undirected_cycle(5), 1).alpha == 2);

    CHECK(tensor_root(4, 2) == 2.0);
    CHECK(tensor_root(27, 3) == 3.0);
    CHECK(tensor_root(5, 2) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("appendix lemmas on random graphs") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const Digraph g = random_digraph(1 + static_cast<int>(rng() % 4), 0.5, rng());
        const Digraph h = random_digraph(1 + static_cast<int>(rng() % 4), 0.5, rng());
        CHECK(mais_exact(strong_product(g, h)).value >= mais_exact(g).value * mais_exact(h).value);
        CHECK(alpha_exact(strong_product(g, complement(g))).value >= static_cast<std::size_t>(g.order()));
        const int k = 1 + static_cast<int>(rng() % 3);
        CHECK(alpha_exact(blowup(g, k)).value == static_cast<std::size_t>(k) * alpha_exact(g).value);
        CHECK(mais_exact(blowup(g, k)).value == static_cast<std::size_t>(k) * mais_exact(g).value);
    }
}

TEST_CASE("bound report on the parallel-links network") {
    const MUNetwork net = net_of("node s\nnode t\nlink s t\nlink s t\npair s t\n");
    ReportOptions opts;
    opts.exact_gns = true;
    const BoundReport r = bound_report(net, opts);
    CHECK(r.m == 4);
    CHECK(r.k == 1);
    CHECK(*r.mais == 2);
    CHECK(*r.rcp == 2);
    CHECK(r.rcp_source == "exact");
    CHECK(r.code->rate() == 2);
    CHECK(r.code->verified);
    CHECK(r.approx->weight() == 2);
    CHECK(r.gns_tilde->size() == 2);
    CHECK(r.skipped.empty());
    CHECK(r.chain_holds());
    for (const auto& c : r.checks) CHECK_MESSAGE(c.holds, c.name);
}

TEST_CASE("bound report on two disjoint unicasts and a single path") {
    const BoundReport two =
        bound_report(net_of("node s1\nnode t1\nnode s2\nnode t2\nlink s1 t1\nlink s2 t2\npair s1 t1\npair s2 t2\n"));
    CHECK(two.m == 4);
    CHECK(*two.mais == 2);
    CHECK(*two.rcp == 2);

    const BoundReport path = bound_report(net_of("node s\nnode a\nnode t\nlink s a\nlink a t\npair s t\n"));
    CHECK(*path.rcp == 1);
    CHECK(path.m - static_cast<int>(*path.mais) == 1);
    CHECK(path.approx->weight() == 1);
}

TEST_CASE("bound report chain on random networks") {
    std::mt19937_64 rng(12);
    int built = 0;
    while (built < 40) {
        DagNetworkParams params;
        params.nodes = 4 + static_cast<int>(rng() % 3);
        params.pairs = 1 + static_cast<int>(rng() % 3);
        params.prob = 0.4;
        MUNetwork net;
        try {
            net = random_dag_network(params, rng());
        } catch (const InputError&) {
            continue;
        }
        ++built;
        ReportOptions opts;
        opts.exact_gns = net.link_count() <= 14;
        opts.qs = {1, 2};
        const BoundReport r = bound_report(net, opts);
        for (const auto& c : r.checks) CHECK_MESSAGE(c.holds, c.name);
        const Digraph g = to_index_graph(net).graph;
        CHECK(*r.mais == oracle::mais(g));
        CHECK(*r.rcp <= r.m - static_cast<long>(*r.mais));
        if (r.gns_tilde) CHECK(r.gns_tilde->size() == static_cast<std::size_t>(r.m) - *r.mais);
        CHECK(find_check(r, "code_rate_eq_m_minus_rcp") != nullptr);
    }
}

TEST_CASE("capacity refusals are recorded, not thrown") {
    const MUNetwork net = net_of("node s\nnode t\nlink s t\nlink s t\npair s t\n");
    ReportOptions opts;
    opts.qs = {1, 3};
    opts.options.caps.product_vertices = 20;
    const BoundReport r = bound_report(net, opts);
    REQUIRE(r.skipped.size() >= 1);
    CHECK(r.skipped.front().component == "tensor_q3");
    CHECK(r.chain_holds());
}

TEST_CASE("report round trip") {
    const MUNetwork butterfly = net_of(
        "node s0\nnode s1\nnode a\nnode b\nnode t0\nnode t1\nlink s0 a\nlink s1 a\nlink a b\nlink b t0\nlink b t1\n"
        "link s0 t1\nlink s1 t0\npair s0 t0\npair s1 t1\n");
    ReportOptions opts;
    opts.qs = {1, 2};
    opts.exact_gns = true;
    const BoundReport r = bound_report(butterfly, opts);
    const std::string text = render_report_machine(r);
    const BoundReport back = parse_report(text);
    CHECK(back == r);
    CHECK(render_report_machine(back) == text);
    CHECK(parse_report(text).chain_holds());

    const std::string human = render_report_human(r);
    for (const char* key : {"mais:", "rcp:", "approx:", "checks:", "summary:"}) CHECK(human.find(key) != std::string::npos);

    CHECK_THROWS_AS(parse_report("report:\n  m: x\n"), InputError);
    CHECK_THROWS_AS(parse_report(""), InputError);
}
