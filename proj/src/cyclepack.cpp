#include "gnskit/cyclepack.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "gnskit/error.hpp"
#include "gnskit/parallel.hpp"
#include "gnskit/simplex.hpp"

namespace gnskit {

bool is_valid_packing(const Digraph& g, const CyclePacking& packing) {
    std::vector<Rational> load(static_cast<std::size_t>(g.order()), Rational(0));
    Rational total = 0;
    for (const auto& [cycle, weight] : packing.assignments) {
        if (cycle.size() < 2 || sgn(weight) < 0) return false;
        if (*std::min_element(cycle.begin(), cycle.end()) != cycle.front()) return false;
        std::set<Vertex> seen;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            const Vertex v = cycle[i];
            if (v < 0 || v >= g.order() || !seen.insert(v).second) return false;
            if (!g.has_edge(v, cycle[(i + 1) % cycle.size()])) return false;
            load[static_cast<std::size_t>(v)] += weight;
        }
        total += weight;
    }
    for (const auto& l : load)
        if (l > 1) return false;
    return total == packing.value;
}

CyclePacking rcp_exact(const Digraph& g, const Caps& caps) {
    std::vector<Cycle> cycles;
    try {
        cycles = enumerate_simple_cycles(g, caps.rcp_cycles);
    } catch (const CapacityError&) {
        throw CapacityError("rcp_cycles", caps.rcp_cycles,
                            "exact cycle packing needs every simple cycle; use the spreading-metric path instead");
    }
    // rows only for vertices that lie on some cycle
    std::vector<int> row_of(static_cast<std::size_t>(g.order()), -1);
    int rows = 0;
    for (const auto& c : cycles)
        for (Vertex v : c)
            if (row_of[static_cast<std::size_t>(v)] < 0) row_of[static_cast<std::size_t>(v)] = rows++;
    std::vector<SparseColumn> columns;
    for (const auto& c : cycles) {
        SparseColumn col;
        for (Vertex v : c) col.emplace_back(row_of[static_cast<std::size_t>(v)], Rational(1));
        columns.push_back(std::move(col));
    }
    const auto lp = maximize_exact(rows, columns, std::vector<Rational>(cycles.size(), Rational(1)),
                                   std::vector<Rational>(static_cast<std::size_t>(rows), Rational(1)));
    CyclePacking packing;
    packing.value = lp.objective;
    for (std::size_t j = 0; j < cycles.size(); ++j)
        if (sgn(lp.primal[j]) > 0) packing.assignments.emplace(cycles[j], lp.primal[j]);
    if (!is_valid_packing(g, packing)) throw InvariantError("simplex returned an infeasible cycle packing");
    return packing;
}

TerminalNetwork prime_network(const MUNetwork& net) {
    TerminalNetwork tn;
    tn.node_names = net.node_names();
    std::map<std::pair<int, int>, std::vector<LinkId>> groups;
    for (LinkId e = 0; e < net.link_count(); ++e) groups[{prime_tail(net, e), net.link(e).head}].push_back(e);
    for (auto& [ends, links] : groups)
        tn.arcs.push_back({ends.first, ends.second, Rational(static_cast<long>(links.size())), true, std::move(links)});
    for (const auto& pair : net.pairs()) tn.terminals.push_back(pair.source);
    std::sort(tn.terminals.begin(), tn.terminals.end());
    tn.terminals.erase(std::unique(tn.terminals.begin(), tn.terminals.end()), tn.terminals.end());
    return tn;
}

TerminalNetwork vertex_split_network(const Digraph& g) {
    TerminalNetwork tn;
    for (Vertex v = 0; v < g.order(); ++v) {
        tn.node_names.push_back(g.label(v) + ".in");
        tn.node_names.push_back(g.label(v) + ".out");
    }
    for (Vertex v = 0; v < g.order(); ++v) {
        tn.arcs.push_back({2 * v, 2 * v + 1, Rational(1), true, {v}});
        tn.terminals.push_back(2 * v + 1);
    }
    for (const auto& [u, v] : g.edges()) tn.arcs.push_back({2 * u + 1, 2 * v, Rational(1), false, {}});
    return tn;
}

namespace {

void validate(const TerminalNetwork& tn) {
    const int n = tn.node_count();
    std::set<std::pair<int, int>> ends;
    for (const auto& a : tn.arcs) {
        if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n) throw InputError("arc endpoint out of range");
        if (a.tail == a.head) throw InputError("self-loop arc in terminal network");
        if (sgn(a.capacity) <= 0) throw InputError("arc capacity must be positive");
        if (!ends.insert({a.tail, a.head}).second) throw InputError("parallel arcs must be merged");
    }
    for (int t : tn.terminals)
        if (t < 0 || t >= n) throw InputError("terminal out of range");
}

struct ShortestPaths {
    std::vector<std::optional<Rational>> dist;
    std::vector<int> parent_arc;
};

/// Dijkstra from `source` over the live arcs; arcs entering `source` are
/// ignored, so every reached node carries a path that starts at source and
/// never returns to it.
ShortestPaths dijkstra(const TerminalNetwork& tn, const std::vector<std::vector<int>>& out_arcs,
                       const std::vector<Rational>& lengths, const std::vector<char>& live, int source) {
    const std::size_t n = static_cast<std::size_t>(tn.node_count());
    ShortestPaths sp{std::vector<std::optional<Rational>>(n), std::vector<int>(n, -1)};
    std::set<std::pair<Rational, int>> queue;
    sp.dist[static_cast<std::size_t>(source)] = Rational(0);
    queue.insert({Rational(0), source});
    std::vector<char> done(n, 0);
    while (!queue.empty()) {
        const auto [d, u] = *queue.begin();
        queue.erase(queue.begin());
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        for (int a : out_arcs[static_cast<std::size_t>(u)]) {
            if (!live[static_cast<std::size_t>(a)]) continue;
            const int v = tn.arcs[static_cast<std::size_t>(a)].head;
            if (v == source || done[static_cast<std::size_t>(v)]) continue;
            Rational candidate = d + lengths[static_cast<std::size_t>(a)];
            auto& dv = sp.dist[static_cast<std::size_t>(v)];
            if (!dv || candidate < *dv) {
                if (dv) queue.erase({*dv, v});
                dv = candidate;
                sp.parent_arc[static_cast<std::size_t>(v)] = a;
                queue.insert({std::move(candidate), v});
            }
        }
    }
    return sp;
}

std::vector<std::vector<int>> out_lists(const TerminalNetwork& tn) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(tn.node_count()));
    for (std::size_t a = 0; a < tn.arcs.size(); ++a) out[static_cast<std::size_t>(tn.arcs[a].tail)].push_back(static_cast<int>(a));
    return out;
}

std::vector<std::vector<int>> in_lists(const TerminalNetwork& tn) {
    std::vector<std::vector<int>> in(static_cast<std::size_t>(tn.node_count()));
    for (std::size_t a = 0; a < tn.arcs.size(); ++a) in[static_cast<std::size_t>(tn.arcs[a].head)].push_back(static_cast<int>(a));
    return in;
}

/// Shortest closed walk through s: its length and arcs (a simple cycle).
std::optional<std::pair<Rational, std::vector<int>>> shortest_cycle_through(
    const TerminalNetwork& tn, const std::vector<std::vector<int>>& out_arcs, const std::vector<std::vector<int>>& in_arcs,
    const std::vector<Rational>& lengths, const std::vector<char>& live, int s) {
    const auto sp = dijkstra(tn, out_arcs, lengths, live, s);
    std::optional<Rational> best;
    int closing = -1;
    for (int a : in_arcs[static_cast<std::size_t>(s)]) {
        if (!live[static_cast<std::size_t>(a)]) continue;
        const auto& du = sp.dist[static_cast<std::size_t>(tn.arcs[static_cast<std::size_t>(a)].tail)];
        if (!du) continue;
        Rational total = *du + lengths[static_cast<std::size_t>(a)];
        if (!best || total < *best) {
            best = total;
            closing = a;
        }
    }
    if (!best) return std::nullopt;
    std::vector<int> arcs{closing};
    for (int v = tn.arcs[static_cast<std::size_t>(closing)].tail; v != s;) {
        const int a = sp.parent_arc[static_cast<std::size_t>(v)];
        arcs.push_back(a);
        v = tn.arcs[static_cast<std::size_t>(a)].tail;
    }
    std::reverse(arcs.begin(), arcs.end());
    return std::make_pair(*best, std::move(arcs));
}

std::vector<int> canonical_rotation(std::vector<int> arcs) {
    std::rotate(arcs.begin(), std::min_element(arcs.begin(), arcs.end()), arcs.end());
    return arcs;
}

}  // namespace

bool metric_is_feasible(const TerminalNetwork& tn, const std::vector<Rational>& lengths) {
    validate(tn);
    if (lengths.size() != tn.arcs.size()) throw InputError("length vector does not match arc count");
    const auto out = out_lists(tn);
    const auto in = in_lists(tn);
    const std::vector<char> live(tn.arcs.size(), 1);
    for (int s : tn.terminals) {
        const auto cycle = shortest_cycle_through(tn, out, in, lengths, live, s);
        if (cycle && cycle->first < 1) return false;
    }
    return true;
}

SpreadingMetric solve_spreading_metric(const TerminalNetwork& tn, const Options& options) {
    validate(tn);
    const auto out = out_lists(tn);
    const auto in = in_lists(tn);
    const std::vector<char> live(tn.arcs.size(), 1);
    std::vector<std::vector<int>> cycles;
    std::set<std::vector<int>> known;
    SpreadingMetric metric;
    std::vector<Rational> lengths(tn.arcs.size(), Rational(0));
    LpSolution lp;
    std::vector<int> row_arcs;
    for (;;) {
        ++metric.rounds;
        std::vector<std::optional<std::vector<int>>> found(tn.terminals.size());
        parallel_for(tn.terminals.size(), options.worker_count(), [&](std::size_t i) {
            auto cycle = shortest_cycle_through(tn, out, in, lengths, live, tn.terminals[i]);
            if (cycle && cycle->first < 1) found[i] = canonical_rotation(std::move(cycle->second));
        });
        bool added = false;
        std::set<std::vector<int>> this_round;
        for (auto& f : found) {
            if (!f || this_round.count(*f)) continue;
            if (known.count(*f)) {
                if (std::none_of(f->begin(), f->end(), [&](int a) { return tn.arcs[static_cast<std::size_t>(a)].cuttable; }))
                    throw InputError("a cycle through a terminal has no cuttable arc");
                throw InvariantError("separation returned a constraint that is already enforced");
            }
            known.insert(*f);
            this_round.insert(*f);
            cycles.push_back(std::move(*f));
            added = true;
        }
        if (!added) break;
        if (cycles.size() > options.caps.metric_constraints)
            throw CapacityError("metric_constraints", options.caps.metric_constraints,
                                "spreading metric needed more generated cycle constraints than allowed");

        std::map<int, int> row_of;
        for (const auto& c : cycles)
            for (int a : c)
                if (tn.arcs[static_cast<std::size_t>(a)].cuttable) row_of.emplace(a, 0);
        row_arcs.clear();
        for (auto& [a, row] : row_of) {
            row = static_cast<int>(row_arcs.size());
            row_arcs.push_back(a);
        }
        std::vector<SparseColumn> columns;
        for (const auto& c : cycles) {
            SparseColumn col;
            for (int a : c)
                if (tn.arcs[static_cast<std::size_t>(a)].cuttable) col.emplace_back(row_of[a], Rational(1));
            if (col.empty()) throw InputError("a cycle through a terminal has no cuttable arc");
            columns.push_back(std::move(col));
        }
        std::vector<Rational> b;
        for (int a : row_arcs) b.push_back(tn.arcs[static_cast<std::size_t>(a)].capacity);
        lp = maximize_exact(static_cast<int>(row_arcs.size()), columns, std::vector<Rational>(cycles.size(), Rational(1)), b);
        std::fill(lengths.begin(), lengths.end(), Rational(0));
        for (std::size_t r = 0; r < row_arcs.size(); ++r) lengths[static_cast<std::size_t>(row_arcs[r])] = lp.dual[r];
    }

    metric.lengths = lengths;
    metric.objective = 0;
    for (std::size_t a = 0; a < tn.arcs.size(); ++a) metric.objective += tn.arcs[a].capacity * lengths[a];
    Rational packed = 0;
    for (std::size_t j = 0; j < cycles.size(); ++j)
        if (sgn(lp.primal[j]) > 0) {
            metric.packing.emplace_back(cycles[j], lp.primal[j]);
            packed += lp.primal[j];
        }
    if (packed != metric.objective) throw InvariantError("spreading metric and cycle packing values differ");
    metric.constraints = cycles.size();
    return metric;
}

namespace {

/// Arc digraph over the live arcs.
Digraph live_digraph(const TerminalNetwork& tn, const std::vector<char>& live) {
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < tn.arcs.size(); ++a)
        if (live[a]) edges.push_back({tn.arcs[a].tail, tn.arcs[a].head});
    return Digraph(tn.node_count(), edges);
}

constexpr std::size_t kCountCap = 100000;

/// Number of simple cycles through each node, saturating at kCountCap.
std::vector<std::size_t> cycles_per_node(const Digraph& g) {
    std::vector<std::size_t> count(static_cast<std::size_t>(g.order()), 0);
    try {
        for (const auto& c : enumerate_simple_cycles(g, kCountCap))
            for (Vertex v : c) ++count[static_cast<std::size_t>(v)];
    } catch (const CapacityError&) {
        const auto scc = strongly_connected_components(g);
        std::vector<int> size(static_cast<std::size_t>(g.order()), 0);
        for (int c : scc) ++size[static_cast<std::size_t>(c)];
        for (Vertex v = 0; v < g.order(); ++v)
            count[static_cast<std::size_t>(v)] = size[static_cast<std::size_t>(scc[static_cast<std::size_t>(v)])] > 1 ? kCountCap : 0;
    }
    return count;
}

/// Restores cut arcs one at a time (by id) while the graph stays acyclic.
void prune(const TerminalNetwork& tn, std::vector<char>& live) {
    for (std::size_t a = 0; a < tn.arcs.size(); ++a) {
        if (live[a]) continue;
        live[a] = 1;
        if (!is_acyclic(live_digraph(tn, live))) live[a] = 0;
    }
}

void greedy_cut(const TerminalNetwork& tn, std::vector<char>& live) {
    for (;;) {
        const Digraph g = live_digraph(tn, live);
        const auto cycle = find_cycle(g);
        if (!cycle) return;
        std::map<std::pair<int, int>, std::size_t> hits;
        try {
            for (const auto& c : enumerate_simple_cycles(g, kCountCap))
                for (std::size_t i = 0; i < c.size(); ++i) ++hits[{c[i], c[(i + 1) % c.size()]}];
        } catch (const CapacityError&) {
            hits.clear();
            hits[{(*cycle)[0], (*cycle)[1 % cycle->size()]}] = 1;
        }
        std::size_t best_hits = 0;
        std::size_t best_arc = tn.arcs.size();
        for (std::size_t a = 0; a < tn.arcs.size(); ++a) {
            if (!live[a]) continue;
            const auto it = hits.find({tn.arcs[a].tail, tn.arcs[a].head});
            if (it != hits.end() && it->second > best_hits) {
                best_hits = it->second;
                best_arc = a;
            }
        }
        live[best_arc] = 0;
    }
}

std::vector<LinkId> cut_links(const TerminalNetwork& tn, const std::vector<char>& live) {
    std::vector<LinkId> links;
    for (std::size_t a = 0; a < tn.arcs.size(); ++a)
        if (!live[a]) links.insert(links.end(), tn.arcs[a].links.begin(), tn.arcs[a].links.end());
    std::sort(links.begin(), links.end());
    return links;
}

}  // namespace

FesApprox subset_fes_approx(const MUNetwork& net, const Options& options) {
    const TerminalNetwork tn = prime_network(net);
    const SpreadingMetric metric = solve_spreading_metric(tn, options);
    const auto out = out_lists(tn);
    const auto& x = metric.lengths;
    const Rational credit = metric.objective / (2 * net.pair_count());
    const Rational half(1, 2);

    FesApprox result;
    result.objective = metric.objective;
    std::vector<char> live(tn.arcs.size(), 1);
    std::vector<char> done(static_cast<std::size_t>(tn.node_count()), 0);
    for (;;) {
        const auto count = cycles_per_node(live_digraph(tn, live));
        int s = -1;
        for (int t : tn.terminals) {
            if (done[static_cast<std::size_t>(t)] || count[static_cast<std::size_t>(t)] == 0) continue;
            if (s < 0 || count[static_cast<std::size_t>(t)] > count[static_cast<std::size_t>(s)] ||
                (count[static_cast<std::size_t>(t)] == count[static_cast<std::size_t>(s)] &&
                 tn.node_names[static_cast<std::size_t>(t)] < tn.node_names[static_cast<std::size_t>(s)]))
                s = t;
        }
        if (s < 0) break;
        done[static_cast<std::size_t>(s)] = 1;

        // s splits into s_out (the Dijkstra root) and s_in (never entered)
        const auto sp = dijkstra(tn, out, x, live, s);
        std::vector<Rational> radii;
        for (const auto& d : sp.dist)
            if (d && *d < half) radii.push_back(*d);
        std::sort(radii.begin(), radii.end());
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

        auto in_ball = [&](int v, const Rational& rho) {
            const auto& d = sp.dist[static_cast<std::size_t>(v)];
            return v != s ? (d && *d <= rho) : false;
        };
        std::optional<Rational> best_ratio;
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const Rational& rho = radii[i];
            const Rational reach = i + 1 < radii.size() ? radii[i + 1] : half;
            Rational cut = 0;
            Rational volume = credit;
            for (std::size_t a = 0; a < tn.arcs.size(); ++a) {
                if (!live[a]) continue;
                const auto& arc = tn.arcs[a];
                const bool tail_in = arc.tail == s || in_ball(arc.tail, rho);
                if (!tail_in) continue;
                const Rational& du = *sp.dist[static_cast<std::size_t>(arc.tail)];
                if (in_ball(arc.head, rho)) {
                    volume += arc.capacity * x[a];
                } else {
                    cut += arc.capacity;
                    volume += arc.capacity * (reach - du);
                }
            }
            Rational ratio = cut / volume;
            if (!best_ratio || ratio < *best_ratio) {
                best_ratio = ratio;
                best_index = i;
            }
        }
        if (radii.empty()) throw InvariantError("terminal has no distance labels");
        const Rational& rho = radii[best_index];
        TerminalCut step{tn.node_names[static_cast<std::size_t>(s)], rho, 0};
        for (std::size_t a = 0; a < tn.arcs.size(); ++a) {
            if (!live[a]) continue;
            const auto& arc = tn.arcs[a];
            if ((arc.tail == s || in_ball(arc.tail, rho)) && !in_ball(arc.head, rho)) {
                live[a] = 0;
                step.cut_weight += arc.links.size();
            }
        }
        result.steps.push_back(std::move(step));
    }

    prune(tn, live);
    result.links = cut_links(tn, live);
    if (!is_feedback_edge_set(net, result.links)) {
        result.used_fallback = true;
        std::fill(live.begin(), live.end(), 1);
        greedy_cut(tn, live);
        prune(tn, live);
        result.links = cut_links(tn, live);
        if (!is_feedback_edge_set(net, result.links)) throw InvariantError("greedy feedback edge set failed to verify");
    }
    result.weight = result.links.size();
    if (sgn(metric.objective) > 0)
        result.ratio = static_cast<double>(result.weight) / to_double(metric.objective);
    return result;
}

VertexSet fes_to_fvs(const MUNetwork& net, const std::vector<LinkId>& fes) {
    if (!is_feedback_edge_set(net, fes)) throw ContractError("link set is not a feedback edge set of G'");
    const auto index = to_index_graph(net);
    std::vector<Vertex> vertices;
    for (LinkId e : fes) vertices.push_back(index.vertex_of_link[static_cast<std::size_t>(e)]);
    VertexSet fvs(std::move(vertices));
    if (!is_feedback_vertex_set(index.graph, fvs)) throw InvariantError("feedback edge set did not map to a feedback vertex set");
    return fvs;
}

bool within_regression_bound(std::size_t weight, int k, const Rational& rcp, double constant) {
    const double log_term = std::log(static_cast<double>(k) + 1.0);
    return static_cast<double>(weight) <= constant * log_term * log_term * to_double(rcp) + 1e-9;
}

}  // namespace gnskit
