#include "gnskit/bounds.hpp"

#include <cmath>
#include <string>

#include "bitset_graph.hpp"
#include "gnskit/error.hpp"

namespace gnskit {

namespace {

using detail::bit;
using detail::lowest;
using detail::Mask;
using detail::MaskGraph;

constexpr std::size_t kMaskLimit = 64;

void check_size(const Digraph& g, std::size_t cap, const char* cap_name, const char* what) {
    const auto n = static_cast<std::size_t>(g.order());
    if (n > cap)
        throw CapacityError(cap_name, cap, std::string(what) + " on " + std::to_string(n) + " vertices refused");
    if (n > kMaskLimit) throw CapacityError(cap_name, kMaskLimit, std::string(what) + " supports at most 64 vertices");
}

class FvsSearch {
public:
    explicit FvsSearch(const Digraph& g) : g_(g) {}

    /// Shortest cycle inside `alive` as a vertex mask (0 if acyclic); ties
    /// go to the smallest start vertex.
    Mask shortest_cycle(Mask alive) const {
        Mask best = 0;
        int best_len = g_.n + 1;
        std::vector<int> parent(static_cast<std::size_t>(g_.n));
        for (Mask starts = alive; starts; starts &= starts - 1) {
            const int s = lowest(starts);
            Mask seen = bit(s);
            Mask frontier = bit(s);
            for (int len = 1; len < best_len && frontier; ++len) {
                Mask next = 0;
                for (Mask f = frontier; f; f &= f - 1) {
                    const int u = lowest(f);
                    if (g_.out[static_cast<std::size_t>(u)] & bit(s)) {
                        Mask cycle = 0;
                        for (int w = u; w != s; w = parent[static_cast<std::size_t>(w)]) cycle |= bit(w);
                        best = cycle | bit(s);
                        best_len = len;
                        next = 0;
                        break;
                    }
                    for (Mask o = g_.out[static_cast<std::size_t>(u)] & alive & ~seen & ~next; o; o &= o - 1) {
                        parent[static_cast<std::size_t>(lowest(o))] = u;
                        next |= bit(lowest(o));
                    }
                }
                if (best_len == len) break;
                seen |= next;
                frontier = next;
            }
        }
        return best;
    }

    int disjoint_cycle_bound(Mask alive) const {
        int count = 0;
        for (Mask rest = g_.core(alive); rest; rest = g_.core(rest)) {
            const Mask cycle = shortest_cycle(rest);
            if (!cycle) break;
            ++count;
            rest &= ~cycle;
        }
        return count;
    }

    /// Can at most `budget` vertices of alive \ forbidden break every cycle?
    bool within(Mask alive, Mask forbidden, int budget) const {
        alive = g_.core(alive);
        if (!alive) return true;
        if (g_.core(alive & forbidden)) return false;
        if (budget <= 0) return false;
        if (disjoint_cycle_bound(alive) > budget) return false;
        const Mask cycle = shortest_cycle(alive);
        Mask tried = 0;
        for (Mask d = cycle & ~forbidden; d; d &= d - 1) {
            const int v = lowest(d);
            if (within(alive & ~bit(v), forbidden | tried, budget - 1)) return true;
            tried |= bit(v);
        }
        return false;
    }

    const MaskGraph& graph() const { return g_; }

private:
    MaskGraph g_;
};

VertexSet to_set(Mask m) {
    std::vector<Vertex> members;
    for (; m; m &= m - 1) members.push_back(lowest(m));
    return VertexSet(std::move(members));
}

/// Clique-cover bound on the independence number of the candidates.
int clique_cover(const std::vector<Mask>& adj, Mask candidates) {
    Mask cliques[64];
    int count = 0;
    for (; candidates; candidates &= candidates - 1) {
        const int v = lowest(candidates);
        int c = 0;
        while (c < count && (cliques[c] & ~adj[static_cast<std::size_t>(v)])) ++c;
        if (c == count) cliques[count++] = 0;
        cliques[c] |= bit(v);
    }
    return count;
}

struct AlphaSearch {
    std::vector<Mask> adj;
    int best = -1;
    Mask best_set = 0;

    void run(Mask candidates, Mask current, int size) {
        if (size + clique_cover(adj, candidates) <= best) return;
        if (!candidates) {
            best = size;
            best_set = current;
            return;
        }
        const int v = lowest(candidates);
        run(candidates & ~adj[static_cast<std::size_t>(v)] & ~bit(v), current | bit(v), size + 1);
        run(candidates & ~bit(v), current, size);
    }
};

/// q-th root of an integer, exact when the radicand is a perfect power.
double integer_root(std::size_t value, int q) {
    const double approx = std::pow(static_cast<double>(value), 1.0 / q);
    const double rounded = std::round(approx);
    double power = 1;
    for (int i = 0; i < q; ++i) power *= rounded;
    return power == static_cast<double>(value) ? rounded : approx;
}

}  // namespace

VertexSet min_fvs_exact(const Digraph& g, const Caps& caps) {
    check_size(g, caps.mais_vertices, "mais_vertices", "exact feedback vertex set search");
    const FvsSearch search(g);
    const MaskGraph& mg = search.graph();
    const Mask all = mg.all();
    int size = search.disjoint_cycle_bound(all);
    while (!search.within(all, 0, size)) ++size;

    // lexicographically smallest optimum, decided one vertex at a time
    std::vector<char> on_cycle(static_cast<std::size_t>(g.order()), 0);
    {
        const auto scc = strongly_connected_components(g);
        std::vector<int> count(static_cast<std::size_t>(g.order()), 0);
        for (int c : scc) ++count[static_cast<std::size_t>(c)];
        for (Vertex v = 0; v < g.order(); ++v) on_cycle[static_cast<std::size_t>(v)] = count[static_cast<std::size_t>(scc[static_cast<std::size_t>(v)])] > 1;
    }
    Mask chosen = 0;
    Mask forbidden = 0;
    int remaining = size;
    for (Vertex v = 0; v < g.order() && remaining > 0; ++v) {
        if (on_cycle[static_cast<std::size_t>(v)] &&
            search.within(all & ~chosen & ~bit(v), forbidden, remaining - 1)) {
            chosen |= bit(v);
            --remaining;
        } else {
            forbidden |= bit(v);
        }
    }
    if (remaining != 0 || !mg.acyclic(all & ~chosen)) throw InvariantError("feedback vertex set reconstruction failed");
    return to_set(chosen);
}

MaisResult mais_exact(const Digraph& g, const Caps& caps) {
    const VertexSet fvs = min_fvs_exact(g, caps);
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.order(); ++v)
        if (!fvs.contains(v)) keep.push_back(v);
    return {keep.size(), VertexSet(std::move(keep))};
}

AlphaResult alpha_exact(const Digraph& g, const Caps& caps) {
    check_size(g, caps.alpha_vertices, "alpha_vertices", "exact independence number search");
    const MaskGraph mg(g);
    AlphaSearch search;
    for (int v = 0; v < mg.n; ++v) search.adj.push_back(mg.out[static_cast<std::size_t>(v)] | mg.in[static_cast<std::size_t>(v)]);
    search.run(mg.all(), 0, 0);
    return {static_cast<std::size_t>(search.best), to_set(search.best_set)};
}

TensorBound tensor_bound(const Digraph& g, int q, std::size_t m_links, const Caps& caps) {
    if (q < 1) throw InputError("tensor power must be positive");
    const Digraph power = tensor_power(g, q, caps);
    const std::size_t mais = mais_exact(power, caps).value;
    return {q, mais, m_links, static_cast<double>(m_links) - integer_root(mais, q)};
}

ShannonBound shannon_capacity_lb(const Digraph& g, int power, const Caps& caps) {
    if (power < 1) throw InputError("power must be positive");
    const Digraph product = tensor_power(g, power, caps);
    const std::size_t alpha = alpha_exact(product, caps).value;
    return {power, alpha, integer_root(alpha, power)};
}

double tensor_root(std::size_t radicand, int q) { return integer_root(radicand, q); }

}  // namespace gnskit
