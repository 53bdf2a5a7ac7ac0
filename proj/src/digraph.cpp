#include "gnskit/digraph.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

#include "gnskit/error.hpp"
#include "text_util.hpp"

namespace gnskit {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VertexSet::contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }

Digraph::Digraph(int n) {
    if (n < 0) throw InputError("negative vertex count");
    out_.resize(static_cast<std::size_t>(n));
    in_.resize(static_cast<std::size_t>(n));
}

Digraph::Digraph(int n, std::span<const Edge> edges) : Digraph(n) {
    std::vector<Edge> sorted(edges.begin(), edges.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto [u, v] = sorted[i];
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
        if (i > 0 && sorted[i - 1] == sorted[i])
            throw InputError("duplicate edge " + std::to_string(u) + "->" + std::to_string(v));
        out_[static_cast<std::size_t>(u)].push_back(v);
    }
    for (const auto& [u, v] : sorted) in_[static_cast<std::size_t>(v)].push_back(u);
    for (auto& list : in_) std::sort(list.begin(), list.end());
    edge_count_ = sorted.size();
}

void Digraph::check_vertex(Vertex v) const {
    if (v < 0 || v >= order())
        throw InputError("vertex " + std::to_string(v) + " out of range [0, " + std::to_string(order()) + ")");
}

void Digraph::add_edge(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    auto& fwd = out_[static_cast<std::size_t>(u)];
    const auto pos = std::lower_bound(fwd.begin(), fwd.end(), v);
    if (pos != fwd.end() && *pos == v)
        throw InputError("duplicate edge " + std::to_string(u) + "->" + std::to_string(v));
    fwd.insert(pos, v);
    auto& rev = in_[static_cast<std::size_t>(v)];
    rev.insert(std::lower_bound(rev.begin(), rev.end(), u), u);
    ++edge_count_;
}

bool Digraph::has_edge(Vertex u, Vertex v) const {
    if (u < 0 || u >= order()) return false;
    const auto& fwd = out_[static_cast<std::size_t>(u)];
    return std::binary_search(fwd.begin(), fwd.end(), v);
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u)
        for (Vertex v : out(u)) result.push_back({u, v});
    return result;
}

std::string Digraph::label(Vertex v) const {
    check_vertex(v);
    return labels_.empty() ? std::to_string(v) : labels_[static_cast<std::size_t>(v)];
}

void Digraph::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != out_.size())
        throw InputError("label count " + std::to_string(labels.size()) + " does not match vertex count");
    labels_ = std::move(labels);
}

bool Digraph::is_symmetric() const {
    for (Vertex u = 0; u < order(); ++u)
        for (Vertex v : out(u))
            if (!has_edge(v, u)) return false;
    return true;
}

bool Digraph::operator==(const Digraph& other) const { return out_ == other.out_; }

Digraph complete_digraph(int n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v) edges.push_back({u, v});
    return Digraph(n, edges);
}

Digraph directed_cycle(int n) {
    std::vector<Edge> edges;
    if (n >= 2)
        for (Vertex u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n});
    return Digraph(n, edges);
}

Digraph undirected_cycle(int n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n && n >= 3; ++u) {
        edges.push_back({u, (u + 1) % n});
        edges.push_back({(u + 1) % n, u});
    }
    return Digraph(n, edges);
}

namespace {

void check_product_size(std::size_t n, const Caps& caps, const char* what) {
    if (n > caps.product_vertices)
        throw CapacityError("product_vertices", caps.product_vertices,
                            std::string(what) + " would have " + std::to_string(n) + " vertices");
}

}  // namespace

Digraph strong_product(const Digraph& g, const Digraph& h, const Caps& caps) {
    const auto ng = static_cast<std::size_t>(g.order());
    const auto nh = static_cast<std::size_t>(h.order());
    check_product_size(ng * nh, caps, "strong product");
    const int nn = static_cast<int>(ng * nh);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < g.order(); ++u) {
        std::vector<Vertex> us{u};
        us.insert(us.end(), g.out(u).begin(), g.out(u).end());
        for (Vertex v = 0; v < h.order(); ++v) {
            std::vector<Vertex> vs{v};
            vs.insert(vs.end(), h.out(v).begin(), h.out(v).end());
            const Vertex from = u * h.order() + v;
            for (Vertex u2 : us)
                for (Vertex v2 : vs) {
                    const Vertex to = u2 * h.order() + v2;
                    if (to != from) edges.push_back({from, to});
                }
        }
    }
    Digraph result(nn, edges);
    std::vector<std::string> labels;
    labels.reserve(ng * nh);
    for (Vertex u = 0; u < g.order(); ++u)
        for (Vertex v = 0; v < h.order(); ++v) labels.push_back("(" + g.label(u) + "," + h.label(v) + ")");
    result.set_labels(std::move(labels));
    return result;
}

Digraph complement(const Digraph& g) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < g.order(); ++u)
        for (Vertex v = 0; v < g.order(); ++v)
            if (u != v && !g.has_edge(u, v)) edges.push_back({u, v});
    Digraph result(g.order(), edges);
    result.set_labels(g.labels());
    return result;
}

Digraph blowup(const Digraph& g, int k, const Caps& caps) {
    if (k < 1) throw InputError("blowup factor must be positive");
    const auto n = static_cast<std::size_t>(g.order());
    check_product_size(n * static_cast<std::size_t>(k), caps, "blowup");
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges())
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) edges.push_back({u * k + i, v * k + j});
    Digraph result(g.order() * k, edges);
    std::vector<std::string> labels;
    for (Vertex v = 0; v < g.order(); ++v)
        for (int i = 0; i < k; ++i) labels.push_back("(" + g.label(v) + "," + std::to_string(i) + ")");
    result.set_labels(std::move(labels));
    return result;
}

Digraph tensor_power(const Digraph& g, int q, const Caps& caps) {
    if (q < 1) throw InputError("tensor power must be positive");
    std::size_t size = 1;
    for (int i = 0; i < q; ++i) {
        size *= static_cast<std::size_t>(g.order());
        if (size > caps.product_vertices) check_product_size(size, caps, "tensor power");
    }
    if (q == 1) return g;
    Digraph result = g;
    for (int i = 1; i < q; ++i) result = strong_product(result, g, caps);
    // flat coordinate labels (v1,...,vq)
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(result.order()));
    for (Vertex x = 0; x < result.order(); ++x) {
        std::vector<Vertex> coords(static_cast<std::size_t>(q));
        Vertex rest = x;
        for (int i = q - 1; i >= 0; --i) {
            coords[static_cast<std::size_t>(i)] = rest % g.order();
            rest /= g.order();
        }
        std::string label = "(";
        for (int i = 0; i < q; ++i) label += (i ? "," : "") + g.label(coords[static_cast<std::size_t>(i)]);
        labels.push_back(label + ")");
    }
    result.set_labels(std::move(labels));
    return result;
}

Digraph induced_subgraph(const Digraph& g, const VertexSet& keep) {
    std::vector<int> index(static_cast<std::size_t>(g.order()), -1);
    int next = 0;
    for (Vertex v : keep) {
        if (v < 0 || v >= g.order()) throw InputError("vertex " + std::to_string(v) + " out of range");
        index[static_cast<std::size_t>(v)] = next++;
    }
    std::vector<Edge> edges;
    for (Vertex u : keep)
        for (Vertex v : g.out(u))
            if (index[static_cast<std::size_t>(v)] >= 0)
                edges.push_back({index[static_cast<std::size_t>(u)], index[static_cast<std::size_t>(v)]});
    Digraph result(next, edges);
    if (g.has_labels()) {
        std::vector<std::string> labels;
        for (Vertex v : keep) labels.push_back(g.label(v));
        result.set_labels(std::move(labels));
    }
    return result;
}

Digraph reversed(const Digraph& g) {
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges()) edges.push_back({v, u});
    Digraph result(g.order(), edges);
    result.set_labels(g.labels());
    return result;
}

std::vector<int> strongly_connected_components(const Digraph& g) {
    const auto n = static_cast<std::size_t>(g.order());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    int counter = 0, components = 0;
    struct Frame {
        Vertex v;
        std::size_t next;
    };
    std::vector<Frame> call;
    for (Vertex root = 0; root < g.order(); ++root) {
        if (index[static_cast<std::size_t>(root)] >= 0) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, next] = call.back();
            const auto vi = static_cast<std::size_t>(v);
            if (next == 0 && index[vi] < 0) {
                index[vi] = low[vi] = counter++;
                stack.push_back(v);
                on_stack[vi] = 1;
            }
            const auto& succ = g.out(v);
            if (next < succ.size()) {
                const Vertex w = succ[next++];
                const auto wi = static_cast<std::size_t>(w);
                if (index[wi] < 0) {
                    call.push_back({w, 0});
                } else if (on_stack[wi]) {
                    low[vi] = std::min(low[vi], index[wi]);
                }
                continue;
            }
            if (low[vi] == index[vi]) {
                for (;;) {
                    const Vertex w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    comp[static_cast<std::size_t>(w)] = components;
                    if (w == v) break;
                }
                ++components;
            }
            const Vertex finished = v;
            call.pop_back();
            if (!call.empty()) {
                const auto pi = static_cast<std::size_t>(call.back().v);
                low[pi] = std::min(low[pi], low[static_cast<std::size_t>(finished)]);
            }
        }
    }
    return comp;
}

namespace {

Cycle canonical_rotation(Cycle cycle) {
    const auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
    return cycle;
}

/// Johnson's circuit enumeration restricted to one start vertex.
class CircuitSearch {
public:
    CircuitSearch(const Digraph& g, std::vector<Cycle>& out, std::size_t cap)
        : g_(g), out_(out), cap_(cap), blocked_(static_cast<std::size_t>(g.order()), 0),
          block_map_(static_cast<std::size_t>(g.order())), allowed_(static_cast<std::size_t>(g.order()), 0) {}

    void run(Vertex start, const std::vector<char>& allowed) {
        start_ = start;
        allowed_ = allowed;
        for (std::size_t v = 0; v < allowed_.size(); ++v)
            if (allowed_[v]) {
                blocked_[v] = 0;
                block_map_[v].clear();
            }
        circuit(start);
    }

private:
    bool circuit(Vertex v) {
        bool found = false;
        path_.push_back(v);
        blocked_[static_cast<std::size_t>(v)] = 1;
        for (Vertex w : g_.out(v)) {
            if (!allowed_[static_cast<std::size_t>(w)]) continue;
            if (w == start_) {
                if (out_.size() >= cap_)
                    throw CapacityError("enum_cycles", cap_, "graph has more simple cycles than allowed");
                out_.push_back(path_);
                found = true;
            } else if (!blocked_[static_cast<std::size_t>(w)] && circuit(w)) {
                found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (Vertex w : g_.out(v)) {
                if (!allowed_[static_cast<std::size_t>(w)]) continue;
                auto& list = block_map_[static_cast<std::size_t>(w)];
                if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
            }
        }
        path_.pop_back();
        return found;
    }

    void unblock(Vertex u) {
        std::vector<Vertex> work{u};
        while (!work.empty()) {
            const Vertex x = work.back();
            work.pop_back();
            blocked_[static_cast<std::size_t>(x)] = 0;
            auto list = std::move(block_map_[static_cast<std::size_t>(x)]);
            block_map_[static_cast<std::size_t>(x)].clear();
            for (Vertex w : list)
                if (blocked_[static_cast<std::size_t>(w)]) work.push_back(w);
        }
    }

    const Digraph& g_;
    std::vector<Cycle>& out_;
    std::size_t cap_;
    Vertex start_ = 0;
    std::vector<char> blocked_;
    std::vector<std::vector<Vertex>> block_map_;
    std::vector<char> allowed_;
    std::vector<Vertex> path_;
};

}  // namespace

std::vector<Cycle> enumerate_simple_cycles(const Digraph& g, std::size_t cap) {
    std::vector<Cycle> cycles;
    CircuitSearch search(g, cycles, cap);
    const int n = g.order();
    for (Vertex s = 0; s < n; ++s) {
        // SCC containing s in the subgraph induced by vertices >= s
        std::vector<Vertex> keep;
        for (Vertex v = s; v < n; ++v) keep.push_back(v);
        const Digraph sub = induced_subgraph(g, VertexSet(keep));
        const auto comp = strongly_connected_components(sub);
        std::vector<char> allowed(static_cast<std::size_t>(n), 0);
        std::size_t members = 0;
        for (Vertex v = s; v < n; ++v)
            if (comp[static_cast<std::size_t>(v - s)] == comp[0]) {
                allowed[static_cast<std::size_t>(v)] = 1;
                ++members;
            }
        if (members < 2) continue;
        search.run(s, allowed);
    }
    return cycles;
}

bool is_acyclic(const Digraph& g) { return !find_cycle(g).has_value(); }

std::optional<Cycle> find_cycle(const Digraph& g) {
    const auto n = static_cast<std::size_t>(g.order());
    std::vector<char> color(n, 0);
    std::vector<Vertex> parent(n, -1);
    for (Vertex root = 0; root < g.order(); ++root) {
        if (color[static_cast<std::size_t>(root)]) continue;
        std::vector<std::pair<Vertex, std::size_t>> stack{{root, 0}};
        color[static_cast<std::size_t>(root)] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            const auto& succ = g.out(v);
            if (next < succ.size()) {
                const Vertex w = succ[next++];
                const auto wi = static_cast<std::size_t>(w);
                if (color[wi] == 0) {
                    color[wi] = 1;
                    parent[wi] = v;
                    stack.push_back({w, 0});
                } else if (color[wi] == 1) {
                    Cycle cycle{w};
                    for (Vertex x = v; x != w; x = parent[static_cast<std::size_t>(x)]) cycle.push_back(x);
                    std::reverse(cycle.begin() + 1, cycle.end());
                    return canonical_rotation(std::move(cycle));
                }
            } else {
                color[static_cast<std::size_t>(v)] = 2;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

std::optional<Cycle> residual_cycle(const Digraph& g, const VertexSet& removed) {
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.order(); ++v)
        if (!removed.contains(v)) keep.push_back(v);
    auto cycle = find_cycle(induced_subgraph(g, VertexSet(keep)));
    if (!cycle) return std::nullopt;
    for (auto& v : *cycle) v = keep[static_cast<std::size_t>(v)];
    return canonical_rotation(std::move(*cycle));
}

bool is_feedback_vertex_set(const Digraph& g, const VertexSet& fvs) { return !residual_cycle(g, fvs).has_value(); }

EmbeddingCheck verify_product_blowup_embedding(std::span<const Digraph> graphs, std::span<const int> ks,
                                               const Caps& caps) {
    if (graphs.empty() || graphs.size() != ks.size())
        throw InputError("embedding check needs equally many graphs and blowup factors (at least one)");
    const std::size_t m = graphs.size();
    std::size_t big_k = 1;
    for (int k : ks) {
        if (k < 1) throw InputError("blowup factor must be positive");
        big_k *= static_cast<std::size_t>(k);
    }

    Digraph alpha = blowup(graphs[0], ks[0], caps);
    Digraph product = graphs[0];
    for (std::size_t i = 1; i < m; ++i) {
        alpha = strong_product(alpha, blowup(graphs[i], ks[i], caps), caps);
        product = strong_product(product, graphs[i], caps);
    }
    const Digraph beta = blowup(product, static_cast<int>(big_k), caps);

    // Decode a G_alpha vertex into its coordinates (v_i, j_i) and re-encode
    // as (v_1..v_m)_(j_1..j_m) in G_beta.
    EmbeddingCheck check;
    check.bijection.resize(static_cast<std::size_t>(alpha.order()));
    for (Vertex x = 0; x < alpha.order(); ++x) {
        std::vector<int> v(m), j(m);
        Vertex rest = x;
        for (std::size_t i = m; i-- > 0;) {
            const int width = graphs[i].order() * ks[i];
            const int coord = rest % width;
            rest /= width;
            v[i] = coord / ks[i];
            j[i] = coord % ks[i];
        }
        Vertex w = 0, copy = 0;
        for (std::size_t i = 0; i < m; ++i) {
            w = w * graphs[i].order() + v[i];
            copy = copy * ks[i] + j[i];
        }
        check.bijection[static_cast<std::size_t>(x)] = w * static_cast<Vertex>(big_k) + copy;
    }
    check.alpha_edges = alpha.edge_count();
    check.beta_edges = beta.edge_count();
    check.holds = true;
    for (const auto& [a, b] : alpha.edges())
        if (!beta.has_edge(check.bijection[static_cast<std::size_t>(a)], check.bijection[static_cast<std::size_t>(b)])) {
            check.holds = false;
            break;
        }
    return check;
}

Digraph parse_digraph(std::string_view text) {
    detail::LineReader reader(text);
    std::optional<Digraph> graph;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    while (auto line = reader.next()) {
        const auto& tokens = line->tokens;
        if (!graph) {
            if (tokens.size() != 2 || tokens[0] != "digraph")
                throw reader.error("expected header 'digraph <n>'");
            graph.emplace(detail::parse_int(tokens[1], reader));
            continue;
        }
        if (tokens[0] == "e") {
            if (tokens.size() != 3) throw reader.error("expected 'e <u> <v>'");
            const int u = detail::parse_int(tokens[1], reader);
            const int v = detail::parse_int(tokens[2], reader);
            try {
                graph->add_edge(u, v);
            } catch (const InputError& e) {
                throw reader.error(e.what());
            }
        } else if (tokens[0] == "label") {
            if (tokens.size() < 3) throw reader.error("expected 'label <v> <text>'");
            const int v = detail::parse_int(tokens[1], reader);
            if (v < 0 || v >= graph->order()) throw reader.error("label for out-of-range vertex");
            if (labels.empty()) labels.resize(static_cast<std::size_t>(graph->order()));
            labels[static_cast<std::size_t>(v)] = line->rest_after(2);
        } else {
            throw reader.error("unknown directive '" + tokens[0] + "'");
        }
    }
    if (!graph) throw InputError("empty digraph file");
    if (!labels.empty()) graph->set_labels(std::move(labels));
    return std::move(*graph);
}

std::string serialize_digraph(const Digraph& g, std::string_view header_comment) {
    std::ostringstream out;
    detail::write_comment(out, header_comment);
    out << "digraph " << g.order() << '\n';
    if (g.has_labels())
        for (Vertex v = 0; v < g.order(); ++v) out << "label " << v << ' ' << g.label(v) << '\n';
    for (const auto& [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
    return out.str();
}

}  // namespace gnskit
