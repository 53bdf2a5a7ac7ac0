#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnskit/config.hpp"

namespace gnskit {

using Vertex = int;

struct Edge {
    Vertex from;
    Vertex to;
    auto operator<=>(const Edge&) const = default;
};

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<Vertex> members);

    const std::vector<Vertex>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(Vertex v) const;

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    bool operator==(const VertexSet&) const = default;
    auto operator<=>(const VertexSet&) const = default;

private:
    std::vector<Vertex> members_;
};

/// Simple directed graph: no self-loops, no parallel edges. Both the
/// forward and reverse adjacency lists are kept sorted.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(int n);
    Digraph(int n, std::span<const Edge> edges);

    int order() const noexcept { return static_cast<int>(out_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// Throws InputError on a self-loop, duplicate or out-of-range endpoint.
    void add_edge(Vertex u, Vertex v);
    bool has_edge(Vertex u, Vertex v) const;

    const std::vector<Vertex>& out(Vertex v) const { return out_[static_cast<std::size_t>(v)]; }
    const std::vector<Vertex>& in(Vertex v) const { return in_[static_cast<std::size_t>(v)]; }

    /// All edges, lexicographically sorted.
    std::vector<Edge> edges() const;

    bool has_labels() const noexcept { return !labels_.empty(); }
    /// Provenance label; the decimal index when no labels are attached.
    std::string label(Vertex v) const;
    void set_labels(std::vector<std::string> labels);
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    bool is_symmetric() const;

    /// Structural equality (vertex count and edge set); labels are ignored.
    bool operator==(const Digraph& other) const;

private:
    void check_vertex(Vertex v) const;

    std::vector<std::vector<Vertex>> out_;
    std::vector<std::vector<Vertex>> in_;
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
};

Digraph complete_digraph(int n);
Digraph directed_cycle(int n);
/// Symmetric digraph of the undirected n-cycle.
Digraph undirected_cycle(int n);

/// Edge (u,v)->(u',v') iff each coordinate is equal or adjacent, excluding
/// the identity pair. Vertex (u,v) has index u*|V(h)| + v.
Digraph strong_product(const Digraph& g, const Digraph& h, const Caps& caps = {});

/// (u,v) is an edge iff u != v and (u,v) is not an edge of g.
Digraph complement(const Digraph& g);

/// k copies of each vertex, copy (v,i) at index v*k + i; every edge becomes
/// a directed biclique.
Digraph blowup(const Digraph& g, int k, const Caps& caps = {});

/// q-fold strong product of g with itself; throws CapacityError when
/// |V(g)|^q exceeds caps.product_vertices.
Digraph tensor_power(const Digraph& g, int q, const Caps& caps = {});

/// Subgraph induced by the vertices in `keep` (re-indexed in order).
Digraph induced_subgraph(const Digraph& g, const VertexSet& keep);

Digraph reversed(const Digraph& g);

using Cycle = std::vector<Vertex>;

/// All simple directed cycles in canonical rotation (smallest vertex
/// first), grouped by smallest vertex and in depth-first order within a
/// group. Throws CapacityError once more than `cap` cycles exist.
std::vector<Cycle> enumerate_simple_cycles(const Digraph& g, std::size_t cap = 1000000);

bool is_acyclic(const Digraph& g);

/// Some cycle in g (canonical rotation), or nullopt if g is acyclic.
std::optional<Cycle> find_cycle(const Digraph& g);

/// A cycle among the vertices not in `removed`, or nullopt.
std::optional<Cycle> residual_cycle(const Digraph& g, const VertexSet& removed);

bool is_feedback_vertex_set(const Digraph& g, const VertexSet& fvs);

/// Strongly connected component id per vertex (Tarjan); ids are assigned in
/// reverse topological order of the condensation.
std::vector<int> strongly_connected_components(const Digraph& g);

/// Outcome of the product/blowup spanning-subgraph check.
struct EmbeddingCheck {
    bool holds = false;
    /// Image in G_beta = blowup(prod G_i, prod k_i) of each vertex of
    /// G_alpha = prod blowup(G_i, k_i).
    std::vector<Vertex> bijection;
    std::size_t alpha_edges = 0;
    std::size_t beta_edges = 0;
};

EmbeddingCheck verify_product_blowup_embedding(std::span<const Digraph> graphs, std::span<const int> ks,
                                               const Caps& caps = {});

/// ".dg" text: `digraph <n>`, then `e <u> <v>` lines; `label <v> <text>`
/// lines attach provenance labels; `#` starts a comment.
Digraph parse_digraph(std::string_view text);
std::string serialize_digraph(const Digraph& g, std::string_view header_comment = {});

}  // namespace gnskit
