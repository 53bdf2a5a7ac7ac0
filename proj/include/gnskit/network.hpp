#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnskit/config.hpp"
#include "gnskit/digraph.hpp"

namespace gnskit {

using NodeId = int;
using LinkId = int;

struct Link {
    std::optional<NodeId> tail;  // empty for source links
    NodeId head;
    std::optional<int> source_of;  // pair index, for source links

    bool is_source() const noexcept { return !tail.has_value(); }
    bool operator==(const Link&) const = default;
};

struct UnicastPair {
    NodeId source;
    NodeId destination;
    bool operator==(const UnicastPair&) const = default;
};

struct RegularLinkSpec {
    NodeId tail;
    NodeId head;
};

/// Acyclic multiple-unicasts network with unit-capacity links. Source
/// links are never supplied by the caller: `build` synthesizes
/// mincut(s_i, t_i) tail-less links into every s_i, with ids following all
/// regular links, grouped by pair.
class MUNetwork {
public:
    /// Validates (unique names, acyclic regular links, s_i != t_i,
    /// mincut(s_i, t_i) >= 1) and synthesizes source links.
    static MUNetwork build(std::vector<std::string> nodes, const std::vector<RegularLinkSpec>& links,
                           std::vector<UnicastPair> pairs);

    int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
    int link_count() const noexcept { return static_cast<int>(links_.size()); }
    int pair_count() const noexcept { return static_cast<int>(pairs_.size()); }
    int regular_link_count() const noexcept;

    const std::string& node_name(NodeId v) const { return nodes_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::string>& node_names() const noexcept { return nodes_; }
    std::optional<NodeId> find_node(std::string_view name) const;

    const Link& link(LinkId e) const { return links_.at(static_cast<std::size_t>(e)); }
    const std::vector<Link>& links() const noexcept { return links_; }
    const UnicastPair& pair(int i) const { return pairs_.at(static_cast<std::size_t>(i)); }
    const std::vector<UnicastPair>& pairs() const noexcept { return pairs_; }
    const std::vector<LinkId>& source_links(int i) const { return source_links_.at(static_cast<std::size_t>(i)); }

    /// Regular links (the only ones a GNS cut may contain).
    std::vector<LinkId> cuttable_links() const;

    bool operator==(const MUNetwork&) const = default;

private:
    friend MUNetwork tilde_transform(const MUNetwork& net);

    std::vector<std::string> nodes_;
    std::vector<Link> links_;
    std::vector<UnicastPair> pairs_;
    std::vector<std::vector<LinkId>> source_links_;
};

/// ".mun" text: `network`, then `node <name>`, `link <tail> <head>` (repeat
/// for parallel links) and `pair <s> <t>` lines; `#` comments.
MUNetwork parse_network(std::string_view text);
std::string serialize_network(const MUNetwork& net, std::string_view header_comment = {});

/// Unit-capacity max-flow over regular links (BFS augmenting paths, links
/// scanned in id order).
int mincut(const MUNetwork& net, NodeId s, NodeId t);

/// Reversed line graph G of the network G' in which every source link of
/// pair i has tail t_i: vertex per link, edge e->f iff head(e) == tail'(f).
struct IndexGraph {
    Digraph graph;
    std::vector<LinkId> link_of_vertex;
    std::vector<Vertex> vertex_of_link;
};

IndexGraph to_index_graph(const MUNetwork& net);

/// Tail of link e in G' (t_i for source links of pair i).
NodeId prime_tail(const MUNetwork& net, LinkId e);

/// Adds a node ~s_i per pair that becomes the tail of the old source
/// links of pair i (which keep their ids and become regular); fresh source
/// links into ~s_i get ids after the old ones; pair i becomes (~s_i, t_i).
MUNetwork tilde_transform(const MUNetwork& net);

struct GnsCertificate {
    std::vector<LinkId> cut;                      // sorted
    std::optional<std::vector<int>> permutation;  // pi(i) for pair i

    std::size_t size() const noexcept { return cut.size(); }
    bool operator==(const GnsCertificate&) const = default;
};

struct GnsVerdict {
    std::optional<GnsCertificate> certificate;
    /// When refused: pairs i_1..i_r with s_{i_j} reaching t_{i_{j+1}} and
    /// s_{i_r} reaching t_{i_1}; a single entry i means s_i reaches t_i.
    std::vector<int> witness;

    bool accepted() const noexcept { return certificate.has_value(); }
};

/// Pair reachability digraph H of net - cut: reach[i][j] iff s_i -> t_j.
std::vector<std::vector<char>> pair_reachability(const MUNetwork& net, const std::vector<LinkId>& cut);

/// Polynomial-time GNS cut test through the pair digraph H. Throws
/// InputError for unknown or source-link ids.
GnsVerdict is_gns_cut(const MUNetwork& net, std::vector<LinkId> cut);

/// Smallest GNS cut over cuttable links (ties: lexicographically smallest
/// id list). CapacityError when cuttable links exceed caps.gns_cuttable.
GnsCertificate min_gns_cut_exact(const MUNetwork& net, const Options& options = {});

/// True iff removing `links` from G' leaves it acyclic.
bool is_feedback_edge_set(const MUNetwork& net, const std::vector<LinkId>& links);

/// Maps a feedback vertex set of to_index_graph(net) to a verified GNS cut
/// of tilde_transform(net) with the same cardinality.
GnsCertificate fvs_to_gns_cut(const MUNetwork& net, const VertexSet& fvs);

/// Inverse mapping: a GNS cut of tilde_transform(net) as links of G'.
std::vector<LinkId> gns_cut_to_fes(const MUNetwork& net, const GnsCertificate& tilde_cut);

}  // namespace gnskit
