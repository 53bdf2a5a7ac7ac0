#include "gnskit/network.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "gnskit/error.hpp"
#include "gnskit/parallel.hpp"
#include "text_util.hpp"

namespace gnskit {

namespace {

struct Arc {
    NodeId tail;
    NodeId head;
};

/// Unit-capacity max-flow; arcs are scanned in index order.
int unit_max_flow(int node_count, const std::vector<Arc>& arcs, NodeId s, NodeId t) {
    if (s == t) return 0;
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(node_count));
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        incident[static_cast<std::size_t>(arcs[a].tail)].push_back(static_cast<int>(a));
        incident[static_cast<std::size_t>(arcs[a].head)].push_back(static_cast<int>(a));
    }
    for (auto& list : incident) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    std::vector<char> flow(arcs.size(), 0);
    int value = 0;
    for (;;) {
        std::vector<int> via(static_cast<std::size_t>(node_count), -2);  // arc used to reach node
        via[static_cast<std::size_t>(s)] = -1;
        std::deque<NodeId> queue{s};
        while (!queue.empty() && via[static_cast<std::size_t>(t)] == -2) {
            const NodeId v = queue.front();
            queue.pop_front();
            for (int a : incident[static_cast<std::size_t>(v)]) {
                const auto& arc = arcs[static_cast<std::size_t>(a)];
                NodeId w = -1;
                if (arc.tail == v && !flow[static_cast<std::size_t>(a)]) w = arc.head;
                else if (arc.head == v && flow[static_cast<std::size_t>(a)]) w = arc.tail;
                if (w < 0 || via[static_cast<std::size_t>(w)] != -2) continue;
                via[static_cast<std::size_t>(w)] = a;
                queue.push_back(w);
            }
        }
        if (via[static_cast<std::size_t>(t)] == -2) return value;
        for (NodeId v = t; v != s;) {
            const int a = via[static_cast<std::size_t>(v)];
            const auto& arc = arcs[static_cast<std::size_t>(a)];
            if (arc.head == v && !flow[static_cast<std::size_t>(a)]) {
                flow[static_cast<std::size_t>(a)] = 1;
                v = arc.tail;
            } else {
                flow[static_cast<std::size_t>(a)] = 0;
                v = arc.head;
            }
        }
        ++value;
    }
}

/// Kahn's algorithm on a multigraph.
bool arcs_acyclic(int node_count, const std::vector<Arc>& arcs) {
    std::vector<int> indegree(static_cast<std::size_t>(node_count), 0);
    std::vector<std::vector<NodeId>> succ(static_cast<std::size_t>(node_count));
    for (const auto& a : arcs) {
        ++indegree[static_cast<std::size_t>(a.head)];
        succ[static_cast<std::size_t>(a.tail)].push_back(a.head);
    }
    std::vector<NodeId> ready;
    for (NodeId v = 0; v < node_count; ++v)
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    int seen = 0;
    while (!ready.empty()) {
        const NodeId v = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId w : succ[static_cast<std::size_t>(v)])
            if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
    }
    return seen == node_count;
}

std::vector<Arc> regular_arcs(const MUNetwork& net) {
    std::vector<Arc> arcs;
    for (const auto& link : net.links())
        if (link.tail) arcs.push_back({*link.tail, link.head});
    return arcs;
}

}  // namespace

MUNetwork MUNetwork::build(std::vector<std::string> nodes, const std::vector<RegularLinkSpec>& links,
                           std::vector<UnicastPair> pairs) {
    const int n = static_cast<int>(nodes.size());
    std::set<std::string> names;
    for (const auto& name : nodes) {
        if (name.empty()) throw InputError("empty node name");
        if (!names.insert(name).second) throw InputError("duplicate node '" + name + "'");
    }
    auto check_node = [n](NodeId v) {
        if (v < 0 || v >= n) throw InputError("node index " + std::to_string(v) + " out of range");
    };
    std::vector<Arc> arcs;
    for (const auto& l : links) {
        check_node(l.tail);
        check_node(l.head);
        arcs.push_back({l.tail, l.head});
    }
    if (!arcs_acyclic(n, arcs)) throw InputError("regular links contain a directed cycle");
    if (pairs.empty()) throw InputError("network has no source/destination pairs");

    MUNetwork net;
    net.nodes_ = std::move(nodes);
    for (const auto& l : links) net.links_.push_back({l.tail, l.head, std::nullopt});
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [s, t] = pairs[i];
        check_node(s);
        check_node(t);
        if (s == t) throw InputError("pair " + std::to_string(i) + " has identical source and destination");
        const int cut = unit_max_flow(n, arcs, s, t);
        if (cut == 0)
            throw InputError("pair " + std::to_string(i) + " (" + net.nodes_[static_cast<std::size_t>(s)] + " -> " +
                             net.nodes_[static_cast<std::size_t>(t)] + ") is unreachable: mincut is 0");
        std::vector<LinkId> ids;
        for (int c = 0; c < cut; ++c) {
            ids.push_back(static_cast<LinkId>(net.links_.size()));
            net.links_.push_back({std::nullopt, s, static_cast<int>(i)});
        }
        net.source_links_.push_back(std::move(ids));
    }
    net.pairs_ = std::move(pairs);
    return net;
}

int MUNetwork::regular_link_count() const noexcept {
    return static_cast<int>(std::count_if(links_.begin(), links_.end(), [](const Link& l) { return !l.is_source(); }));
}

std::optional<NodeId> MUNetwork::find_node(std::string_view name) const {
    for (std::size_t v = 0; v < nodes_.size(); ++v)
        if (nodes_[v] == name) return static_cast<NodeId>(v);
    return std::nullopt;
}

std::vector<LinkId> MUNetwork::cuttable_links() const {
    std::vector<LinkId> ids;
    for (std::size_t e = 0; e < links_.size(); ++e)
        if (!links_[e].is_source()) ids.push_back(static_cast<LinkId>(e));
    return ids;
}

MUNetwork parse_network(std::string_view text) {
    detail::LineReader reader(text);
    bool header = false;
    std::vector<std::string> nodes;
    std::map<std::string, NodeId, std::less<>> index;
    std::vector<RegularLinkSpec> links;
    std::vector<UnicastPair> pairs;
    auto lookup = [&](const std::string& name) {
        const auto it = index.find(name);
        if (it == index.end()) throw reader.error("unknown node '" + name + "'");
        return it->second;
    };
    while (auto line = reader.next()) {
        const auto& tok = line->tokens;
        if (!header) {
            if (tok.size() != 1 || tok[0] != "network") throw reader.error("expected header 'network'");
            header = true;
            continue;
        }
        if (tok[0] == "node") {
            if (tok.size() != 2) throw reader.error("expected 'node <name>'");
            if (tok[1] == "-") throw reader.error("'-' is not a valid node name");
            if (!index.emplace(tok[1], static_cast<NodeId>(nodes.size())).second)
                throw reader.error("duplicate node '" + tok[1] + "'");
            nodes.push_back(tok[1]);
        } else if (tok[0] == "link") {
            if (tok.size() == 2 || (tok.size() == 3 && tok[1] == "-"))
                throw reader.error("tail-less source links are synthesized and may not be given explicitly");
            if (tok.size() != 3) throw reader.error("expected 'link <tail> <head>'");
            links.push_back({lookup(tok[1]), lookup(tok[2])});
        } else if (tok[0] == "pair") {
            if (tok.size() != 3) throw reader.error("expected 'pair <s> <t>'");
            pairs.push_back({lookup(tok[1]), lookup(tok[2])});
        } else {
            throw reader.error("unknown directive '" + tok[0] + "'");
        }
    }
    if (!header) throw InputError("empty network file");
    return MUNetwork::build(std::move(nodes), links, std::move(pairs));
}

std::string serialize_network(const MUNetwork& net, std::string_view header_comment) {
    std::ostringstream out;
    detail::write_comment(out, header_comment);
    out << "network\n";
    for (const auto& name : net.node_names()) out << "node " << name << '\n';
    for (const auto& link : net.links())
        if (link.tail) out << "link " << net.node_name(*link.tail) << ' ' << net.node_name(link.head) << '\n';
    for (const auto& [s, t] : net.pairs()) out << "pair " << net.node_name(s) << ' ' << net.node_name(t) << '\n';
    return out.str();
}

int mincut(const MUNetwork& net, NodeId s, NodeId t) {
    if (s < 0 || s >= net.node_count() || t < 0 || t >= net.node_count()) throw InputError("mincut: unknown node");
    return unit_max_flow(net.node_count(), regular_arcs(net), s, t);
}

NodeId prime_tail(const MUNetwork& net, LinkId e) {
    const auto& link = net.link(e);
    if (link.tail) return *link.tail;
    return net.pair(*link.source_of).destination;
}

IndexGraph to_index_graph(const MUNetwork& net) {
    const int m = net.link_count();
    std::vector<std::vector<LinkId>> leaving(static_cast<std::size_t>(net.node_count()));
    for (LinkId e = 0; e < m; ++e) leaving[static_cast<std::size_t>(prime_tail(net, e))].push_back(e);
    std::vector<Edge> edges;
    for (LinkId e = 0; e < m; ++e)
        for (LinkId f : leaving[static_cast<std::size_t>(net.link(e).head)]) edges.push_back({e, f});
    IndexGraph result{Digraph(m, edges), {}, {}};
    std::vector<std::string> labels;
    for (LinkId e = 0; e < m; ++e) {
        result.link_of_vertex.push_back(e);
        result.vertex_of_link.push_back(e);
        labels.push_back("e" + std::to_string(e) + ":" + net.node_name(prime_tail(net, e)) + "->" +
                         net.node_name(net.link(e).head));
    }
    result.graph.set_labels(std::move(labels));
    return result;
}

MUNetwork tilde_transform(const MUNetwork& net) {
    MUNetwork out = net;
    std::set<std::string> taken(net.node_names().begin(), net.node_names().end());
    std::vector<NodeId> tilde(static_cast<std::size_t>(net.pair_count()));
    for (int i = 0; i < net.pair_count(); ++i) {
        std::string name = "~" + net.node_name(net.pair(i).source);
        if (taken.count(name)) name += "." + std::to_string(i);
        while (taken.count(name)) name += "'";
        taken.insert(name);
        tilde[static_cast<std::size_t>(i)] = static_cast<NodeId>(out.nodes_.size());
        out.nodes_.push_back(name);
    }
    for (int i = 0; i < net.pair_count(); ++i) {
        const NodeId st = tilde[static_cast<std::size_t>(i)];
        for (LinkId e : net.source_links(i)) out.links_[static_cast<std::size_t>(e)] = {st, net.pair(i).source, std::nullopt};
        std::vector<LinkId> fresh;
        for (std::size_t c = 0; c < net.source_links(i).size(); ++c) {
            fresh.push_back(static_cast<LinkId>(out.links_.size()));
            out.links_.push_back({std::nullopt, st, i});
        }
        out.source_links_[static_cast<std::size_t>(i)] = std::move(fresh);
        out.pairs_[static_cast<std::size_t>(i)].source = st;
    }
    return out;
}

std::vector<std::vector<char>> pair_reachability(const MUNetwork& net, const std::vector<LinkId>& cut) {
    std::vector<char> removed(static_cast<std::size_t>(net.link_count()), 0);
    for (LinkId e : cut) removed[static_cast<std::size_t>(e)] = 1;
    std::vector<std::vector<NodeId>> succ(static_cast<std::size_t>(net.node_count()));
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const auto& link = net.link(e);
        if (link.tail && !removed[static_cast<std::size_t>(e)]) succ[static_cast<std::size_t>(*link.tail)].push_back(link.head);
    }
    const int k = net.pair_count();
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(k), std::vector<char>(static_cast<std::size_t>(k), 0));
    for (int i = 0; i < k; ++i) {
        std::vector<char> seen(static_cast<std::size_t>(net.node_count()), 0);
        std::vector<NodeId> stack{net.pair(i).source};
        seen[static_cast<std::size_t>(net.pair(i).source)] = 1;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : succ[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        for (int j = 0; j < k; ++j) reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = seen[static_cast<std::size_t>(net.pair(j).destination)];
    }
    return reach;
}

namespace {

void validate_cut(const MUNetwork& net, std::vector<LinkId>& cut) {
    std::sort(cut.begin(), cut.end());
    cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
    for (LinkId e : cut) {
        if (e < 0 || e >= net.link_count()) throw InputError("unknown link id " + std::to_string(e));
        if (net.link(e).is_source()) throw InputError("link " + std::to_string(e) + " is a source link and cannot be cut");
    }
}

GnsVerdict judge(const MUNetwork& net, std::vector<LinkId> cut) {
    const auto reach = pair_reachability(net, cut);
    const int k = net.pair_count();
    GnsVerdict verdict;
    for (int i = 0; i < k; ++i)
        if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]) {
            verdict.witness = {i};
            return verdict;
        }
    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) edges.push_back({i, j});
    const Digraph h(k, edges);
    if (auto cycle = find_cycle(h)) {
        verdict.witness = std::move(*cycle);
        return verdict;
    }
    // topological order, smallest ready pair first
    std::vector<int> indegree(static_cast<std::size_t>(k), 0);
    for (const auto& [i, j] : edges) ++indegree[static_cast<std::size_t>(j)];
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < k; ++i)
        if (indegree[static_cast<std::size_t>(i)] == 0) ready.push(i);
    std::vector<int> pi(static_cast<std::size_t>(k), -1);
    int position = 0;
    while (!ready.empty()) {
        const int i = ready.top();
        ready.pop();
        pi[static_cast<std::size_t>(i)] = position++;
        for (int j : h.out(i))
            if (--indegree[static_cast<std::size_t>(j)] == 0) ready.push(j);
    }
    verdict.certificate = GnsCertificate{std::move(cut), std::move(pi)};
    return verdict;
}

}  // namespace

GnsVerdict is_gns_cut(const MUNetwork& net, std::vector<LinkId> cut) {
    validate_cut(net, cut);
    return judge(net, std::move(cut));
}

GnsCertificate min_gns_cut_exact(const MUNetwork& net, const Options& options) {
    const auto cuttable = net.cuttable_links();
    const std::size_t c = cuttable.size();
    if (c > options.caps.gns_cuttable)
        throw CapacityError("gns_cuttable", options.caps.gns_cuttable,
                            "exact GNS search over " + std::to_string(c) +
                                " cuttable links refused; use the approximation instead");
    for (std::size_t size = 0; size <= c; ++size) {
        // all size-subsets in lexicographic order
        std::vector<std::vector<LinkId>> subsets;
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            std::vector<LinkId> subset;
            for (std::size_t i : idx) subset.push_back(cuttable[i]);
            subsets.push_back(std::move(subset));
            std::size_t pos = size;
            while (pos > 0 && idx[pos - 1] == c - size + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
        std::atomic<std::size_t> best{subsets.size()};
        const std::size_t chunk = 64;
        const std::size_t chunks = (subsets.size() + chunk - 1) / chunk;
        parallel_for(chunks, options.worker_count(), [&](std::size_t ci) {
            for (std::size_t i = ci * chunk; i < std::min(subsets.size(), (ci + 1) * chunk); ++i) {
                if (i >= best.load()) return;
                if (judge(net, subsets[i]).accepted()) {
                    std::size_t current = best.load();
                    while (i < current && !best.compare_exchange_weak(current, i)) {
                    }
                    return;
                }
            }
        });
        if (best.load() < subsets.size()) return *judge(net, subsets[best.load()]).certificate;
    }
    throw InvariantError("removing every cuttable link did not yield a GNS cut");
}

bool is_feedback_edge_set(const MUNetwork& net, const std::vector<LinkId>& links) {
    std::vector<char> removed(static_cast<std::size_t>(net.link_count()), 0);
    for (LinkId e : links) {
        if (e < 0 || e >= net.link_count()) throw InputError("unknown link id " + std::to_string(e));
        removed[static_cast<std::size_t>(e)] = 1;
    }
    std::vector<Arc> arcs;
    for (LinkId e = 0; e < net.link_count(); ++e)
        if (!removed[static_cast<std::size_t>(e)]) arcs.push_back({prime_tail(net, e), net.link(e).head});
    return arcs_acyclic(net.node_count(), arcs);
}

GnsCertificate fvs_to_gns_cut(const MUNetwork& net, const VertexSet& fvs) {
    const auto index = to_index_graph(net);
    for (Vertex v : fvs)
        if (v < 0 || v >= index.graph.order()) throw InputError("vertex " + std::to_string(v) + " out of range");
    if (auto cycle = residual_cycle(index.graph, fvs)) {
        std::string text;
        for (Vertex v : *cycle) text += (text.empty() ? "" : " ") + std::to_string(v);
        throw ContractError("not a feedback vertex set; residual cycle: " + text);
    }
    std::vector<LinkId> cut;
    for (Vertex v : fvs) cut.push_back(index.link_of_vertex[static_cast<std::size_t>(v)]);
    auto verdict = is_gns_cut(tilde_transform(net), cut);
    if (!verdict.accepted()) throw InvariantError("mapped feedback vertex set is not a GNS cut of the tilde network");
    return *verdict.certificate;
}

std::vector<LinkId> gns_cut_to_fes(const MUNetwork& net, const GnsCertificate& tilde_cut) {
    const auto verdict = is_gns_cut(tilde_transform(net), tilde_cut.cut);
    if (!verdict.accepted()) throw ContractError("not a GNS cut of the tilde network");
    std::vector<LinkId> fes = verdict.certificate->cut;
    for (LinkId e : fes)
        if (e >= net.link_count()) throw InvariantError("tilde cut contains a link without a preimage");
    if (!is_feedback_edge_set(net, fes)) throw InvariantError("preimage of a GNS cut is not a feedback edge set");
    return fes;
}

}  // namespace gnskit
