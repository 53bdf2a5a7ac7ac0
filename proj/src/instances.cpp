#include "gnskit/instances.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

#include "gnskit/error.hpp"

namespace gnskit {

namespace {

/// Uniform double in [0, 1) from the top 53 bits.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string subset_label(const std::vector<int>& subset) {
    std::string label = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) label += (i ? "," : "") + std::to_string(subset[i]);
    return label + "}";
}

std::vector<int> parse_subset_label(const std::string& label) {
    if (label.size() < 2 || label.front() != '{' || label.back() != '}')
        throw InputError("vertex label '" + label + "' is not a subset");
    std::vector<int> subset;
    std::string body = label.substr(1, label.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        const auto comma = body.find(',', pos);
        const std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            const int value = std::stoi(item, &used);
            if (used != item.size() || value < 0) throw std::invalid_argument(item);
            subset.push_back(value);
        } catch (const std::exception&) {
            throw InputError("vertex label '" + label + "' is not a subset");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::sort(subset.begin(), subset.end());
    return subset;
}

}  // namespace

Digraph lubetzky_stav(const LSParams& params, const Caps& caps) {
    const auto [r, s, p, b, complemented] = params;
    if (s < 1 || s > r) throw InputError("subset size must satisfy 1 <= s <= r");
    if (!is_prime(p)) throw InputError("p must be prime");
    if (b < 1) throw InputError("exponent b must be positive");
    // C(r, s) without overflow past the cap
    std::size_t count = 1;
    for (int i = 1; i <= s; ++i) {
        count = count * static_cast<std::size_t>(r - s + i) / static_cast<std::size_t>(i);
        if (count > caps.ls_vertices)
            throw CapacityError("ls_vertices", caps.ls_vertices, "Lubetzky-Stav graph has too many vertices");
    }
    long long modulus = 1;
    for (int i = 0; i < b; ++i) {
        modulus *= p;
        if (modulus > r + 1) {
            modulus = r + 2;  // |X & Y| <= r never reaches modulus - 1
            break;
        }
    }

    // colexicographic order: compare the largest elements first
    std::vector<std::vector<int>> subsets;
    std::vector<int> current(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) current[static_cast<std::size_t>(i)] = i;
    for (;;) {
        subsets.push_back(current);
        int i = 0;
        while (i + 1 < s && current[static_cast<std::size_t>(i)] + 1 == current[static_cast<std::size_t>(i + 1)]) ++i;
        if (current[static_cast<std::size_t>(i)] + 1 >= (i + 1 < s ? current[static_cast<std::size_t>(i + 1)] : r)) break;
        ++current[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) current[static_cast<std::size_t>(j)] = j;
    }

    const int n = static_cast<int>(subsets.size());
    std::vector<Edge> edges;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            std::vector<int> common;
            std::set_intersection(subsets[static_cast<std::size_t>(x)].begin(), subsets[static_cast<std::size_t>(x)].end(),
                                  subsets[static_cast<std::size_t>(y)].begin(), subsets[static_cast<std::size_t>(y)].end(),
                                  std::back_inserter(common));
            const bool adjacent = static_cast<long long>(common.size()) % modulus == modulus - 1;
            if (adjacent != complemented) edges.push_back({x, y});
        }
    Digraph g(n, edges);
    std::vector<std::string> labels;
    for (const auto& subset : subsets) labels.push_back(subset_label(subset));
    g.set_labels(std::move(labels));
    return g;
}

MUNetwork network_from_side_info_graph(const Digraph& g) {
    const int k = g.order();
    if (k < 1) throw InputError("side-information graph needs at least one vertex");
    std::vector<std::string> nodes;
    for (int i = 0; i < k; ++i) nodes.push_back("s" + std::to_string(i));
    for (int i = 0; i < k; ++i) nodes.push_back("t" + std::to_string(i));
    const NodeId a = 2 * k;
    const NodeId b = 2 * k + 1;
    nodes.push_back("a");
    nodes.push_back("b");
    std::vector<RegularLinkSpec> links;
    for (const auto& [i, j] : g.edges()) links.push_back({i, k + j});
    links.push_back({a, b});
    for (int i = 0; i < k; ++i) links.push_back({i, a});
    for (int i = 0; i < k; ++i) links.push_back({b, k + i});
    std::vector<UnicastPair> pairs;
    for (int i = 0; i < k; ++i) pairs.push_back({i, k + i});
    return MUNetwork::build(std::move(nodes), links, std::move(pairs));
}

bool is_vertex_transitive_under_ground_permutations(const Digraph& g) {
    if (!g.has_labels()) throw InputError("vertex-transitivity check needs subset labels");
    const int n = g.order();
    std::map<std::vector<int>, Vertex> index;
    int r = 0;
    for (Vertex v = 0; v < n; ++v) {
        auto subset = parse_subset_label(g.label(v));
        if (!subset.empty()) r = std::max(r, subset.back() + 1);
        if (!index.emplace(std::move(subset), v).second) throw InputError("duplicate subset label");
    }
    std::vector<std::vector<Vertex>> images;  // per generator
    for (int i = 0; i + 1 < r; ++i) {
        std::vector<Vertex> image(static_cast<std::size_t>(n));
        for (const auto& [subset, v] : index) {
            std::vector<int> moved;
            for (int x : subset) moved.push_back(x == i ? i + 1 : x == i + 1 ? i : x);
            std::sort(moved.begin(), moved.end());
            const auto it = index.find(moved);
            if (it == index.end()) return false;
            image[static_cast<std::size_t>(v)] = it->second;
        }
        for (const auto& [u, v] : g.edges())
            if (!g.has_edge(image[static_cast<std::size_t>(u)], image[static_cast<std::size_t>(v)])) return false;
        images.push_back(std::move(image));
    }
    if (n == 0) return true;
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::vector<Vertex> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (const auto& image : images) {
            const Vertex w = image[static_cast<std::size_t>(v)];
            if (!reached[static_cast<std::size_t>(w)]) {
                reached[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    return std::all_of(reached.begin(), reached.end(), [](char c) { return c != 0; });
}

Digraph random_digraph(int n, double prob, std::uint64_t seed) {
    if (n < 0) throw InputError("negative vertex count");
    if (!(prob >= 0 && prob <= 1)) throw InputError("edge probability must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && uniform(rng) < prob) edges.push_back({u, v});
    return Digraph(n, edges);
}

MUNetwork random_dag_network(const DagNetworkParams& params, std::uint64_t seed) {
    if (params.nodes < 2) throw InputError("a DAG network needs at least two nodes");
    if (params.pairs < 1) throw InputError("at least one pair is required");
    if (!(params.prob >= 0 && params.prob <= 1) || !(params.parallel >= 0 && params.parallel <= 1))
        throw InputError("probabilities must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    const int n = params.nodes;
    for (int attempt = 0; attempt < std::max(1, params.max_retries); ++attempt) {
        std::vector<RegularLinkSpec> links;
        std::vector<std::vector<char>> reach(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (uniform(rng) < params.prob) {
                    links.push_back({u, v});
                    if (uniform(rng) < params.parallel) links.push_back({u, v});
                }
        for (int u = n - 1; u >= 0; --u)
            for (const auto& l : links)
                if (l.tail == u) {
                    reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(l.head)] = 1;
                    for (int w = 0; w < n; ++w)
                        if (reach[static_cast<std::size_t>(l.head)][static_cast<std::size_t>(w)]) reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] = 1;
                }
        std::vector<UnicastPair> candidates;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) candidates.push_back({u, v});
        if (static_cast<int>(candidates.size()) < params.pairs) continue;
        std::vector<UnicastPair> pairs;
        for (int i = 0; i < params.pairs; ++i) {
            const auto pick = static_cast<std::size_t>(rng() % candidates.size());
            pairs.push_back(candidates[pick]);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        std::vector<std::string> names;
        for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
        return MUNetwork::build(std::move(names), links, std::move(pairs));
    }
    throw InputError("no random DAG with " + std::to_string(params.pairs) + " reachable pairs within the retry limit");
}

}  // namespace gnskit
