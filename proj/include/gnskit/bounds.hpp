#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnskit/config.hpp"
#include "gnskit/cyclepack.hpp"
#include "gnskit/digraph.hpp"
#include "gnskit/indexcoding.hpp"
#include "gnskit/kvdoc.hpp"
#include "gnskit/network.hpp"
#include "gnskit/rational.hpp"

namespace gnskit {

struct MaisResult {
    std::size_t value = 0;
    VertexSet set;  // induces an acyclic subgraph
};

struct AlphaResult {
    std::size_t value = 0;
    VertexSet set;  // no edge in either direction between members
};

/// Minimum feedback vertex set by cycle branching with disjoint-cycle
/// lower bounds; the lexicographically smallest optimum is returned.
/// CapacityError above caps.mais_vertices.
VertexSet min_fvs_exact(const Digraph& g, const Caps& caps = {});

/// Complement of min_fvs_exact.
MaisResult mais_exact(const Digraph& g, const Caps& caps = {});

/// Maximum independent set of the underlying undirected graph
/// (lexicographically smallest optimum). CapacityError above
/// caps.alpha_vertices.
AlphaResult alpha_exact(const Digraph& g, const Caps& caps = {});

struct TensorBound {
    int q = 1;
    std::size_t mais = 0;  // mais of the q-fold strong power, exact
    std::size_t m_links = 0;
    double value = 0;      // m_links - mais^(1/q)
};

TensorBound tensor_bound(const Digraph& g, int q, std::size_t m_links, const Caps& caps = {});

struct ShannonBound {
    int power = 1;
    std::size_t alpha = 0;  // alpha of the strong power, exact
    double value = 0;       // alpha^(1/power)
};

ShannonBound shannon_capacity_lb(const Digraph& g, int power, const Caps& caps = {});

/// radicand^(1/q), exact for perfect powers.
double tensor_root(std::size_t radicand, int q);


struct ApproxSummary {
    std::vector<LinkId> links;
    Rational objective;
    bool fallback = false;
    bool regression_ok = false;
    double ratio_constant = 8.0;

    std::size_t weight() const noexcept { return links.size(); }
    std::optional<double> ratio() const;
    bool operator==(const ApproxSummary&) const = default;
};

struct CodeSummary {
    Residue p = 2;
    int t = 1;
    int r = 0;
    bool verified = false;

    Rational rate() const { return ratio(r, t); }
    bool operator==(const CodeSummary&) const = default;
};

struct TensorEntry {
    int q = 1;
    std::size_t mais = 0;                    // mais of the q-fold power
    std::optional<std::size_t> alpha;        // alpha of the q-fold power

    bool operator==(const TensorEntry&) const = default;
};

struct ReportCheck {
    std::string name;
    bool holds = false;
    bool operator==(const ReportCheck&) const = default;
};

struct SkippedComponent {
    std::string component;
    std::string reason;
    bool operator==(const SkippedComponent&) const = default;
};

/// The inequality chain r_CP <= m - beta <= m - mais <= approx weight for
/// one network, with certificates. Optional fields are empty when the
/// component was skipped (see `skipped`).
struct BoundReport {
    int m = 0;
    int k = 0;
    Residue field = 2;
    std::optional<std::size_t> mais;
    std::optional<VertexSet> fvs;
    std::optional<Rational> rcp;
    std::string rcp_source;  // "exact" or "spreading-metric"
    std::optional<CyclePacking> packing;
    std::optional<ApproxSummary> approx;
    std::optional<CodeSummary> code;
    std::optional<GnsCertificate> gns_tilde;  // exact, on the tilde network
    std::optional<GnsCertificate> gns_plain;  // exact, on the network itself
    std::optional<GnsCertificate> gns_approx; // from the approximate FES, tilde network
    std::vector<TensorEntry> tensor;
    std::vector<SkippedComponent> skipped;
    std::vector<ReportCheck> checks;

    /// m - mais(q-fold power)^(1/q) per tensor entry.
    std::vector<double> tensor_values() const;
    /// alpha(q-fold power)^(1/q) where computed.
    std::vector<std::optional<double>> shannon_values() const;
    bool chain_holds() const;

    bool operator==(const BoundReport&) const = default;
};

struct ReportOptions {
    std::vector<int> qs{1};
    Residue field = 2;
    bool exact_gns = false;
    double ratio_constant = 8.0;
    Options options;
};

/// Computes every component that fits its cap and records a check for
/// each inequality whose two sides were both computed.
BoundReport bound_report(const MUNetwork& net, const ReportOptions& opts = {});

KvNode report_to_kv(const BoundReport& report);
BoundReport report_from_kv(const KvNode& node);

/// Machine form is render_kv(report_to_kv(r)); the human form uses the
/// same field names with aligned values and a chain summary.
std::string render_report_machine(const BoundReport& report);
std::string render_report_human(const BoundReport& report);
BoundReport parse_report(std::string_view machine_text);

}  // namespace gnskit
