#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "gnskit/bounds.hpp"
#include "gnskit/error.hpp"
#include "text_util.hpp"

namespace gnskit {

std::optional<double> ApproxSummary::ratio() const {
    if (sgn(objective) <= 0) return std::nullopt;
    return static_cast<double>(weight()) / to_double(objective);
}

std::vector<double> BoundReport::tensor_values() const {
    std::vector<double> values;
    for (const auto& e : tensor) values.push_back(static_cast<double>(m) - tensor_root(e.mais, e.q));
    return values;
}

std::vector<std::optional<double>> BoundReport::shannon_values() const {
    std::vector<std::optional<double>> values;
    for (const auto& e : tensor) values.push_back(e.alpha ? std::optional<double>(tensor_root(*e.alpha, e.q)) : std::nullopt);
    return values;
}

bool BoundReport::chain_holds() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.holds; });
}

namespace {

Rational power(const Rational& base, int q) {
    Rational result = 1;
    for (int i = 0; i < q; ++i) result *= base;
    return result;
}

template <class Fn>
bool attempt(BoundReport& report, const std::string& component, Fn&& fn) {
    try {
        fn();
        return true;
    } catch (const CapacityError& e) {
        report.skipped.push_back({component, e.what()});
        return false;
    }
}

}  // namespace

BoundReport bound_report(const MUNetwork& net, const ReportOptions& opts) {
    const Caps& caps = opts.options.caps;
    if (!is_prime(opts.field)) throw InputError("field size must be prime");
    for (int q : opts.qs)
        if (q < 1) throw InputError("tensor powers must be positive");
    const IndexGraph index = to_index_graph(net);
    const Digraph& g = index.graph;

    BoundReport report;
    report.m = net.link_count();
    report.k = net.pair_count();
    report.field = opts.field;
    const Rational m(report.m);

    attempt(report, "mais", [&] {
        const VertexSet fvs = min_fvs_exact(g, caps);
        report.mais = static_cast<std::size_t>(report.m) - fvs.size();
        report.fvs = fvs;
    });
    attempt(report, "rcp_exact", [&] {
        report.packing = rcp_exact(g, caps);
        report.rcp = report.packing->value;
        report.rcp_source = "exact";
    });
    attempt(report, "approx", [&] {
        const FesApprox fes = subset_fes_approx(net, opts.options);
        ApproxSummary summary{fes.links, fes.objective, fes.used_fallback, false, opts.ratio_constant};
        summary.regression_ok = within_regression_bound(fes.weight, report.k, fes.objective, opts.ratio_constant);
        report.approx = summary;
        report.gns_approx = fvs_to_gns_cut(net, fes_to_fvs(net, fes.links));
        if (!report.rcp) {
            report.rcp = fes.objective;
            report.rcp_source = "spreading-metric";
        }
    });
    if (report.packing)
        attempt(report, "code", [&] {
            const IndexCode code = build_cycle_code(g, *report.packing, opts.field, opts.options);
            report.code = CodeSummary{code.p, code.t, code.r(), verify_index_code(g, code).ok()};
        });
    if (opts.exact_gns) {
        attempt(report, "gns_tilde", [&] { report.gns_tilde = min_gns_cut_exact(tilde_transform(net), opts.options); });
        attempt(report, "gns_plain", [&] { report.gns_plain = min_gns_cut_exact(net, opts.options); });
    }
    for (int q : opts.qs) {
        TensorEntry entry{q, 0, std::nullopt};
        const std::string suffix = "_q" + std::to_string(q);
        if (!attempt(report, "tensor" + suffix, [&] { entry.mais = tensor_bound(g, q, static_cast<std::size_t>(report.m), caps).mais; }))
            continue;
        attempt(report, "shannon" + suffix, [&] { entry.alpha = shannon_capacity_lb(g, q, caps).alpha; });
        report.tensor.push_back(entry);
    }

    auto check = [&](std::string name, bool holds) { report.checks.push_back({std::move(name), holds}); };
    const std::optional<Rational> mais = report.mais ? std::optional<Rational>(Rational(static_cast<long>(*report.mais))) : std::nullopt;
    const std::optional<Rational> rate = report.code ? std::optional<Rational>(report.code->rate()) : std::nullopt;
    if (report.rcp && mais) check("rcp_le_m_minus_mais", *report.rcp <= m - *mais);
    if (mais && rate) check("mais_le_code_rate", *mais <= *rate);
    if (rate && report.packing) check("code_rate_eq_m_minus_rcp", *rate == m - report.packing->value);
    if (report.code) check("code_verified", report.code->verified);
    if (report.approx) {
        const Rational weight(static_cast<long>(report.approx->weight()));
        if (mais) check("m_minus_mais_le_approx", m - *mais <= weight);
        if (report.rcp) check("rcp_le_approx", *report.rcp <= weight);
        if (report.packing) check("metric_eq_rcp", report.approx->objective == report.packing->value);
        check("regression_bound", report.approx->regression_ok);
        if (report.gns_approx) check("approx_gns_size_eq_weight", report.gns_approx->size() == report.approx->weight());
    }
    if (report.gns_tilde && mais) check("gns_tilde_eq_m_minus_mais", Rational(static_cast<long>(report.gns_tilde->size())) == m - *mais);
    if (report.gns_plain && mais) check("gns_plain_ge_m_minus_mais", Rational(static_cast<long>(report.gns_plain->size())) >= m - *mais);
    if (report.gns_tilde && report.gns_approx) check("gns_tilde_le_approx", report.gns_tilde->size() <= report.gns_approx->size());
    for (const auto& e : report.tensor) {
        const std::string prefix = "tensor_q" + std::to_string(e.q) + "_";
        const Rational mais_q(static_cast<long>(e.mais));
        if (mais) check(prefix + "mais_ge_mais_power", mais_q >= power(*mais, e.q));
        if (rate) check(prefix + "mais_le_code_power", mais_q <= power(*rate, e.q));
        if (e.alpha) {
            check(prefix + "alpha_le_mais", *e.alpha <= e.mais);
            if (rate) check(prefix + "alpha_le_code_power", Rational(static_cast<long>(*e.alpha)) <= power(*rate, e.q));
        }
    }
    return report;
}

namespace {

std::string join(const std::vector<int>& values) {
    if (values.empty()) return "none";
    std::string out;
    for (int v : values) out += (out.empty() ? "" : " ") + std::to_string(v);
    return out;
}

std::string join(const VertexSet& set) { return join(set.members()); }

std::vector<int> split_ints(const std::string& text) {
    if (text == "none") return {};
    std::vector<int> values;
    for (const auto& token : detail::LineReader::split(text)) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size()) throw InputError("expected integers, got '" + text + "'");
        values.push_back(v);
    }
    return values;
}

long parse_long(const std::string& text) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw InputError("expected an integer, got '" + text + "'");
    return v;
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

/// Shortest representation that reads back to the same double.
std::string exact_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

double parse_double(const std::string& text) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw InputError("expected a number, got '" + text + "'");
    return v;
}

bool parse_flag(const std::string& text, const char* yes, const char* no) {
    if (text == yes) return true;
    if (text == no) return false;
    throw InputError("expected '" + std::string(yes) + "' or '" + no + "', got '" + text + "'");
}

void add_gns(KvNode& parent, const char* key, const std::optional<GnsCertificate>& cert) {
    if (!cert) return;
    auto& node = parent.add(key);
    node.add("size", std::to_string(cert->size()));
    node.add("cut", join(cert->cut));
    if (cert->permutation) node.add("permutation", join(*cert->permutation));
}

std::optional<GnsCertificate> read_gns(const KvNode& parent, const char* key) {
    const KvNode* node = parent.find(key);
    if (!node) return std::nullopt;
    GnsCertificate cert{split_ints(node->at("cut").value), std::nullopt};
    if (const auto* perm = node->find("permutation")) cert.permutation = split_ints(perm->value);
    if (static_cast<std::size_t>(parse_long(node->at("size").value)) != cert.size()) throw InputError("GNS cut size does not match its link list");
    return cert;
}

}  // namespace

KvNode report_to_kv(const BoundReport& r) {
    KvNode root{"report", {}, {}};
    root.add("m", std::to_string(r.m));
    root.add("k", std::to_string(r.k));
    root.add("field", std::to_string(r.field));
    if (r.mais) root.add("mais", std::to_string(*r.mais));
    if (r.fvs) root.add("fvs", join(*r.fvs));
    if (r.rcp) {
        root.add("rcp", to_string(*r.rcp));
        root.add("rcp_source", r.rcp_source);
    }
    if (r.packing) {
        auto& node = root.add("packing");
        for (const auto& [cycle, weight] : r.packing->assignments) node.add("cycle", to_string(weight) + " " + join(cycle));
    }
    if (r.approx) {
        auto& node = root.add("approx");
        node.add("links", join(r.approx->links));
        node.add("weight", std::to_string(r.approx->weight()));
        node.add("objective", to_string(r.approx->objective));
        if (const auto ratio = r.approx->ratio()) node.add("ratio", format_double(*ratio));
        node.add("ratio_constant", exact_double(r.approx->ratio_constant));
        node.add("regression_bound", r.approx->regression_ok ? "ok" : "FAIL");
        node.add("fallback", r.approx->fallback ? "yes" : "no");
    }
    if (r.code) {
        auto& node = root.add("code");
        node.add("p", std::to_string(r.code->p));
        node.add("t", std::to_string(r.code->t));
        node.add("r", std::to_string(r.code->r));
        node.add("rate", to_string(r.code->rate()));
        node.add("verified", r.code->verified ? "yes" : "no");
        root.add("co_rate", to_string(Rational(r.m) - r.code->rate()));
    }
    if (r.mais || r.code)
        root.add("beta_bracket", (r.mais ? std::to_string(*r.mais) : "?") + " " + (r.code ? to_string(r.code->rate()) : "?"));
    add_gns(root, "gns_tilde", r.gns_tilde);
    add_gns(root, "gns_plain", r.gns_plain);
    add_gns(root, "gns_approx", r.gns_approx);
    if (!r.tensor.empty()) {
        auto& node = root.add("tensor_bounds");
        const auto values = r.tensor_values();
        const auto shannon = r.shannon_values();
        for (std::size_t i = 0; i < r.tensor.size(); ++i) {
            auto& entry = node.add("bound");
            entry.add("q", std::to_string(r.tensor[i].q));
            entry.add("mais", std::to_string(r.tensor[i].mais));
            entry.add("value", format_double(values[i]));
            if (r.tensor[i].alpha) {
                entry.add("alpha", std::to_string(*r.tensor[i].alpha));
                entry.add("shannon_lb", format_double(*shannon[i]));
            }
        }
    }
    if (!r.skipped.empty()) {
        auto& node = root.add("skipped");
        for (const auto& s : r.skipped) node.add(s.component, s.reason);
    }
    auto& checks = root.add("checks");
    for (const auto& c : r.checks) checks.add(c.name, c.holds ? "ok" : "FAIL");
    root.add("chain", r.chain_holds() ? "ok" : "FAIL");
    return root;
}

BoundReport report_from_kv(const KvNode& root) {
    if (root.key != "report") throw InputError("expected a 'report' document");
    BoundReport r;
    r.m = static_cast<int>(parse_long(root.at("m").value));
    r.k = static_cast<int>(parse_long(root.at("k").value));
    r.field = static_cast<Residue>(parse_long(root.at("field").value));
    if (const auto* n = root.find("mais")) r.mais = static_cast<std::size_t>(parse_long(n->value));
    if (const auto* n = root.find("fvs")) r.fvs = VertexSet(split_ints(n->value));
    if (const auto* n = root.find("rcp")) {
        r.rcp = parse_rational(n->value);
        r.rcp_source = root.at("rcp_source").value;
    }
    if (const auto* n = root.find("packing")) {
        CyclePacking packing;
        packing.value = 0;
        for (const auto* c : n->all("cycle")) {
            const auto tokens = detail::LineReader::split(c->value);
            if (tokens.size() < 3) throw InputError("packing cycle needs a weight and at least two vertices");
            const Rational weight = parse_rational(tokens[0]);
            Cycle cycle;
            for (std::size_t i = 1; i < tokens.size(); ++i) cycle.push_back(static_cast<Vertex>(parse_long(tokens[i])));
            packing.assignments.emplace(std::move(cycle), weight);
            packing.value += weight;
        }
        r.packing = std::move(packing);
    }
    if (const auto* n = root.find("approx")) {
        ApproxSummary a;
        a.links = split_ints(n->at("links").value);
        a.objective = parse_rational(n->at("objective").value);
        a.ratio_constant = parse_double(n->at("ratio_constant").value);
        a.regression_ok = parse_flag(n->at("regression_bound").value, "ok", "FAIL");
        a.fallback = parse_flag(n->at("fallback").value, "yes", "no");
        r.approx = std::move(a);
    }
    if (const auto* n = root.find("code")) {
        r.code = CodeSummary{static_cast<Residue>(parse_long(n->at("p").value)), static_cast<int>(parse_long(n->at("t").value)),
                             static_cast<int>(parse_long(n->at("r").value)), parse_flag(n->at("verified").value, "yes", "no")};
    }
    r.gns_tilde = read_gns(root, "gns_tilde");
    r.gns_plain = read_gns(root, "gns_plain");
    r.gns_approx = read_gns(root, "gns_approx");
    if (const auto* n = root.find("tensor_bounds"))
        for (const auto* b : n->all("bound")) {
            TensorEntry e{static_cast<int>(parse_long(b->at("q").value)), static_cast<std::size_t>(parse_long(b->at("mais").value)), std::nullopt};
            if (const auto* a = b->find("alpha")) e.alpha = static_cast<std::size_t>(parse_long(a->value));
            r.tensor.push_back(e);
        }
    if (const auto* n = root.find("skipped"))
        for (const auto& s : n->children) r.skipped.push_back({s.key, s.value});
    for (const auto& c : root.at("checks").children) r.checks.push_back({c.key, parse_flag(c.value, "ok", "FAIL")});
    return r;
}

std::string render_report_machine(const BoundReport& report) { return render_kv(report_to_kv(report)); }

BoundReport parse_report(std::string_view machine_text) { return report_from_kv(parse_kv(machine_text)); }

std::string render_report_human(const BoundReport& report) {
    std::ostringstream out;
    out << render_kv_aligned(report_to_kv(report), "GNS bound report (m = " + std::to_string(report.m) + " links, k = " +
                                                       std::to_string(report.k) + " pairs, field F_" +
                                                       std::to_string(report.field) + ")");
    out << "summary: r_CP";
    if (report.rcp) out << " = " << to_string(*report.rcp);
    out << " <= m - beta_VL";
    if (report.code) out << " (beta_VL <= " << to_string(report.code->rate()) << ")";
    out << " <= m - mais";
    if (report.mais) out << " = " << (report.m - static_cast<int>(*report.mais));
    out << " <= approx FES";
    if (report.approx) out << " = " << report.approx->weight();
    out << "; chain " << (report.chain_holds() ? "holds" : "VIOLATED") << '\n';
    return out.str();
}

}  // namespace gnskit
