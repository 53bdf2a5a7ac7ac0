#include "gnskit/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "gnskit/bounds.hpp"
#include "gnskit/cyclepack.hpp"
#include "gnskit/error.hpp"
#include "gnskit/indexcoding.hpp"
#include "gnskit/instances.hpp"
#include "gnskit/kvdoc.hpp"
#include "gnskit/network.hpp"
#include "text_util.hpp"

namespace gnskit {

namespace {

struct Common {
    std::string out_mode = "human";
    unsigned threads = 0;
    std::string output_path;
};

void add_common(CLI::App* sub, Common& common, bool with_output_file = false) {
    sub->add_option("--out", common.out_mode, "Report format")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--threads", common.threads, "Worker threads (0 = hardware concurrency)");
    if (with_output_file) sub->add_option("-o,--output", common.output_path, "Write the file here instead of stdout");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

/// First directive of a text file ("digraph", "network", "code", ...).
std::string file_kind(const std::string& text) {
    detail::LineReader reader(text);
    const auto line = reader.next();
    return line ? line->tokens[0] : std::string();
}

MUNetwork load_network(const std::string& path) {
    try {
        return parse_network(read_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// A .dg digraph, or the index graph of a .mun network.
Digraph load_graph(const std::string& path) {
    const std::string text = read_file(path);
    try {
        if (file_kind(text) == "network") return to_index_graph(parse_network(text)).graph;
        return parse_digraph(text);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

Options make_options(const Common& common) {
    Options options;
    options.caps = Caps::from_environment();
    options.threads = common.threads;
    return options;
}

std::string join(const std::vector<int>& values) {
    if (values.empty()) return "none";
    std::string text;
    for (int v : values) text += (text.empty() ? "" : " ") + std::to_string(v);
    return text;
}

std::string render(const KvNode& node, const Common& common, const std::string& title) {
    return common.out_mode == "machine" ? render_kv(node) : render_kv_aligned(node, title);
}

std::string link_text(const MUNetwork& net, LinkId e) {
    const auto& link = net.link(e);
    return std::to_string(e) + " " + (link.tail ? net.node_name(*link.tail) : std::string("-")) + "->" + net.node_name(link.head);
}

void add_certificate(KvNode& node, const MUNetwork& net, const GnsCertificate& cert) {
    node.add("size", std::to_string(cert.size()));
    node.add("cut", join(cert.cut));
    auto& links = node.add("links");
    for (LinkId e : cert.cut) links.add("link", link_text(net, e));
    if (cert.permutation) node.add("permutation", join(*cert.permutation));
}

// ---- subcommands --------------------------------------------------------

struct BoundsArgs {
    std::string file;
    std::vector<int> qs{1};
    Residue field = 2;
    bool exact_gns = false;
    double ratio_constant = 8.0;
};

int cmd_bounds(const BoundsArgs& args, const Common& common, std::ostream& out, std::ostream& err) {
    const MUNetwork net = load_network(args.file);
    ReportOptions opts;
    opts.qs = args.qs;
    opts.field = args.field;
    opts.exact_gns = args.exact_gns;
    opts.ratio_constant = args.ratio_constant;
    opts.options = make_options(common);
    const BoundReport report = bound_report(net, opts);
    out << (common.out_mode == "machine" ? render_report_machine(report) : render_report_human(report));
    if (!report.chain_holds()) {
        err << "error: a computed inequality of the bound chain failed\n";
        return kExitInvariant;
    }
    if (!report.skipped.empty()) {
        for (const auto& s : report.skipped) err << "skipped " << s.component << ": " << s.reason << '\n';
        return kExitCapacity;
    }
    return kExitOk;
}

struct GnsArgs {
    std::string file;
    bool tilde = false;
    bool exact = false;
    bool approx = false;
};

int cmd_gnscut(const GnsArgs& args, const Common& common, std::ostream& out) {
    const MUNetwork net = load_network(args.file);
    const Options options = make_options(common);
    KvNode node{"gnscut", {}, {}};
    if (args.approx) {
        const MUNetwork target = tilde_transform(net);
        const FesApprox fes = subset_fes_approx(net, options);
        const GnsCertificate cert = fvs_to_gns_cut(net, fes_to_fvs(net, fes.links));
        if (!is_gns_cut(target, cert.cut).accepted()) throw InvariantError("approximate GNS cut failed re-verification");
        node.add("mode", "approx");
        node.add("network", "tilde");
        add_certificate(node, target, cert);
        node.add("fes_weight", std::to_string(fes.weight));
        node.add("objective", to_string(fes.objective));
        node.add("fallback", fes.used_fallback ? "yes" : "no");
    } else {
        const MUNetwork target = args.tilde ? tilde_transform(net) : net;
        const GnsCertificate cert = min_gns_cut_exact(target, options);
        if (!is_gns_cut(target, cert.cut).accepted()) throw InvariantError("exact GNS cut failed re-verification");
        node.add("mode", "exact");
        node.add("network", args.tilde ? "tilde" : "original");
        add_certificate(node, target, cert);
    }
    node.add("verified", "yes");
    out << render(node, common, "GNS cut of " + args.file);
    return kExitOk;
}

struct ConvertArgs {
    std::string file;
    std::string to = "dg";
    bool tilde = false;
};

int cmd_convert(const ConvertArgs& args, const Common& common, std::ostream& out) {
    const MUNetwork net = load_network(args.file);
    const MUNetwork target = args.tilde ? tilde_transform(net) : net;
    std::string text;
    if (args.to == "dg") {
        text = serialize_digraph(to_index_graph(target).graph,
                                 std::string("index graph") + (args.tilde ? " of the tilde network" : "") + ": vertex = link id");
    } else {
        text = serialize_network(target, args.tilde ? "tilde network" : "");
    }
    if (common.output_path.empty()) out << text;
    else write_file(common.output_path, text);
    return kExitOk;
}

struct CyclepackArgs {
    std::string file;
    bool metric = false;
};

int cmd_cyclepack(const CyclepackArgs& args, const Common& common, std::ostream& out) {
    const std::string text = read_file(args.file);
    const bool is_network = file_kind(text) == "network";
    const Digraph g = load_graph(args.file);
    const Options options = make_options(common);
    const CyclePacking packing = rcp_exact(g, options.caps);
    KvNode node{"cyclepack", {}, {}};
    node.add("vertices", std::to_string(g.order()));
    node.add("edges", std::to_string(g.edge_count()));
    node.add("rcp", to_string(packing.value));
    auto& cycles = node.add("packing");
    for (const auto& [cycle, weight] : packing.assignments) cycles.add("cycle", to_string(weight) + " " + join(cycle));
    if (args.metric) {
        const TerminalNetwork tn = is_network ? prime_network(parse_network(text)) : vertex_split_network(g);
        const SpreadingMetric metric = solve_spreading_metric(tn, options);
        auto& m = node.add("metric");
        m.add("network", is_network ? "prime" : "vertex-split");
        m.add("objective", to_string(metric.objective));
        m.add("constraints", std::to_string(metric.constraints));
        m.add("equals_rcp", metric.objective == packing.value ? "yes" : "no");
        auto& lengths = m.add("lengths");
        for (std::size_t a = 0; a < tn.arcs.size(); ++a)
            if (sgn(metric.lengths[a]) != 0)
                lengths.add("arc", tn.node_names[static_cast<std::size_t>(tn.arcs[a].tail)] + "->" +
                                       tn.node_names[static_cast<std::size_t>(tn.arcs[a].head)] + " " + to_string(metric.lengths[a]));
        if (metric.objective != packing.value) {
            out << render(node, common, "Cycle packing of " + args.file);
            throw InvariantError("spreading-metric objective differs from the exact packing value");
        }
    }
    out << render(node, common, "Cycle packing of " + args.file);
    return kExitOk;
}

struct MinrankArgs {
    std::string file;
    Residue field = 2;
    int blowup = 1;
};

int cmd_minrank(const MinrankArgs& args, const Common& common, std::ostream& out) {
    const Digraph g = load_graph(args.file);
    const Options options = make_options(common);
    if (args.blowup < 1) throw InputError("--blowup must be positive");
    const Digraph target = args.blowup == 1 ? g : blowup(g, args.blowup, options.caps);
    const MinrankResult result = minrank(target, args.field, options);
    KvNode node{"minrank", {}, {}};
    node.add("field", std::to_string(args.field));
    node.add("blowup", std::to_string(args.blowup));
    node.add("rank", std::to_string(result.rank));
    node.add("normalized", to_string(ratio(static_cast<long>(result.rank), args.blowup)));
    auto& witness = node.add("witness");
    for (int r = 0; r < result.witness.rows(); ++r) {
        std::string row;
        for (Residue c : result.witness.row(r)) row += (row.empty() ? "" : " ") + std::to_string(c);
        witness.add("row", row);
    }
    out << render(node, common, "Minrank of " + args.file);
    return kExitOk;
}

struct CodeArgs {
    std::string file;
    Residue field = 2;
};

int cmd_code(const CodeArgs& args, const Common& common, std::ostream& out) {
    const Digraph g = load_graph(args.file);
    const Options options = make_options(common);
    const CyclePacking packing = rcp_exact(g, options.caps);
    const IndexCode code = build_cycle_code(g, packing, args.field, options);
    const std::string text = serialize_index_code(code, "cycle-saving code, rate " + to_string(code.rate()) + " = " +
                                                            std::to_string(g.order()) + " - " + to_string(packing.value));
    if (common.output_path.empty()) {
        out << text;
        return kExitOk;
    }
    write_file(common.output_path, text);
    KvNode node{"code", {}, {}};
    node.add("p", std::to_string(code.p));
    node.add("t", std::to_string(code.t));
    node.add("n", std::to_string(code.n));
    node.add("r", std::to_string(code.r()));
    node.add("rate", to_string(code.rate()));
    node.add("verified", verify_index_code(g, code).ok() ? "yes" : "no");
    out << render(node, common, "Cycle code for " + args.file);
    return kExitOk;
}

struct GenArgs {
    LSParams ls;
    int n = 8;
    double prob = 0.5;
    std::uint64_t seed = 1;
    DagNetworkParams dag;
    std::string graph_file;
};

void emit(const std::string& text, const Common& common, std::ostream& out) {
    if (common.output_path.empty()) out << text;
    else write_file(common.output_path, text);
}

struct VerifyArgs {
    std::string graph_file;
    std::string code_file;
    std::string network_file;
    std::string report_file;
    // id lists stay strings so a bare flag means the empty set
    std::vector<std::string> cut;
    std::vector<std::string> fvs;
    std::vector<std::string> fes;
    bool tilde = false;
};

std::vector<int> id_list(const std::vector<std::string>& tokens, const std::string& flag) {
    std::vector<int> ids;
    for (const auto& token : tokens) {
        if (token.empty()) continue;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw InputError(flag + ": '" + token + "' is not an integer id");
        ids.push_back(value);
    }
    return ids;
}

int cmd_verify(const VerifyArgs& args, const Common& common, std::ostream& out, bool has_cut, bool has_fvs, bool has_fes) {
    KvNode node{"verify", {}, {}};
    int status = kExitOk;
    if (!args.report_file.empty()) {
        const std::string text = read_file(args.report_file);
        const BoundReport report = parse_report(text);
        node.add("kind", "report");
        node.add("roundtrip", render_report_machine(report) == text ? "exact" : "normalized");
        node.add("chain", report.chain_holds() ? "ok" : "FAIL");
        if (!report.chain_holds()) status = kExitInvariant;
    } else if (!args.code_file.empty()) {
        if (args.graph_file.empty()) throw InputError("--code needs --graph");
        const Digraph g = load_graph(args.graph_file);
        const IndexCode code = parse_index_code(read_file(args.code_file));
        const CodeVerdict verdict = verify_index_code(g, code);
        node.add("kind", "index-code");
        node.add("rate", to_string(code.rate()));
        node.add("decodable", verdict.failing_users.empty() ? "yes" : "no");
        node.add("failing_users", join(verdict.failing_users));
        node.add("bad_decoders", join(verdict.bad_decoders));
        if (!verdict.ok()) status = kExitInput;
    } else if (!args.network_file.empty()) {
        const MUNetwork net = load_network(args.network_file);
        if (has_cut + has_fvs + has_fes != 1) throw InputError("give exactly one of --cut, --fvs, --fes");
        if (has_cut) {
            const MUNetwork target = args.tilde ? tilde_transform(net) : net;
            const GnsVerdict verdict = is_gns_cut(target, id_list(args.cut, "--cut"));
            node.add("kind", "gns-cut");
            node.add("network", args.tilde ? "tilde" : "original");
            node.add("accepted", verdict.accepted() ? "yes" : "no");
            if (verdict.accepted()) add_certificate(node, target, *verdict.certificate);
            else node.add("witness", join(verdict.witness));
            if (!verdict.accepted()) status = kExitInput;
        } else if (has_fvs) {
            const GnsCertificate cert = fvs_to_gns_cut(net, VertexSet(id_list(args.fvs, "--fvs")));
            node.add("kind", "fvs");
            node.add("network", "tilde");
            add_certificate(node, tilde_transform(net), cert);
        } else {
            const VertexSet fvs = fes_to_fvs(net, id_list(args.fes, "--fes"));
            node.add("kind", "fes");
            node.add("fvs", join(fvs.members()));
        }
    } else {
        throw InputError("nothing to verify: give --report, --graph with --code, or --network with a cut");
    }
    out << render(node, common, "Verification");
    return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bounds, cuts and codes for multiple-unicast networks", "gnskit"};
    app.require_subcommand(1);
    Common common;

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "Bound chain report for a .mun network");
    bounds->add_option("file", bounds_args.file, "Network file")->required();
    bounds->add_option("--q", bounds_args.qs, "Tensor powers")->expected(1, -1);
    bounds->add_option("--field", bounds_args.field, "Prime field for the index code");
    bounds->add_flag("--exact-gns", bounds_args.exact_gns, "Also search exact GNS cuts");
    bounds->add_option("--ratio-constant", bounds_args.ratio_constant, "Constant of the regression bound");
    add_common(bounds, common);

    GnsArgs gns_args;
    auto* gnscut = app.add_subcommand("gnscut", "Minimum or approximate GNS cut");
    gnscut->add_option("file", gns_args.file, "Network file")->required();
    gnscut->add_flag("--tilde", gns_args.tilde, "Work on the tilde network");
    auto* exact_flag = gnscut->add_flag("--exact", gns_args.exact, "Exhaustive search (default)");
    auto* approx_flag = gnscut->add_flag("--approx", gns_args.approx, "Sphere-growing approximation on the tilde network");
    exact_flag->excludes(approx_flag);
    add_common(gnscut, common);

    ConvertArgs convert_args;
    auto* convert = app.add_subcommand("convert", "Index graph (.dg) or normalized network (.mun)");
    convert->add_option("file", convert_args.file, "Network file")->required();
    convert->add_option("--to", convert_args.to, "Output format")->check(CLI::IsMember({"dg", "mun"}));
    convert->add_flag("--tilde", convert_args.tilde, "Apply the tilde transform first");
    add_common(convert, common, true);

    CyclepackArgs cyclepack_args;
    auto* cyclepack = app.add_subcommand("cyclepack", "Exact fractional cycle packing");
    cyclepack->add_option("file", cyclepack_args.file, "Digraph or network file")->required();
    cyclepack->add_flag("--metric", cyclepack_args.metric, "Also solve the dual spreading metric");
    add_common(cyclepack, common);

    MinrankArgs minrank_args;
    auto* minrank_cmd = app.add_subcommand("minrank", "Exhaustive minrank over a prime field");
    minrank_cmd->add_option("file", minrank_args.file, "Digraph or network file")->required();
    minrank_cmd->add_option("--field", minrank_args.field, "Prime field");
    minrank_cmd->add_option("--blowup", minrank_args.blowup, "Blowup factor k");
    add_common(minrank_cmd, common);

    CodeArgs code_args;
    auto* code = app.add_subcommand("code", "Cycle-saving index code from the exact packing");
    code->add_option("file", code_args.file, "Digraph or network file")->required();
    code->add_option("--field", code_args.field, "Prime field");
    add_common(code, common, true);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Instance generators");
    gen->require_subcommand(1);
    auto* gen_ls = gen->add_subcommand("lubetzky-stav", "Subset graph with |X & Y| = -1 mod p^b adjacency");
    gen_ls->add_option("--r", gen_args.ls.r)->required();
    gen_ls->add_option("--s", gen_args.ls.s)->required();
    gen_ls->add_option("--p", gen_args.ls.p)->required();
    gen_ls->add_option("--b", gen_args.ls.b)->required();
    gen_ls->add_flag("--complement", gen_args.ls.complemented);
    add_common(gen_ls, common, true);
    auto* gen_digraph = gen->add_subcommand("digraph", "Random digraph");
    gen_digraph->add_option("--n", gen_args.n)->required();
    gen_digraph->add_option("--prob", gen_args.prob)->required();
    gen_digraph->add_option("--seed", gen_args.seed);
    add_common(gen_digraph, common, true);
    auto* gen_dag = gen->add_subcommand("dag-network", "Random acyclic multiple-unicast network");
    gen_dag->add_option("--nodes", gen_args.dag.nodes);
    gen_dag->add_option("--prob", gen_args.dag.prob);
    gen_dag->add_option("--parallel", gen_args.dag.parallel);
    gen_dag->add_option("--pairs", gen_args.dag.pairs);
    gen_dag->add_option("--seed", gen_args.seed);
    add_common(gen_dag, common, true);
    auto* gen_side = gen->add_subcommand("side-info-network", "Network built from a side-information digraph");
    gen_side->add_option("file", gen_args.graph_file, "Digraph file")->required();
    add_common(gen_side, common, true);

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Re-check a certificate, code or report");
    verify->add_option("--graph", verify_args.graph_file, "Side-information digraph");
    verify->add_option("--code", verify_args.code_file, "Index code file");
    verify->add_option("--network", verify_args.network_file, "Network file");
    auto* cut_opt = verify->add_option("--cut", verify_args.cut, "Link ids of a GNS cut")->expected(0, -1);
    auto* fvs_opt = verify->add_option("--fvs", verify_args.fvs, "Feedback vertex set of the index graph")->expected(0, -1);
    auto* fes_opt = verify->add_option("--fes", verify_args.fes, "Feedback edge set of G'")->expected(0, -1);
    verify->add_flag("--tilde", verify_args.tilde, "Check the cut on the tilde network");
    verify->add_option("--report", verify_args.report_file, "Machine-form bound report");
    add_common(verify, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().back()->help());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (*bounds) return cmd_bounds(bounds_args, common, out, err);
        if (*gnscut) return cmd_gnscut(gns_args, common, out);
        if (*convert) return cmd_convert(convert_args, common, out);
        if (*cyclepack) return cmd_cyclepack(cyclepack_args, common, out);
        if (*minrank_cmd) return cmd_minrank(minrank_args, common, out);
        if (*code) return cmd_code(code_args, common, out);
        if (*gen_ls) {
            const Digraph g = lubetzky_stav(gen_args.ls, Caps::from_environment());
            std::ostringstream header;
            header << "lubetzky-stav r=" << gen_args.ls.r << " s=" << gen_args.ls.s << " p=" << gen_args.ls.p
                   << " b=" << gen_args.ls.b << (gen_args.ls.complemented ? " complemented" : "");
            emit(serialize_digraph(g, header.str()), common, out);
            return kExitOk;
        }
        if (*gen_digraph) {
            std::ostringstream header;
            header << "random digraph n=" << gen_args.n << " prob=" << gen_args.prob << " seed=" << gen_args.seed;
            emit(serialize_digraph(random_digraph(gen_args.n, gen_args.prob, gen_args.seed), header.str()), common, out);
            return kExitOk;
        }
        if (*gen_dag) {
            std::ostringstream header;
            header << "random dag network nodes=" << gen_args.dag.nodes << " prob=" << gen_args.dag.prob
                   << " parallel=" << gen_args.dag.parallel << " pairs=" << gen_args.dag.pairs << " seed=" << gen_args.seed;
            emit(serialize_network(random_dag_network(gen_args.dag, gen_args.seed), header.str()), common, out);
            return kExitOk;
        }
        if (*gen_side) {
            const Digraph g = load_graph(gen_args.graph_file);
            emit(serialize_network(network_from_side_info_graph(g), "side-information network of " + gen_args.graph_file),
                 common, out);
            return kExitOk;
        }
        if (*verify)
            return cmd_verify(verify_args, common, out, cut_opt->count() > 0, fvs_opt->count() > 0, fes_opt->count() > 0);
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return kExitInput;
}

}  // namespace gnskit
