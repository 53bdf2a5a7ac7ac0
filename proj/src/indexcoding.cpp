#include "gnskit/indexcoding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "gnskit/error.hpp"
#include "gnskit/parallel.hpp"
#include "text_util.hpp"

namespace gnskit {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

void check_field(std::uint64_t p) {
    if (!is_prime(p) || p >= (1u << 16)) throw InputError("field size " + std::to_string(p) + " is not a prime below 65536");
}

Residue reduce(long long value, Residue p) {
    const long long r = value % static_cast<long long>(p);
    return static_cast<Residue>(r < 0 ? r + p : r);
}

Residue mul(Residue a, Residue b, Residue p) {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p);
}

Residue inverse(Residue a, Residue p) {
    Residue result = 1;
    Residue base = a;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
        if (e & 1) result = mul(result, base, p);
        base = mul(base, base, p);
    }
    return result;
}

/// Row space built incrementally. Rows are stored with a unit pivot; a
/// vector is reduced against rows in insertion order. Optionally tracks
/// each stored row as a combination of the inserted generators.
class Echelon {
public:
    Echelon(Residue p, std::size_t cols, std::size_t generators = 0) : p_(p), cols_(cols), generators_(generators) {}

    std::size_t rank() const { return rows_.size(); }

    /// Reduces v (and its combination) in place.
    void reduce(std::vector<Residue>& v, std::vector<Residue>* combo = nullptr) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Residue f = v[pivots_[k]];
            if (!f) continue;
            const Residue neg = p_ - f;
            const auto& row = rows_[k];
            for (std::size_t c = pivots_[k]; c < cols_; ++c)
                if (row[c]) v[c] = static_cast<Residue>((v[c] + static_cast<std::uint64_t>(neg) * row[c]) % p_);
            if (combo) {
                const auto& rc = combos_[k];
                for (std::size_t g = 0; g < generators_; ++g)
                    if (rc[g]) (*combo)[g] = static_cast<Residue>(((*combo)[g] + static_cast<std::uint64_t>(neg) * rc[g]) % p_);
            }
        }
    }

    /// Inserts v if independent; returns whether the rank grew.
    bool insert(std::vector<Residue> v, std::vector<Residue> combo = {}) {
        const bool track = generators_ > 0;
        reduce(v, track ? &combo : nullptr);
        std::size_t pivot = 0;
        while (pivot < cols_ && !v[pivot]) ++pivot;
        if (pivot == cols_) return false;
        const Residue inv = inverse(v[pivot], p_);
        for (auto& x : v) x = mul(x, inv, p_);
        if (track)
            for (auto& x : combo) x = mul(x, inv, p_);
        rows_.push_back(std::move(v));
        pivots_.push_back(pivot);
        if (track) combos_.push_back(std::move(combo));
        return true;
    }

    void pop() {
        rows_.pop_back();
        pivots_.pop_back();
        if (!combos_.empty()) combos_.pop_back();
    }

    /// Combination of generators equal to target, if it is in the span.
    std::optional<std::vector<Residue>> express(std::vector<Residue> target) const {
        std::vector<Residue> combo(generators_, 0);
        // track -target; the residual zero means target = sum of combos
        reduce(target, &combo);
        if (std::any_of(target.begin(), target.end(), [](Residue x) { return x != 0; })) return std::nullopt;
        for (auto& x : combo) x = x ? p_ - x : 0;
        return combo;
    }

private:
    Residue p_;
    std::size_t cols_;
    std::size_t generators_;
    std::vector<std::vector<Residue>> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<std::vector<Residue>> combos_;
};

std::vector<Residue> unit(std::size_t size, std::size_t at) {
    std::vector<Residue> v(size, 0);
    v[at] = 1;
    return v;
}

}  // namespace

GFMatrix::GFMatrix(Residue p, int rows, int cols) : p_(p), rows_(rows), cols_(cols) {
    check_field(p);
    if (rows < 0 || cols < 0) throw InputError("negative matrix dimension");
    entries_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

GFMatrix::GFMatrix(Residue p, const std::vector<std::vector<long long>>& rows, int cols)
    : GFMatrix(p, static_cast<int>(rows.size()), cols) {
    for (int r = 0; r < rows_; ++r) {
        if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != cols) throw InputError("ragged matrix rows");
        for (int c = 0; c < cols; ++c) set(r, c, rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
}

std::size_t GFMatrix::index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw InputError("matrix index out of range");
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
}

void GFMatrix::set(int r, int c, long long value) { entries_[index(r, c)] = reduce(value, p_); }

std::vector<Residue> GFMatrix::row(int r) const {
    if (r < 0 || r >= rows_) throw InputError("matrix row out of range");
    const auto begin = entries_.begin() + static_cast<std::ptrdiff_t>(r) * cols_;
    return std::vector<Residue>(begin, begin + cols_);
}

void GFMatrix::append_row(const std::vector<Residue>& values) {
    if (static_cast<int>(values.size()) != cols_) throw InputError("row length does not match column count");
    for (Residue v : values) entries_.push_back(v % p_);
    ++rows_;
}

std::size_t gf_rank(const GFMatrix& mat) {
    Echelon basis(mat.p(), static_cast<std::size_t>(mat.cols()));
    for (int r = 0; r < mat.rows(); ++r) basis.insert(mat.row(r));
    return basis.rank();
}

bool fits(const Digraph& g, const GFMatrix& mat) {
    if (mat.rows() != g.order() || mat.cols() != g.order()) return false;
    for (int i = 0; i < g.order(); ++i)
        for (int j = 0; j < g.order(); ++j) {
            if (i == j && mat.at(i, j) == 0) return false;
            if (i != j && mat.at(i, j) != 0 && !g.has_edge(i, j)) return false;
        }
    return true;
}

namespace {

class MinrankSearch {
public:
    MinrankSearch(const Digraph& g, Residue p) : g_(g), p_(p), n_(static_cast<std::size_t>(g.order())) {}

    struct Outcome {
        std::size_t rank = std::numeric_limits<std::size_t>::max();
        std::vector<std::vector<Residue>> rows;
    };

    /// Rows [first, n) after a fixed prefix; prunes against the local best
    /// and (strictly) against the shared global bound.
    Outcome complete(const std::vector<std::vector<Residue>>& prefix, const std::atomic<std::size_t>& global) {
        Outcome out;
        Echelon basis(p_, n_);
        std::size_t rank = 0;
        for (const auto& row : prefix) rank += basis.insert(row);
        std::vector<std::vector<Residue>> rows = prefix;
        dfs(prefix.size(), basis, rank, rows, out, global);
        return out;
    }

    std::vector<std::vector<Residue>> row_choices(std::size_t i) const {
        const auto& free = g_.out(static_cast<Vertex>(i));
        std::vector<std::vector<Residue>> choices;
        std::vector<Residue> values(free.size(), 0);
        for (;;) {
            std::vector<Residue> row(n_, 0);
            row[i] = 1;
            for (std::size_t j = 0; j < free.size(); ++j) row[static_cast<std::size_t>(free[j])] = values[j];
            choices.push_back(std::move(row));
            std::size_t pos = free.size();
            while (pos > 0 && values[pos - 1] == p_ - 1) values[--pos] = 0;
            if (pos == 0) break;
            ++values[pos - 1];
        }
        return choices;
    }

private:
    void dfs(std::size_t i, Echelon& basis, std::size_t rank, std::vector<std::vector<Residue>>& rows, Outcome& out,
             const std::atomic<std::size_t>& global) {
        if (rank >= out.rank || rank > global.load()) return;
        if (i == n_) {
            out.rank = rank;
            out.rows = rows;
            return;
        }
        for (auto& row : row_choices(i)) {
            const bool grew = basis.insert(row);
            rows.push_back(std::move(row));
            dfs(i + 1, basis, rank + grew, rows, out, global);
            rows.pop_back();
            if (grew) basis.pop();
        }
    }

    const Digraph& g_;
    Residue p_;
    std::size_t n_;
};

}  // namespace

MinrankResult minrank(const Digraph& g, Residue p, const Options& options) {
    check_field(p);
    const double bits = static_cast<double>(g.edge_count()) * std::log2(static_cast<double>(p));
    if (bits > static_cast<double>(options.caps.minrank_bits) + 1e-9)
        throw CapacityError("minrank_bits", options.caps.minrank_bits,
                            "minrank search over " + std::to_string(g.edge_count()) + " free entries of F_" + std::to_string(p) +
                                " needs " + std::to_string(static_cast<int>(std::ceil(bits))) + " bits");
    const std::size_t n = static_cast<std::size_t>(g.order());
    MinrankSearch search(g, p);

    // prefix assignments of the first rows form the parallel work items
    std::vector<std::vector<std::vector<Residue>>> prefixes{{}};
    for (std::size_t i = 0; i < n && prefixes.size() < 64; ++i) {
        const auto choices = search.row_choices(i);
        std::vector<std::vector<std::vector<Residue>>> next;
        for (const auto& prefix : prefixes)
            for (const auto& row : choices) {
                auto extended = prefix;
                extended.push_back(row);
                next.push_back(std::move(extended));
            }
        prefixes = std::move(next);
    }
    std::atomic<std::size_t> global{n};
    std::vector<MinrankSearch::Outcome> outcomes(prefixes.size());
    parallel_for(prefixes.size(), options.worker_count(), [&](std::size_t c) {
        MinrankSearch local(g, p);
        outcomes[c] = local.complete(prefixes[c], global);
        std::size_t current = global.load();
        while (outcomes[c].rank < current && !global.compare_exchange_weak(current, outcomes[c].rank)) {
        }
    });
    std::size_t best = 0;
    for (std::size_t c = 1; c < outcomes.size(); ++c)
        if (outcomes[c].rank < outcomes[best].rank) best = c;
    MinrankResult result{outcomes[best].rank, GFMatrix(p, static_cast<int>(n), static_cast<int>(n))};
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) result.witness.set(static_cast<int>(r), static_cast<int>(c), outcomes[best].rows[r][c]);
    if (n == 0) result.rank = 0;
    if (gf_rank(result.witness) != result.rank || !fits(g, result.witness))
        throw InvariantError("minrank witness does not verify");
    return result;
}

Rational minrank_blowup_normalized(const Digraph& g, Residue p, int k, const Options& options) {
    if (k < 1) throw InputError("blowup factor must be positive");
    const auto result = minrank(blowup(g, k, options.caps), p, options);
    return ratio(static_cast<long>(result.rank), k);
}

IndexCode uncoded_code(const Digraph& g, Residue p) {
    IndexCode code{p, 1, g.order(), GFMatrix(p, 0, g.order()), {}};
    for (int v = 0; v < g.order(); ++v) code.encoding.append_row(unit(static_cast<std::size_t>(g.order()), static_cast<std::size_t>(v)));
    code.decoders = derive_decoders(g, code);
    return code;
}

namespace {

void check_dimensions(const Digraph& g, const IndexCode& code) {
    check_field(code.p);
    if (code.encoding.p() != code.p) throw InputError("encoding matrix field differs from code field");
    if (code.t < 1) throw InputError("subsymbol count must be positive");
    if (code.n != g.order()) throw InputError("code message count does not match the graph");
    if (code.encoding.cols() != code.t * code.n) throw InputError("encoding matrix must have t*n columns");
}

/// Generators for user i: the code rows, then side-information units.
struct UserSpan {
    std::vector<int> side_columns;
    Echelon basis;
};

UserSpan user_span(const Digraph& g, const IndexCode& code, int user, bool track) {
    const std::size_t cols = static_cast<std::size_t>(code.t * code.n);
    std::vector<int> side;
    for (Vertex j : g.out(user))
        for (int s = 0; s < code.t; ++s) side.push_back(j * code.t + s);
    const std::size_t generators = track ? static_cast<std::size_t>(code.r()) + side.size() : 0;
    UserSpan span{side, Echelon(code.p, cols, generators)};
    std::size_t index = 0;
    auto add = [&](std::vector<Residue> v) {
        std::vector<Residue> combo;
        if (track) combo = unit(generators, index);
        ++index;
        span.basis.insert(std::move(v), std::move(combo));
    };
    for (int r = 0; r < code.r(); ++r) add(code.encoding.row(r));
    for (int c : side) add(unit(cols, static_cast<std::size_t>(c)));
    return span;
}

}  // namespace

std::vector<Decoder> derive_decoders(const Digraph& g, const IndexCode& code) {
    check_dimensions(g, code);
    const std::size_t cols = static_cast<std::size_t>(code.t * code.n);
    std::vector<Decoder> decoders;
    for (int user = 0; user < code.n; ++user) {
        const UserSpan span = user_span(g, code, user, true);
        Decoder decoder{user, {}};
        bool complete = true;
        for (int s = 0; s < code.t && complete; ++s) {
            const auto combo = span.basis.express(unit(cols, static_cast<std::size_t>(user * code.t + s)));
            if (!combo) {
                complete = false;
                break;
            }
            SubsymbolRecipe recipe;
            recipe.row_coeffs.assign(combo->begin(), combo->begin() + code.r());
            for (std::size_t k = 0; k < span.side_columns.size(); ++k)
                if (const Residue c = (*combo)[static_cast<std::size_t>(code.r()) + k]) recipe.side.emplace_back(span.side_columns[k], c);
            decoder.slots.push_back(std::move(recipe));
        }
        if (complete) decoders.push_back(std::move(decoder));
    }
    return decoders;
}

CodeVerdict verify_index_code(const Digraph& g, const IndexCode& code) {
    check_dimensions(g, code);
    const std::size_t cols = static_cast<std::size_t>(code.t * code.n);
    CodeVerdict verdict;
    for (int user = 0; user < code.n; ++user) {
        const UserSpan span = user_span(g, code, user, false);
        for (int s = 0; s < code.t; ++s) {
            auto target = unit(cols, static_cast<std::size_t>(user * code.t + s));
            span.basis.reduce(target);
            if (std::any_of(target.begin(), target.end(), [](Residue x) { return x != 0; })) {
                verdict.failing_users.push_back(user);
                break;
            }
        }
    }
    for (const auto& d : code.decoders) {
        bool good = d.user >= 0 && d.user < code.n && static_cast<int>(d.slots.size()) == code.t;
        for (int s = 0; good && s < code.t; ++s) {
            const auto& recipe = d.slots[static_cast<std::size_t>(s)];
            if (static_cast<int>(recipe.row_coeffs.size()) != code.r()) {
                good = false;
                break;
            }
            std::vector<std::uint64_t> sum(cols, 0);
            for (int r = 0; r < code.r(); ++r)
                if (const Residue a = recipe.row_coeffs[static_cast<std::size_t>(r)] % code.p)
                    for (std::size_t c = 0; c < cols; ++c) sum[c] = (sum[c] + static_cast<std::uint64_t>(a) * code.encoding.at(r, static_cast<int>(c))) % code.p;
            for (const auto& [col, a] : recipe.side) {
                if (col < 0 || static_cast<std::size_t>(col) >= cols || !g.has_edge(d.user, col / code.t)) {
                    good = false;
                    break;
                }
                sum[static_cast<std::size_t>(col)] = (sum[static_cast<std::size_t>(col)] + a) % code.p;
            }
            for (std::size_t c = 0; good && c < cols; ++c)
                good = sum[c] == (c == static_cast<std::size_t>(d.user * code.t + s) ? 1u : 0u);
        }
        if (!good) verdict.bad_decoders.push_back(d.user);
    }
    return verdict;
}

IndexCode build_cycle_code(const Digraph& g, const CyclePacking& packing, Residue p, const Options& options) {
    check_field(p);
    if (!is_valid_packing(g, packing)) throw ContractError("cycle packing is not valid for this graph");
    BigInt t = 1;
    for (const auto& [cycle, weight] : packing.assignments) t = lcm(t, weight.get_den());
    if (t > options.caps.code_lcm)
        throw CapacityError("code_lcm", options.caps.code_lcm,
                            "packing denominators need a blowup factor of " + t.get_str());
    const int tt = static_cast<int>(t.get_si());
    const int n = g.order();
    const std::size_t cols = static_cast<std::size_t>(tt * n);
    IndexCode code{p, tt, n, GFMatrix(p, 0, tt * n), {}};
    std::vector<int> used(static_cast<std::size_t>(n), 0);
    for (const auto& [cycle, weight] : packing.assignments) {
        const Rational scaled = weight * tt;
        const long copies = scaled.get_num().get_si();
        for (long copy = 0; copy < copies; ++copy) {
            std::vector<std::size_t> column;
            for (Vertex v : cycle) column.push_back(static_cast<std::size_t>(v * tt + used[static_cast<std::size_t>(v)]++));
            for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
                std::vector<Residue> row(cols, 0);
                row[column[i]] = 1;
                row[column[i + 1]] = 1;
                code.encoding.append_row(row);
            }
        }
    }
    for (int v = 0; v < n; ++v)
        for (int s = used[static_cast<std::size_t>(v)]; s < tt; ++s) code.encoding.append_row(unit(cols, static_cast<std::size_t>(v * tt + s)));
    if (code.rate() != Rational(n) - packing.value) throw InvariantError("cycle code rate differs from n - |q|");
    code.decoders = derive_decoders(g, code);
    if (!verify_index_code(g, code).ok() || static_cast<int>(code.decoders.size()) != n)
        throw InvariantError("cycle code failed decodability verification");
    return code;
}

Rational co_rate_from_beta(long m, const Rational& beta) {
    if (sgn(beta) < 0 || beta > m) throw InputError("broadcast rate must lie in [0, m]");
    return Rational(m) - beta;
}

UncertaintyCheck uncertainty_check(const Digraph& g, Residue p, int k1, int k2, const Options& options) {
    if (k1 < 1 || k2 < 1) throw InputError("blowup factors must be positive");
    UncertaintyCheck check;
    check.minrank_blowup = minrank(blowup(g, k1, options.caps), p, options).rank;
    check.minrank_complement_blowup = minrank(blowup(complement(g), k2, options.caps), p, options).rank;
    check.holds = check.minrank_blowup * check.minrank_complement_blowup >=
                  static_cast<std::size_t>(k1) * static_cast<std::size_t>(k2) * static_cast<std::size_t>(g.order());
    return check;
}

std::string serialize_index_code(const IndexCode& code, std::string_view header_comment) {
    std::ostringstream out;
    detail::write_comment(out, header_comment);
    out << "code p=" << code.p << " t=" << code.t << " n=" << code.n << " r=" << code.r() << '\n';
    for (int r = 0; r < code.r(); ++r) {
        out << "row";
        for (Residue c : code.encoding.row(r)) out << ' ' << c;
        out << '\n';
    }
    for (const auto& d : code.decoders)
        for (std::size_t s = 0; s < d.slots.size(); ++s) {
            out << "decode " << d.user << ' ' << s << " rows";
            for (Residue c : d.slots[s].row_coeffs) out << ' ' << c;
            out << " side";
            for (const auto& [col, c] : d.slots[s].side) out << ' ' << col << ':' << c;
            out << '\n';
        }
    return out.str();
}

IndexCode parse_index_code(std::string_view text) {
    detail::LineReader reader(text);
    std::optional<IndexCode> code;
    int declared_rows = 0;
    std::map<int, Decoder> decoders;
    while (auto line = reader.next()) {
        const auto& tok = line->tokens;
        if (!code) {
            if (tok.size() != 5 || tok[0] != "code") throw reader.error("expected header 'code p=<p> t=<t> n=<n> r=<r>'");
            std::map<std::string, long long> fields;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const auto eq = tok[i].find('=');
                if (eq == std::string::npos) throw reader.error("malformed header field '" + tok[i] + "'");
                fields[tok[i].substr(0, eq)] = detail::parse_int<long long>(std::string_view(tok[i]).substr(eq + 1), reader);
            }
            for (const char* key : {"p", "t", "n", "r"})
                if (!fields.count(key)) throw reader.error(std::string("header is missing ") + key);
            if (fields["p"] < 2 || fields["t"] < 1 || fields["n"] < 0 || fields["r"] < 0)
                throw reader.error("header values out of range");
            try {
                const auto p = static_cast<Residue>(fields["p"]);
                code = IndexCode{p, static_cast<int>(fields["t"]), static_cast<int>(fields["n"]),
                                 GFMatrix(p, 0, static_cast<int>(fields["t"] * fields["n"])), {}};
            } catch (const InputError& e) {
                throw reader.error(e.what());
            }
            declared_rows = static_cast<int>(fields["r"]);
            continue;
        }
        const auto cols = static_cast<std::size_t>(code->encoding.cols());
        if (tok[0] == "row") {
            if (tok.size() != cols + 1) throw reader.error("row has the wrong number of coefficients");
            std::vector<Residue> row;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const auto v = detail::parse_int<long long>(tok[i], reader);
                if (v < 0 || v >= static_cast<long long>(code->p)) throw reader.error("coefficient outside [0, p)");
                row.push_back(static_cast<Residue>(v));
            }
            code->encoding.append_row(row);
        } else if (tok[0] == "decode") {
            if (tok.size() < 4 || tok[3] != "rows") throw reader.error("expected 'decode <user> <slot> rows ... side ...'");
            const int user = detail::parse_int(tok[1], reader);
            const int slot = detail::parse_int(tok[2], reader);
            auto& d = decoders[user];
            d.user = user;
            if (slot != static_cast<int>(d.slots.size())) throw reader.error("decode slots must appear in order");
            SubsymbolRecipe recipe;
            std::size_t i = 4;
            for (; i < tok.size() && tok[i] != "side"; ++i) recipe.row_coeffs.push_back(static_cast<Residue>(detail::parse_int<long long>(tok[i], reader)));
            if (i == tok.size()) throw reader.error("decode line is missing 'side'");
            for (++i; i < tok.size(); ++i) {
                const auto colon = tok[i].find(':');
                if (colon == std::string::npos) throw reader.error("expected '<column>:<coefficient>'");
                recipe.side.emplace_back(detail::parse_int(std::string_view(tok[i]).substr(0, colon), reader),
                                         static_cast<Residue>(detail::parse_int<long long>(std::string_view(tok[i]).substr(colon + 1), reader)));
            }
            d.slots.push_back(std::move(recipe));
        } else {
            throw reader.error("unknown directive '" + tok[0] + "'");
        }
    }
    if (!code) throw InputError("empty index code file");
    if (code->r() != declared_rows) throw InputError("header declares " + std::to_string(declared_rows) + " rows, found " + std::to_string(code->r()));
    for (auto& [user, d] : decoders) code->decoders.push_back(std::move(d));
    return std::move(*code);
}

}  // namespace gnskit
