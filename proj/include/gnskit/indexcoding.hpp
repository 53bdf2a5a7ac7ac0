#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnskit/config.hpp"
#include "gnskit/cyclepack.hpp"
#include "gnskit/digraph.hpp"
#include "gnskit/rational.hpp"

namespace gnskit {

using Residue = std::uint32_t;

bool is_prime(std::uint64_t p);

/// Dense matrix over the prime field F_p.
class GFMatrix {
public:
    GFMatrix() = default;
    /// Zero matrix; InputError unless p is a prime below 2^16.
    GFMatrix(Residue p, int rows, int cols);
    /// Entries are reduced mod p.
    GFMatrix(Residue p, const std::vector<std::vector<long long>>& rows, int cols);

    Residue p() const noexcept { return p_; }
    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    Residue at(int r, int c) const { return entries_[index(r, c)]; }
    void set(int r, int c, long long value);
    std::vector<Residue> row(int r) const;
    void append_row(const std::vector<Residue>& values);

    bool operator==(const GFMatrix&) const = default;

private:
    std::size_t index(int r, int c) const;

    Residue p_ = 2;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Residue> entries_;
};

std::size_t gf_rank(const GFMatrix& mat);

struct MinrankResult {
    std::size_t rank = 0;
    GFMatrix witness;  // unit diagonal, support inside the edges
};

/// Exhaustive search over fitting matrices with unit diagonal. The witness
/// is the lexicographically smallest optimal assignment (row by row, each
/// row's edge entries in column order). CapacityError when
/// |E| * log2(p) exceeds caps.minrank_bits.
MinrankResult minrank(const Digraph& g, Residue p, const Options& options = {});

/// True iff `mat` has a nonzero diagonal and zeros outside the edges of g.
bool fits(const Digraph& g, const GFMatrix& mat);

/// minrank(blowup(g, k)) / k.
Rational minrank_blowup_normalized(const Digraph& g, Residue p, int k, const Options& options = {});

/// One subsymbol of a user's message as a combination of received rows and
/// side-information subsymbols.
struct SubsymbolRecipe {
    std::vector<Residue> row_coeffs;                // one per transmission
    std::vector<std::pair<int, Residue>> side;      // (column, coefficient)

    bool operator==(const SubsymbolRecipe&) const = default;
};

struct Decoder {
    int user = 0;
    std::vector<SubsymbolRecipe> slots;  // t recipes

    bool operator==(const Decoder&) const = default;
};

/// Vector-linear index code: t subsymbols per message, subsymbol s of
/// message v is column v*t + s of the encoding matrix (r x t*n).
struct IndexCode {
    Residue p = 2;
    int t = 1;
    int n = 0;
    GFMatrix encoding;
    std::vector<Decoder> decoders;

    int r() const noexcept { return encoding.rows(); }
    Rational rate() const { return ratio(r(), t); }

    bool operator==(const IndexCode&) const = default;
};

/// Every message sent uncoded (t = 1).
IndexCode uncoded_code(const Digraph& g, Residue p);

/// One saved transmission per cycle copy: the packing is scaled by the LCM
/// t of its denominators, each copy takes the next free slot of each of its
/// vertices and sends the consecutive sums along the cycle; unused slots go
/// uncoded. Rate is n - packing.value; decoders are attached and verified.
IndexCode build_cycle_code(const Digraph& g, const CyclePacking& packing, Residue p, const Options& options = {});

struct CodeVerdict {
    std::vector<int> failing_users;  // rank condition fails
    std::vector<int> bad_decoders;   // attached recipe is wrong
    bool ok() const noexcept { return failing_users.empty() && bad_decoders.empty(); }
};

/// For each user i, checks rank([R; S_i]) == rank([R; S_i; e]) for every
/// subsymbol e of message i, where S_i holds the side-information unit
/// vectors. Attached decoders are checked symbolically.
CodeVerdict verify_index_code(const Digraph& g, const IndexCode& code);

/// Decoders derived from the encoding matrix; users that cannot decode get
/// no decoder.
std::vector<Decoder> derive_decoders(const Digraph& g, const IndexCode& code);

/// m - beta; InputError unless 0 <= beta <= m.
Rational co_rate_from_beta(long m, const Rational& beta);

struct UncertaintyCheck {
    std::size_t minrank_blowup = 0;             // minrk(g[k1])
    std::size_t minrank_complement_blowup = 0;  // minrk(complement(g)[k2])
    bool holds = false;                         // product >= k1*k2*n
};

UncertaintyCheck uncertainty_check(const Digraph& g, Residue p, int k1, int k2, const Options& options = {});

/// `code p=<p> t=<t> n=<n> r=<r>`, then `row <c...>` per transmission and
/// `decode <user> <slot> rows <c...> side <col>:<c> ...` recipe lines.
std::string serialize_index_code(const IndexCode& code, std::string_view header_comment = {});
IndexCode parse_index_code(std::string_view text);

}  // namespace gnskit
