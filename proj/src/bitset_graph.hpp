#pragma once

// 64-bit adjacency masks for the exponential searches.

#include <bit>
#include <cstdint>
#include <vector>

#include "gnskit/digraph.hpp"

namespace gnskit::detail {

using Mask = std::uint64_t;

inline Mask bit(int v) { return Mask{1} << v; }

inline int lowest(Mask m) { return std::countr_zero(m); }

inline int popcount(Mask m) { return std::popcount(m); }

struct MaskGraph {
    int n = 0;
    std::vector<Mask> out;
    std::vector<Mask> in;

    explicit MaskGraph(const Digraph& g) : n(g.order()), out(static_cast<std::size_t>(n), 0), in(static_cast<std::size_t>(n), 0) {
        for (const auto& [u, v] : g.edges()) {
            out[static_cast<std::size_t>(u)] |= bit(v);
            in[static_cast<std::size_t>(v)] |= bit(u);
        }
    }

    Mask all() const { return n == 64 ? ~Mask{0} : bit(n) - 1; }

    /// Drops vertices without an in- or out-neighbour inside the set until
    /// none remain; what is left is empty iff the induced subgraph is acyclic.
    Mask core(Mask alive) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (Mask rest = alive; rest; rest &= rest - 1) {
                const int v = lowest(rest);
                if (!(out[static_cast<std::size_t>(v)] & alive) || !(in[static_cast<std::size_t>(v)] & alive)) {
                    alive &= ~bit(v);
                    changed = true;
                }
            }
        }
        return alive;
    }

    bool acyclic(Mask alive) const { return core(alive) == 0; }
};

}  // namespace gnskit::detail
