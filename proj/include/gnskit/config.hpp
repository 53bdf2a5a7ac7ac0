#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gnskit {

/// Size limits for the exponential-time routines. Every exact search
/// refuses inputs above its cap with a CapacityError instead of running
/// unbounded.
struct Caps {
    std::size_t product_vertices = 5000;   // tensor powers, products, blowups
    std::size_t mais_vertices = 22;        // mais_exact / min_fvs_exact
    std::size_t alpha_vertices = 30;       // alpha_exact
    std::size_t gns_cuttable = 18;         // min_gns_cut_exact
    std::size_t rcp_cycles = 20000;        // rcp_exact
    std::size_t enum_cycles = 1000000;     // enumerate_simple_cycles default
    std::size_t metric_constraints = 10000;  // solve_spreading_metric
    std::size_t minrank_bits = 16;         // minrank: p^|E| <= 2^bits
    std::size_t code_lcm = 64;             // build_cycle_code blowup factor
    std::size_t ls_vertices = 5000;        // lubetzky_stav

    /// Applies "name=value,name=value" overrides; unknown names or
    /// malformed values throw InputError.
    void apply_overrides(std::string_view spec);

    /// Defaults, then the GNSKIT_CAP_OVERRIDES environment variable.
    static Caps from_environment();
};

struct Options {
    Caps caps;
    unsigned threads = 0;  // 0 = hardware concurrency

    unsigned worker_count() const;
};

}  // namespace gnskit
