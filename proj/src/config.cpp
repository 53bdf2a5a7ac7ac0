#include "gnskit/config.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <thread>

#include "gnskit/error.hpp"

namespace gnskit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

void Caps::apply_overrides(std::string_view spec) {
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        const auto item = trim(spec.substr(0, comma));
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw InputError("cap override '" + std::string(item) + "' lacks '='");
        const auto name = trim(item.substr(0, eq));
        const auto text = trim(item.substr(eq + 1));
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw InputError("cap override '" + std::string(item) + "' has a malformed value");

        if (name == "product_vertices") product_vertices = value;
        else if (name == "mais_vertices") mais_vertices = value;
        else if (name == "alpha_vertices") alpha_vertices = value;
        else if (name == "gns_cuttable") gns_cuttable = value;
        else if (name == "rcp_cycles") rcp_cycles = value;
        else if (name == "enum_cycles") enum_cycles = value;
        else if (name == "metric_constraints") metric_constraints = value;
        else if (name == "minrank_bits") minrank_bits = value;
        else if (name == "code_lcm") code_lcm = value;
        else if (name == "ls_vertices") ls_vertices = value;
        else throw InputError("unknown cap '" + std::string(name) + "'");
    }
}

Caps Caps::from_environment() {
    Caps caps;
    if (const char* env = std::getenv("GNSKIT_CAP_OVERRIDES")) caps.apply_overrides(env);
    return caps;
}

unsigned Options::worker_count() const {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace gnskit
