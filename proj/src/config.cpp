#include "ccstab/config.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <mutex>
#include <string>

#include "ccstab/errors.hpp"

namespace ccstab {

namespace {

std::mutex g_caps_mu;
Caps g_caps;
std::atomic<unsigned> g_threads{1};

std::size_t parse_size(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw PreconditionError("bad cap value '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

const Caps& caps() {
    std::lock_guard lock(g_caps_mu);
    return g_caps;
}

void set_caps(const Caps& c) {
    std::lock_guard lock(g_caps_mu);
    g_caps = c;
}

void apply_cap_override(std::string_view spec) {
    Caps c = caps();
    if (spec.empty()) return;
    if (spec.find('=') == std::string_view::npos) {
        const std::size_t v = parse_size(spec);
        for (std::size_t* f : {&c.pair_n, &c.two_extension_n, &c.two_point_n, &c.wl3_n, &c.wl4_n, &c.orbit_n,
                               &c.game_n}) {
            *f = std::max(*f, v);
        }
        set_caps(c);
        return;
    }
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        std::string_view item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw PreconditionError("bad cap override '" + std::string(item) + "'");
        const auto name = item.substr(0, eq);
        const auto value = parse_size(item.substr(eq + 1));
        if (name == "pair") c.pair_n = value;
        else if (name == "two_extension") c.two_extension_n = value;
        else if (name == "two_point") c.two_point_n = value;
        else if (name == "wl3") c.wl3_n = value;
        else if (name == "wl4") c.wl4_n = value;
        else if (name == "orbit") c.orbit_n = value;
        else if (name == "game") c.game_n = value;
        else throw PreconditionError("unknown cap '" + std::string(name) + "'");
    }
    set_caps(c);
}

void apply_cap_override_from_env() {
    if (const char* v = std::getenv("CCSTAB_CAP_OVERRIDE")) apply_cap_override(v);
}

void check_cap(std::string_view name, std::size_t value, std::size_t limit) {
    if (value > limit) throw CapExceeded(std::string(name), value, limit);
}

unsigned num_threads() { return g_threads.load(); }
void set_num_threads(unsigned k) { g_threads.store(std::max(1u, k)); }

}  // namespace ccstab
