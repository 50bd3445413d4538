#pragma once

#include <cstddef>
#include <string_view>

namespace ccstab {

/// Size limits for the dense engines. All values are ground-set sizes n.
struct Caps {
    std::size_t pair_n = 512;        // 2-ary colorings
    std::size_t two_extension_n = 64;  // tensor square / 2-extension (n^2 points)
    std::size_t two_point_n = 64;    // sigma_3 / sigma_4 (n^2 two-point extensions)
    std::size_t wl3_n = 200;
    std::size_t wl4_n = 40;
    std::size_t orbit_n = 10;        // brute-force automorphism search
    std::size_t game_n = 5;          // pebble-game solver
};

const Caps& caps();
void set_caps(const Caps& c);

/// Applies an override string: either a bare integer (every cap raised to at
/// least that value) or a comma list `name=value` with names
/// pair, two_extension, two_point, wl3, wl4, orbit, game.
/// Throws PreconditionError on unknown names.
void apply_cap_override(std::string_view spec);

/// Reads CCSTAB_CAP_OVERRIDE if set.
void apply_cap_override_from_env();

void check_cap(std::string_view name, std::size_t value, std::size_t limit);

unsigned num_threads();
void set_num_threads(unsigned k);

}  // namespace ccstab
