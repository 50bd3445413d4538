#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "ccstab/cc2.hpp"
#include "ccstab/core.hpp"
#include "ccstab/graph.hpp"

namespace test_util {

inline std::vector<ccstab::Point> random_permutation(std::size_t n, std::mt19937& rng) {
    std::vector<ccstab::Point> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline std::vector<std::size_t> sorted_valencies(const ccstab::CoherentConfiguration& cc) {
    auto v = cc.valencies;
    std::sort(v.begin(), v.end());
    return v;
}

// Direct count |a r cap b s*| = #{g : c(a,g) = r, c(g,b) = s}.
inline std::size_t triangle_count(const ccstab::PairColoring& p, ccstab::Point a, ccstab::Point b, std::uint32_t r,
                                  std::uint32_t s) {
    std::size_t k = 0;
    for (ccstab::Point g = 0; g < p.n; ++g)
        if (p.at(a, g) == r && p.at(g, b) == s) ++k;
    return k;
}

// All permutations of 0..n-1 preserving every class of p (n small).
inline std::vector<std::vector<ccstab::Point>> all_automorphisms(const ccstab::PairColoring& p) {
    std::vector<std::vector<ccstab::Point>> out;
    std::vector<ccstab::Point> g(p.n);
    std::iota(g.begin(), g.end(), 0);
    do {
        bool ok = true;
        for (ccstab::Point a = 0; a < p.n && ok; ++a)
            for (ccstab::Point b = 0; b < p.n && ok; ++b) ok = p.at(a, b) == p.at(g[a], g[b]);
        if (ok) out.push_back(g);
    } while (std::next_permutation(g.begin(), g.end()));
    return out;
}

}  // namespace test_util
