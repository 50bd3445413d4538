#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccstab/core.hpp"

namespace ccstab {

/// Orbits of the color-preserving automorphism group.
struct OrbitPartition {
    std::size_t n = 0;
    std::vector<std::uint32_t> points;   // orbit id per point
    PairColoring pairs;                  // orbit partition of Omega^2 (labels are orbit ids)
    std::vector<std::uint32_t> triples;  // orbit id per triple, if requested
    std::vector<std::vector<Point>> generators;
};

/// Backtracking search with joint color-refinement pruning; collects
/// generators along the point-stabilizer chain and unions tuples under them.
/// Checks the orbit cap.
OrbitPartition brute_orbits(const PairColoring& x, int max_arity = 2);

/// An automorphism of x mapping prefix[i].first to prefix[i].second, if any.
std::optional<std::vector<Point>> find_automorphism(const PairColoring& x, std::span<const PointPair> prefix);

/// g preserves every class of p: p(a,b) = p(g a, g b).
bool preserves(const PairColoring& p, std::span<const Point> g);

enum class Winner { Spoiler, Duplicator };

/// The bijective pebble game with m + 1 pebble pairs on two rainbows, under
/// the similarity matching equal color names. Duplicator's winning positions
/// are the greatest fixed point of "locally an isomorphism and survives one
/// more round", computed once over all positions and kept.
class PebbleGame {
public:
    PebbleGame(const PairColoring& g, const PairColoring& h, std::size_t m = 2);
    /// x and x2 of equal length at most m pebble the first positions.
    Winner winner(std::span<const Point> x, std::span<const Point> x2);
    std::size_t positions() const noexcept { return win_.size(); }

private:
    std::size_t position(std::span<const Point> x, std::span<const Point> x2) const;
    bool local(std::size_t pos) const;
    bool survives(std::size_t pos) const;
    void solve();

    std::size_t n_, n2_, pebbles_, K_;
    std::vector<std::uint32_t> cg_, ch_;  // colors as common ids
    std::vector<std::uint8_t> win_;
    bool solved_ = false;
};

/// Fresh solve for one initial configuration.
Winner pebble_game(const PairColoring& g, const PairColoring& h, std::size_t m, std::span<const Point> x,
                   std::span<const Point> x2);

}  // namespace ccstab
