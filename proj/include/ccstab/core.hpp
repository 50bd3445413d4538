#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccstab/namer.hpp"

namespace ccstab {

using Point = std::size_t;
using PointPair = std::pair<Point, Point>;
/// A binary relation on the ground set, as an explicit pair list.
using Relation = std::vector<PointPair>;

/// A coloring of Omega x Omega by dense color ids 0..rank()-1.
///
/// `labels[c]` is the name of dense color c. For colorings read from files or
/// built from graphs the labels are the raw input color values and `namer` is
/// null; engine outputs carry names interned in `namer`.
struct PairColoring {
    std::size_t n = 0;
    std::vector<std::uint32_t> color;
    std::vector<std::uint32_t> labels;
    NamerPtr namer;

    std::size_t rank() const noexcept { return labels.size(); }
    std::uint32_t at(Point a, Point b) const noexcept { return color[a * n + b]; }
    std::uint32_t label_at(Point a, Point b) const noexcept { return labels[at(a, b)]; }

    /// Builds a coloring from arbitrary per-pair values; the values become the
    /// raw labels and dense ids follow the canonical naming rule.
    static PairColoring from_values(std::size_t n, std::span<const std::uint32_t> values);
    /// Diagonal / off-diagonal.
    static PairColoring trivial(std::size_t n);
    /// Every pair its own class.
    static PairColoring discrete(std::size_t n);
};

/// Dense renumbering shared by the 2-ary and m-ary engines: cells listed in
/// `first` are scanned before the rest, then all cells in order; each new raw
/// value gets the next id. Returns the dense ids; `raw_of_dense` receives the
/// raw value of each id.
std::vector<std::uint32_t> dense_renumber(std::span<const std::uint32_t> raw, std::span<const std::size_t> first,
                                          std::vector<std::uint32_t>& raw_of_dense);

/// Diagonal-touching colors first, then row-major first occurrence.
PairColoring canonical_renumber(const PairColoring& p);

/// Gives dense class c the label new_labels[c] (in `namer`); classes sharing a
/// label merge.
PairColoring recolor(const PairColoring& p, std::span<const std::uint32_t> new_labels, const NamerPtr& namer);

/// Coarsest common coarsening (join in the partition lattice). Throws
/// PreconditionError on size mismatch.
PairColoring join_partitions(const PairColoring& p, const PairColoring& q);

/// x <= y: every class of x is a union of classes of y.
bool partition_leq(const PairColoring& x, const PairColoring& y);
bool same_partition(const PairColoring& x, const PairColoring& y);

struct RainbowReport {
    bool c1 = true;  // diagonal is a union of classes
    bool c2 = true;  // transposes of classes are classes
    std::optional<PointPair> c1_witness;
    std::optional<std::pair<PointPair, PointPair>> c2_witness;
    bool ok() const noexcept { return c1 && c2; }
};

RainbowReport validate_rainbow(const PairColoring& p);

/// Transposition map on dense colors; nullopt if the coloring violates (C2).
std::optional<std::vector<std::uint32_t>> transpose_map(const PairColoring& p);

/// Image under a ground-set bijection: result(perm[a], perm[b]) = p(a, b).
/// Labels and namer are carried over.
PairColoring permute(const PairColoring& p, std::span<const Point> perm);

/// Ensures `p` has a namer. Raw labels are interned as Tag::Raw keys in
/// `target` (or in a fresh namer when `target` is null). Throws if `p`
/// already belongs to a different namer.
void adopt(PairColoring& p, const NamerPtr& target = nullptr);

/// Fibers: points a whose diagonal color class is shared, in order of first point.
std::vector<std::vector<Point>> fibers_of(const PairColoring& p);

/// Histogram of class sizes indexed by dense color.
std::vector<std::size_t> class_sizes(const PairColoring& p);

// Text format: "m 2 <n> <R>" then n rows of n integers.
PairColoring read_pair_coloring(std::istream& in);
void write_pair_coloring(std::ostream& out, const PairColoring& p);

}  // namespace ccstab
