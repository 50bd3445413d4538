#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccstab/core.hpp"
#include "ccstab/refine.hpp"

namespace ccstab {

/// Coloring of Omega^m, flat row-major (first coordinate most significant).
struct MaryColoring {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<std::uint32_t> color;
    std::vector<std::uint32_t> labels;
    NamerPtr namer;

    std::size_t rank() const noexcept { return labels.size(); }
    std::size_t size() const noexcept { return color.size(); }
    std::size_t index(std::span<const Point> x) const;
    std::vector<Point> tuple(std::size_t idx) const;
};

/// Equality pattern of x as a restricted growth string packed in base m:
/// position i gets the index of the first position holding x_i.
std::uint32_t equality_pattern(std::span<const Point> x);

/// Number of maps {0..m-1} -> {0..m-1}.
std::size_t transform_count(std::size_t m);
/// The k-th such map, digits in base m.
std::vector<std::size_t> transform(std::size_t m, std::size_t k);

MaryColoring initial_coloring(const PairColoring& x, std::size_t m);

struct MaryRefineResult {
    std::vector<MaryColoring> out;
    std::size_t iterations = 0;
    std::vector<std::vector<Census>> census;  // [round][structure]
};

/// m-dimensional refinement of several colorings in lockstep (shared namer).
MaryRefineResult wlm_refine_batch(std::vector<MaryColoring> start, bool record_census = false);

MaryColoring wlm_closure(const PairColoring& x, std::size_t m, std::size_t* iterations = nullptr);

/// Refinement started from an m-ary coloring: the initial name of x combines
/// its equality pattern with the colors of all x^sigma.
MaryColoring wlm_refine(const MaryColoring& f, std::size_t* iterations = nullptr);

/// Classes pr_k X, merged where they overlap.
MaryColoring project(const MaryColoring& f, std::size_t k);
/// Classes {x : x.y in X}, with y of length m - k.
MaryColoring residue(const MaryColoring& f, std::span<const Point> y);

/// n_k(X): tuples of the class sharing the k-prefix of a representative.
std::size_t class_multiplicity(const MaryColoring& f, std::uint32_t cls, std::size_t k);

PairColoring to_pair_coloring(const MaryColoring& f);
MaryColoring from_pair_coloring(const PairColoring& p);

Census census_of(const MaryColoring& f);

/// Partition order on Omega^m, as for pair colorings.
bool partition_leq(const MaryColoring& x, const MaryColoring& y);
bool same_partition(const MaryColoring& x, const MaryColoring& y);

struct MaryReport {
    bool c1 = true, c2 = true, c3 = true;
    bool c3_exhaustive = true;
    std::optional<std::pair<std::vector<Point>, std::vector<Point>>> c1_witness;
    std::optional<std::pair<std::uint32_t, std::vector<std::size_t>>> c2_witness;  // class, transform
    std::optional<std::pair<std::vector<Point>, std::vector<Point>>> c3_witness;
    bool ok() const noexcept { return c1 && c2 && c3; }
};

MaryReport validate_mary(const MaryColoring& f);

/// Dump: `m <arity> <n> <R>` then n^m colors.
void write_mary(std::ostream& out, const MaryColoring& f);
MaryColoring read_mary(std::istream& in);

}  // namespace ccstab
