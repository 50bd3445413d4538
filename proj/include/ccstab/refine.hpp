#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ccstab/core.hpp"

namespace ccstab {

/// Per-structure census: (label, class size) sorted by label.
using Census = std::vector<std::pair<std::uint32_t, std::size_t>>;

Census census_of(const PairColoring& p);

/// Pre-refinement split. Each pair (a,b) gets the name of
/// (a == b, label(a,b), label(b,a), marks(a,b), marks(b,a)) where marks(a,b) is
/// the list of indices i with (a,b) in distinguished[i]. The result is a
/// rainbow whenever the input labels are. `x` must have a namer.
PairColoring initial_split(const PairColoring& x, std::span<const Relation> distinguished);

/// As above with marks given per cell as already-interned label ids
/// (0 = unmarked is not special; callers pass a uniform value for unmarked).
PairColoring initial_split_marked(const PairColoring& x, std::span<const std::uint32_t> cell_mark);

struct RefineResult {
    std::vector<PairColoring> out;
    std::size_t iterations = 0;              // rounds run, including the final non-splitting one
    std::vector<std::vector<Census>> census;  // [round][structure], round 0 = input; filled on request
};

/// Two-dimensional refinement of several colorings in lockstep, all sharing
/// one namer. A round renames pair (a,b) by its color together with the
/// multiset of color pairs (c(a,g), c(g,b)) over all g. Rounds stop once no
/// structure splits; the returned labels are those of the last round, so
/// equal labels in different structures mean equal refinement histories.
/// Inputs must be rainbows.
RefineResult refine_batch(std::vector<PairColoring> start, bool record_census = false);

PairColoring refine(PairColoring start, std::size_t* iterations = nullptr);

}  // namespace ccstab
