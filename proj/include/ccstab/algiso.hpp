#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccstab/cc2.hpp"
#include "ccstab/refine.hpp"
#include "json.hpp"

namespace ccstab {

/// Colors of a configuration ordered by the fingerprints of their names.
/// Names are content-addressed, so the order, census and tensor do not depend
/// on how the ground set is numbered.
struct CanonicalColoring {
    CoherentConfiguration cc;
    std::vector<std::uint32_t> order;     // canonical position -> dense color
    std::vector<std::uint32_t> position;  // dense color -> canonical position
    struct Entry {
        std::uint64_t name = 0;
        std::size_t size = 0;
        std::size_t valency = 0;
        std::size_t left_support = 0;   // size of the left fiber
        std::size_t right_support = 0;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> census;
    IntersectionTensor tensor;  // in canonical order
};

CanonicalColoring canonical_form(const CoherentConfiguration& cc);
bool same_census(const CanonicalColoring& a, const CanonicalColoring& b);
bool same_tensor(const CanonicalColoring& a, const CanonicalColoring& b);

/// Partial map from dense colors of one configuration to those of another.
using ColorMap = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct AlgIsoWitness {
    std::shared_ptr<const CoherentConfiguration> source, target;
    std::vector<std::uint32_t> phi;  // dense color of source -> dense color of target
    bool tensors_match = false;
    bool supports_match = false;
    std::optional<std::pair<std::vector<Point>, std::vector<Point>>> points;
};

struct AlgIsoAttempt {
    std::optional<AlgIsoWitness> witness;
    std::optional<std::size_t> diverging_round;
    Census census_a, census_b;  // at the diverging round
    NamerPtr namer;             // names used in the censuses
    std::string reason;
};

/// Synchronized refinement of a and b in one fresh namer. Seeded classes get
/// a shared name per seed entry; every other class is named by the
/// fingerprint of its label, so unseeded classes meet their namesakes.
AlgIsoAttempt try_alg_iso(const CoherentConfiguration& a, const CoherentConfiguration& b, const ColorMap& seed);
std::optional<AlgIsoWitness> find_alg_iso(const CoherentConfiguration& a, const CoherentConfiguration& b,
                                          const ColorMap& seed);

AlgIsoWitness identity_witness(const CoherentConfiguration& cc);

/// Exhaustive check of c_{phi r, phi s}^{phi t} = c_{r,s}^t.
bool tensors_agree(const CoherentConfiguration& a, const CoherentConfiguration& b, std::span<const std::uint32_t> phi);

/// The xx'-extension of w, by joint refinement of the two point extensions.
std::optional<AlgIsoWitness> extend_point(const AlgIsoWitness& w, std::span<const Point> x,
                                          std::span<const Point> x2);

/// Composition w2 after w1; w1's target and w2's source must be the same
/// partition.
AlgIsoWitness compose(const AlgIsoWitness& w1, const AlgIsoWitness& w2);

struct SesquiReport {
    bool s1 = true, s2 = true;
    struct S1Witness {
        Point alpha;
        std::uint32_t relation;     // dense color s with alpha s split
        std::vector<Point> fiber;   // a fiber of X_alpha strictly inside alpha s
    };
    std::optional<S1Witness> s1_witness;
    std::optional<std::pair<Point, Point>> s2_witness;  // same fiber, no extension
    bool ok() const noexcept { return s1 && s2; }
};

SesquiReport sesquiclosed_check(const CoherentConfiguration& cc);

struct SesquiAlgIsoReport {
    bool ok = true;
    std::optional<std::pair<Point, Point>> witness;
};
SesquiAlgIsoReport sesquiclosed_algiso_report(const AlgIsoWitness& w);
bool sesquiclosed_algiso_check(const AlgIsoWitness& w);

struct Verdict {
    std::string method;
    bool equivalent = false;
    nlohmann::json certificate = nlohmann::json::object();
};
nlohmann::json to_json(const Verdict& v);

/// Throws PreconditionError unless both rainbows have the same size and the
/// same raw color census.
void require_standard_similarity(const PairColoring& g, const PairColoring& h);

Verdict wlm_equivalent(const PairColoring& g, const PairColoring& h, std::size_t m);
Verdict wld_equivalent(const PairColoring& g, const PairColoring& h);
/// W (deep_stab over `selected`) of both inputs in one namer, then
/// find_alg_iso between the results.
Verdict deepstab_equivalent(const PairColoring& g, const PairColoring& h, std::span<const int> selected);
/// Plain 2-dim closure comparison, with the census certificate.
Verdict wl_equivalent(const PairColoring& g, const PairColoring& h);

/// Census as JSON, names as fingerprints, sorted.
nlohmann::json census_json(const Census& c, const Namer& namer);
/// Entries whose sizes differ between a and b.
nlohmann::json census_difference(const Census& a, const Census& b, const Namer& namer);

std::string name_hex(std::uint64_t fingerprint);

}  // namespace ccstab
