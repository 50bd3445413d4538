#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccstab/cc2.hpp"
#include "ccstab/errors.hpp"
#include "ccstab/graph.hpp"
#include "json.hpp"

namespace ccstab {

/// GF(q) for q in {2,3,4,5,7,8,9}. Elements are 0..q-1; for q = p^k an
/// element encodes its polynomial coefficients in base p.
class FiniteField {
public:
    explicit FiniteField(unsigned q);
    unsigned order() const noexcept { return q_; }
    unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
    unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }
    unsigned neg(unsigned a) const;
    unsigned inv(unsigned a) const;

private:
    unsigned q_;
    std::vector<unsigned> add_, mul_;
};

struct IncidenceStructure {
    std::size_t q = 0;
    std::size_t points = 0;
    std::vector<std::vector<Point>> lines;  // each sorted
};

class PlaneError : public Error {
public:
    using Error::Error;
};

/// Throws PlaneError naming the violated axiom and a witness.
void validate_plane(const IncidenceStructure& p);

IncidenceStructure pg2(unsigned q);
/// Plane file: optional `plane <q>` header, then one plane-line per text line.
IncidenceStructure load_plane(std::istream& in);
IncidenceStructure load_plane_file(const std::string& path);
void write_plane(std::ostream& out, const IncidenceStructure& p);
IncidenceStructure dual_plane(const IncidenceStructure& p);

/// Points are vertices 0..p-1, lines p..2p-1.
Graph incidence_graph_of(const IncidenceStructure& p);
PairColoring incidence_graph(const IncidenceStructure& p);

/// Rank-4 scheme with raw labels 0..3 = s0 (diagonal), s1 (distinct of the
/// same kind), s2 (incident), s3 (non-incident).
CoherentConfiguration plane_scheme(const IncidenceStructure& p);

/// Base relation index 0..3 of (a,b) in the plane scheme.
int plane_relation(const IncidenceStructure& p, Point a, Point b);

/// Three distinct elements of the same kind that are collinear (points on
/// one line) or concurrent (lines through one point).
bool plane_collinear(const IncidenceStructure& p, Point a, Point b, Point c);

struct OnePointSummary {
    std::size_t rank = 0;
    std::array<std::size_t, 4> fiber_sizes{};  // by base relation of (alpha, x)
    std::array<std::array<std::size_t, 4>, 4> block_table{};
};

OnePointSummary one_point_summary(const IncidenceStructure& p, const CoherentConfiguration& ext, Point alpha);

/// Structural key of each class of the one-point extension at alpha: fiber
/// index of both ends, base relation, and the collinearity flag. Returns an
/// empty vector if the key is not constant on classes or not injective.
std::vector<std::array<int, 4>> one_point_class_keys(const IncidenceStructure& p, const CoherentConfiguration& ext,
                                                     Point alpha);

/// The collinear part of s_1 inside alpha s_1 is a relation of X_alpha and
/// equals (s_122 . s_221) minus the diagonal, where s_ijk = (alpha s_i x
/// alpha s_k) intersected with s_j.
bool collinearity_identity_check(const IncidenceStructure& p, const CoherentConfiguration& ext, Point alpha);

struct PlaneReportOptions {
    std::size_t max_two_extension_q = 4;
    bool one_point = true;
};

nlohmann::json plane_report(const IncidenceStructure& p, const PlaneReportOptions& opt = {});

}  // namespace ccstab
