#include "ccstab/planes.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ccstab/config.hpp"

namespace ccstab {

namespace {

struct FieldSpec {
    unsigned p, k;
    std::vector<unsigned> poly;  // monic modulus, low coefficients first, without the leading 1
};

FieldSpec field_spec(unsigned q) {
    switch (q) {
        case 2: case 3: case 5: case 7: return {q, 1, {}};
        case 4: return {2, 2, {1, 1}};     // x^2 + x + 1
        case 8: return {2, 3, {1, 1, 0}};  // x^3 + x + 1
        case 9: return {3, 2, {1, 0}};     // x^2 + 1
        default: throw PreconditionError("unsupported field order " + std::to_string(q));
    }
}

std::vector<unsigned> digits(unsigned a, unsigned p, unsigned k) {
    std::vector<unsigned> d(k);
    for (unsigned i = 0; i < k; ++i, a /= p) d[i] = a % p;
    return d;
}

unsigned undigits(const std::vector<unsigned>& d, unsigned p) {
    unsigned a = 0;
    for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
    return a;
}

}  // namespace

FiniteField::FiniteField(unsigned q) : q_(q), add_(q * q), mul_(q * q) {
    const FieldSpec f = field_spec(q);
    for (unsigned a = 0; a < q; ++a) {
        const auto da = digits(a, f.p, f.k);
        for (unsigned b = 0; b < q; ++b) {
            const auto db = digits(b, f.p, f.k);
            std::vector<unsigned> s(f.k);
            for (unsigned i = 0; i < f.k; ++i) s[i] = (da[i] + db[i]) % f.p;
            add_[a * q + b] = undigits(s, f.p);
            std::vector<unsigned> prod(2 * f.k, 0);
            for (unsigned i = 0; i < f.k; ++i)
                for (unsigned j = 0; j < f.k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % f.p;
            // reduce: x^k = -(poly)
            for (unsigned deg = 2 * f.k - 1; deg >= f.k && f.k > 1; --deg) {
                const unsigned c = prod[deg];
                if (!c) continue;
                prod[deg] = 0;
                for (unsigned i = 0; i < f.k; ++i)
                    prod[deg - f.k + i] = (prod[deg - f.k + i] + (f.p - f.poly[i]) * c) % f.p;
            }
            prod.resize(f.k);
            mul_[a * q + b] = undigits(prod, f.p);
        }
    }
    // field axioms
    for (unsigned a = 0; a < q; ++a) {
        if (a && inv(a) >= q) throw Error("field construction: missing inverse");
        for (unsigned b = 0; b < q; ++b) {
            if (add(a, b) != add(b, a) || mul(a, b) != mul(b, a)) throw Error("field construction: not commutative");
            for (unsigned c = 0; c < q; ++c) {
                if (add(add(a, b), c) != add(a, add(b, c)) || mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw Error("field construction: not associative");
                if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) throw Error("field construction: not distributive");
            }
        }
    }
}

unsigned FiniteField::neg(unsigned a) const {
    for (unsigned b = 0; b < q_; ++b)
        if (add(a, b) == 0) return b;
    return q_;
}

unsigned FiniteField::inv(unsigned a) const {
    for (unsigned b = 1; b < q_; ++b)
        if (mul(a, b) == 1) return b;
    return q_;
}

namespace {

// points x lines incidence matrix
std::vector<std::uint8_t> incidence_matrix(const IncidenceStructure& p) {
    std::vector<std::uint8_t> m(p.points * p.lines.size(), 0);
    for (std::size_t l = 0; l < p.lines.size(); ++l)
        for (Point x : p.lines[l]) m[x * p.lines.size() + l] = 1;
    return m;
}

struct Incidence {
    const IncidenceStructure& p;
    std::vector<std::uint8_t> m;
    explicit Incidence(const IncidenceStructure& pl) : p(pl), m(incidence_matrix(pl)) {}
    bool incident(Point pt, std::size_t line) const { return m[pt * p.lines.size() + line] != 0; }
    // relation index in the scheme on points + lines
    int relation(Point a, Point b) const {
        if (a == b) return 0;
        const bool pa = a < p.points, pb = b < p.points;
        if (pa == pb) return 1;
        return (pa ? incident(a, b - p.points) : incident(b, a - p.points)) ? 2 : 3;
    }
    bool collinear(Point a, Point b, Point c) const {
        if (a == b || b == c || a == c) return false;
        const std::size_t P = p.points;
        const bool pa = a < P;
        if (pa != (b < P) || pa != (c < P)) return false;
        if (pa) {
            for (std::size_t l = 0; l < p.lines.size(); ++l)
                if (incident(a, l) && incident(b, l) && incident(c, l)) return true;
        } else {
            for (Point x = 0; x < P; ++x)
                if (incident(x, a - P) && incident(x, b - P) && incident(x, c - P)) return true;
        }
        return false;
    }
};

std::string pair_str(std::size_t a, std::size_t b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

void validate_plane(const IncidenceStructure& p) {
    const std::size_t q = p.q;
    if (q < 2) throw PlaneError("order must be at least 2");
    const std::size_t P = q * q + q + 1;
    if (p.points != P) throw PlaneError("point count " + std::to_string(p.points) + ", expected " + std::to_string(P));
    if (p.lines.size() != P)
        throw PlaneError("line count " + std::to_string(p.lines.size()) + ", expected " + std::to_string(P));
    for (std::size_t l = 0; l < P; ++l) {
        const auto& L = p.lines[l];
        if (L.size() != q + 1)
            throw PlaneError("line size: line " + std::to_string(l) + " has " + std::to_string(L.size()) +
                             " points, expected " + std::to_string(q + 1));
        for (std::size_t i = 0; i < L.size(); ++i) {
            if (L[i] >= P) throw PlaneError("line " + std::to_string(l) + " has point " + std::to_string(L[i]) + " out of range");
            if (i && L[i] == L[i - 1]) throw PlaneError("line " + std::to_string(l) + " repeats point " + std::to_string(L[i]));
        }
    }
    std::vector<std::size_t> common(P * P, SIZE_MAX);  // first line through the pair
    std::vector<std::size_t> on(P, 0);
    for (std::size_t l = 0; l < P; ++l) {
        const auto& L = p.lines[l];
        for (Point x : L) ++on[x];
        for (std::size_t i = 0; i < L.size(); ++i) {
            for (std::size_t j = i + 1; j < L.size(); ++j) {
                auto& c = common[L[i] * P + L[j]];
                if (c != SIZE_MAX)
                    throw PlaneError("lines " + pair_str(c, l) + " share the two points " + pair_str(L[i], L[j]));
                c = l;
            }
        }
    }
    for (Point x = 0; x < P; ++x)
        if (on[x] != q + 1)
            throw PlaneError("point " + std::to_string(x) + " lies on " + std::to_string(on[x]) + " lines, expected " +
                             std::to_string(q + 1));
    for (Point x = 0; x < P; ++x)
        for (Point y = x + 1; y < P; ++y)
            if (common[x * P + y] == SIZE_MAX) throw PlaneError("points " + pair_str(x, y) + " have no common line");
    Incidence inc(p);
    for (std::size_t a = 0; a < P; ++a) {
        for (std::size_t b = a + 1; b < P; ++b) {
            std::size_t meet = 0;
            for (Point x = 0; x < P; ++x) meet += inc.incident(x, a) && inc.incident(x, b);
            if (meet != 1) throw PlaneError("lines " + pair_str(a, b) + " meet in " + std::to_string(meet) + " points");
        }
    }
    // nondegeneracy: four points, no three collinear
    auto coll = [&](Point a, Point b, Point c) {
        const std::size_t l = common[std::min(a, b) * P + std::max(a, b)];
        return inc.incident(c, l);
    };
    const std::size_t lim = std::min<std::size_t>(P, 16);
    for (Point a = 0; a < lim; ++a)
        for (Point b = a + 1; b < lim; ++b)
            for (Point c = b + 1; c < lim; ++c) {
                if (coll(a, b, c)) continue;
                for (Point d = c + 1; d < lim; ++d)
                    if (!coll(a, b, d) && !coll(a, c, d) && !coll(b, c, d)) return;
            }
    throw PlaneError("degenerate: no quadrilateral found");
}

IncidenceStructure pg2(unsigned q) {
    const FiniteField F(q);
    std::vector<std::array<unsigned, 3>> vecs;
    for (unsigned a = 0; a < q; ++a)
        for (unsigned b = 0; b < q; ++b) vecs.push_back({1, a, b});
    for (unsigned b = 0; b < q; ++b) vecs.push_back({0, 1, b});
    vecs.push_back({0, 0, 1});
    IncidenceStructure p;
    p.q = q;
    p.points = vecs.size();
    for (const auto& f : vecs) {
        std::vector<Point> L;
        for (Point x = 0; x < vecs.size(); ++x) {
            const auto& v = vecs[x];
            const unsigned dot = F.add(F.add(F.mul(f[0], v[0]), F.mul(f[1], v[1])), F.mul(f[2], v[2]));
            if (dot == 0) L.push_back(x);
        }
        p.lines.push_back(std::move(L));
    }
    validate_plane(p);
    return p;
}

IncidenceStructure load_plane(std::istream& in) {
    IncidenceStructure p;
    std::size_t header_q = 0;
    std::string line;
    std::size_t lineno = 0;
    Point max_pt = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::pair<std::string, std::size_t>> toks;
        for (std::size_t pos = 0;;) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) break;
            const auto end = line.find_first_of(" \t\r", pos);
            toks.emplace_back(line.substr(pos, end - pos), pos + 1);
            pos = end == std::string::npos ? line.size() : end;
        }
        if (toks.empty() || toks[0].first[0] == '#') continue;
        auto num = [&](std::size_t i) {
            const auto& [t, col] = toks[i];
            std::size_t used = 0;
            long long v = -1;
            try {
                v = std::stoll(t, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != t.size() || v < 0) throw FormatError("expected a non-negative integer, got '" + t + "'", lineno, col);
            return static_cast<std::size_t>(v);
        };
        if (toks[0].first == "plane") {
            if (!p.lines.empty() || header_q) throw FormatError("'plane' header must come first", lineno, 1);
            if (toks.size() != 2) throw FormatError("expected 'plane <q>'", lineno, 1);
            header_q = num(1);
            continue;
        }
        std::vector<Point> L;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            L.push_back(num(i));
            max_pt = std::max(max_pt, L.back());
        }
        std::sort(L.begin(), L.end());
        p.lines.push_back(std::move(L));
    }
    if (p.lines.empty()) throw FormatError("no lines", lineno + 1);
    p.q = p.lines.front().size() - 1;
    if (header_q && header_q != p.q)
        throw PlaneError("line size: header says order " + std::to_string(header_q) + " but line 0 has " +
                         std::to_string(p.lines.front().size()) + " points");
    p.points = std::max<std::size_t>(max_pt + 1, p.q * p.q + p.q + 1);
    validate_plane(p);
    return p;
}

IncidenceStructure load_plane_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    return load_plane(f);
}

void write_plane(std::ostream& out, const IncidenceStructure& p) {
    out << "plane " << p.q << '\n';
    for (const auto& L : p.lines) {
        for (std::size_t i = 0; i < L.size(); ++i) out << (i ? " " : "") << L[i];
        out << '\n';
    }
}

IncidenceStructure dual_plane(const IncidenceStructure& p) {
    validate_plane(p);
    IncidenceStructure d;
    d.q = p.q;
    d.points = p.lines.size();
    d.lines.assign(p.points, {});
    for (std::size_t l = 0; l < p.lines.size(); ++l)
        for (Point x : p.lines[l]) d.lines[x].push_back(l);
    validate_plane(d);
    return d;
}

Graph incidence_graph_of(const IncidenceStructure& p) {
    Graph g(2 * p.points);
    for (std::size_t l = 0; l < p.lines.size(); ++l)
        for (Point x : p.lines[l]) g.add_edge(x, p.points + l);
    return g;
}

PairColoring incidence_graph(const IncidenceStructure& p) { return to_rainbow(incidence_graph_of(p)); }

int plane_relation(const IncidenceStructure& p, Point a, Point b) { return Incidence(p).relation(a, b); }

bool plane_collinear(const IncidenceStructure& p, Point a, Point b, Point c) { return Incidence(p).collinear(a, b, c); }

CoherentConfiguration plane_scheme(const IncidenceStructure& p) {
    const Incidence inc(p);
    const std::size_t n = 2 * p.points;
    std::vector<std::uint32_t> v(n * n);
    for (Point a = 0; a < n; ++a)
        for (Point b = 0; b < n; ++b) v[a * n + b] = static_cast<std::uint32_t>(inc.relation(a, b));
    return as_cc(PairColoring::from_values(n, v));
}

OnePointSummary one_point_summary(const IncidenceStructure& p, const CoherentConfiguration& ext, Point alpha) {
    const Incidence inc(p);
    OnePointSummary s;
    s.rank = ext.rank();
    const std::size_t n = ext.n();
    for (Point x = 0; x < n; ++x) ++s.fiber_sizes[static_cast<std::size_t>(inc.relation(alpha, x))];
    std::vector<char> counted(ext.rank(), 0);
    for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) {
            const auto c = ext.coloring.at(a, b);
            if (counted[c]) continue;
            counted[c] = 1;
            ++s.block_table[static_cast<std::size_t>(inc.relation(alpha, a))][static_cast<std::size_t>(inc.relation(alpha, b))];
        }
    }
    return s;
}

std::vector<std::array<int, 4>> one_point_class_keys(const IncidenceStructure& p, const CoherentConfiguration& ext,
                                                     Point alpha) {
    const Incidence inc(p);
    const std::size_t n = ext.n(), R = ext.rank();
    std::vector<std::array<int, 4>> keys(R, {-1, -1, -1, -1});
    for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) {
            const std::array<int, 4> k{inc.relation(alpha, a), inc.relation(alpha, b), inc.relation(a, b),
                                       inc.collinear(alpha, a, b) ? 1 : 0};
            auto& slot = keys[ext.coloring.at(a, b)];
            if (slot[0] == -1) slot = k;
            else if (slot != k) return {};
        }
    }
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return {};
    return keys;
}

bool collinearity_identity_check(const IncidenceStructure& p, const CoherentConfiguration& ext, Point alpha) {
    const Incidence inc(p);
    const std::size_t n = ext.n();
    std::vector<int> fib(n);
    for (Point x = 0; x < n; ++x) fib[x] = inc.relation(alpha, x);
    // s_ijk = (alpha s_i x alpha s_k) with base relation s_j
    auto in_s = [&](int i, int j, int k, Point a, Point b) { return fib[a] == i && fib[b] == k && inc.relation(a, b) == j; };
    std::vector<char> coll(n * n, 0), prod(n * n, 0);
    for (Point b = 0; b < n; ++b)
        for (Point c = 0; c < n; ++c)
            coll[b * n + c] = fib[b] == 1 && fib[c] == 1 && inc.collinear(alpha, b, c);
    for (Point b = 0; b < n; ++b) {
        for (Point d = 0; d < n; ++d) {
            if (!in_s(1, 2, 2, b, d)) continue;
            for (Point c = 0; c < n; ++c)
                if (in_s(2, 2, 1, d, c)) prod[b * n + c] = 1;
        }
    }
    for (Point b = 0; b < n; ++b) prod[b * n + b] = 0;
    if (prod != coll) return false;
    // the collinear pairs must form a relation (union of classes) of X_alpha
    std::vector<int> state(ext.rank(), -1);
    for (std::size_t i = 0; i < n * n; ++i) {
        auto& s = state[ext.coloring.color[i]];
        if (s == -1) s = coll[i];
        else if (s != coll[i]) return false;
    }
    return true;
}

namespace {

std::vector<std::size_t> valencies_by_raw(const CoherentConfiguration& cc) {
    std::vector<std::size_t> v(cc.rank(), 0);
    for (std::size_t c = 0; c < cc.rank(); ++c) v[cc.coloring.labels[c]] = cc.valencies[c];
    return v;
}

}  // namespace

nlohmann::json plane_report(const IncidenceStructure& p, const PlaneReportOptions& opt) {
    using nlohmann::json;
    json r;
    json notices = json::array();
    r["q"] = p.q;
    const auto scheme = plane_scheme(p);
    r["scheme_rank"] = scheme.rank();
    r["valencies"] = valencies_by_raw(scheme);
    const std::size_t n = scheme.n();
    const Point line0 = p.points;
    if (p.q > opt.max_two_extension_q) {
        notices.push_back("two-extension skipped: q > " + std::to_string(opt.max_two_extension_q));
    } else if (n > caps().two_extension_n) {
        notices.push_back("two-extension skipped: cap two_extension (" + std::to_string(n) + " > " +
                          std::to_string(caps().two_extension_n) + ")");
    } else {
        const auto ext = two_extension(scheme);
        r["two_extension_rank"] = ext.rank();
        const auto par = parabolic_report(ext, scheme);
        r["parabolic_counts"] = par.row_counts;
        r["parabolic_is_relation"] = par.e_is_union;
        bool eq = true;
        for (Point alpha : {Point{0}, line0}) {
            const auto xa = point_extension(scheme, std::vector<Point>{alpha});
            std::vector<std::uint32_t> cell(n * n);
            for (Point b = 0; b < n; ++b)
                for (Point c = 0; c < n; ++c) cell[b * n + c] = ext.coloring.label_at(b * n + alpha, c * n + alpha);
            eq = eq && same_partition(xa.coloring, PairColoring::from_values(n, cell));
        }
        r["eq_070123x_check"] = eq;
    }
    if (opt.one_point) {
        const auto xa = point_extension(scheme, std::vector<Point>{0});
        const auto s = one_point_summary(p, xa, 0);
        r["one_point_rank"] = s.rank;
        r["one_point_fiber_sizes"] = s.fiber_sizes;
        r["one_point_block_table"] = s.block_table;
        r["collinearity_identity_check"] = collinearity_identity_check(p, xa, 0);
    }
    if (!notices.empty()) r["notices"] = notices;
    return r;
}

}  // namespace ccstab
