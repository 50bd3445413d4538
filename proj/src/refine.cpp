#include "ccstab/refine.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "ccstab/config.hpp"
#include "ccstab/errors.hpp"

namespace ccstab {

namespace {

std::vector<std::size_t> diagonal_cells(std::size_t n) {
    std::vector<std::size_t> d(n);
    for (std::size_t a = 0; a < n; ++a) d[a] = a * n + a;
    return d;
}

// Builds a coloring from one label per cell.
PairColoring from_cell_labels(std::size_t n, std::span<const std::uint32_t> cell_label, const NamerPtr& namer) {
    PairColoring p;
    p.n = n;
    p.namer = namer;
    const auto diag = diagonal_cells(n);
    p.color = dense_renumber(cell_label, diag, p.labels);
    return p;
}

// Deduplicates signatures within one round; ids are local. A signature is
// stored as [old color, idx0, count0, idx1, count1, ...] with idx increasing,
// where idx = r * R + s. Hashes are order-independent so callers can probe
// with unsorted counters and sort only when a signature is new.
class SignatureTable {
public:
    template <class Match, class Build>
    std::uint32_t find_or_add(std::uint64_t h, Match&& match, Build&& build) {
        if ((offsets_.size() + 1) * 2 > slots_.size()) grow();
        std::size_t i = h & (slots_.size() - 1);
        while (slots_[i]) {
            const std::uint32_t id = slots_[i] - 1;
            if (hashes_[id] == h && match(get(id))) return id;
            i = (i + 1) & (slots_.size() - 1);
        }
        const auto id = static_cast<std::uint32_t>(offsets_.size());
        offsets_.push_back(arena_.size());
        build(arena_);
        lengths_.push_back(arena_.size() - offsets_.back());
        hashes_.push_back(h);
        slots_[i] = id + 1;
        return id;
    }
    std::size_t size() const { return offsets_.size(); }
    std::span<const std::uint64_t> get(std::uint32_t id) const { return {arena_.data() + offsets_[id], lengths_[id]}; }

    static std::uint64_t entry_hash(std::uint64_t idx, std::uint64_t count) {
        return mix64(idx * 0x9e3779b97f4a7c15ULL + count);
    }
    static std::uint64_t finish(std::uint64_t old, std::size_t k, std::uint64_t sum) {
        return mix64(sum ^ mix64(old * 0xff51afd7ed558ccdULL + k));
    }

private:
    void grow() {
        std::vector<std::uint32_t> s(std::max<std::size_t>(64, slots_.size() * 2), 0);
        for (std::uint32_t id = 0; id < offsets_.size(); ++id) {
            std::size_t i = hashes_[id] & (s.size() - 1);
            while (s[i]) i = (i + 1) & (s.size() - 1);
            s[i] = id + 1;
        }
        slots_.swap(s);
    }

    std::vector<std::uint64_t> arena_;
    std::vector<std::size_t> offsets_, lengths_;
    std::vector<std::uint64_t> hashes_;
    std::vector<std::uint32_t> slots_;
};

constexpr std::size_t kDenseCounterLimit = std::size_t{1} << 18;

// One refinement round for one structure. Returns the per-cell new label.
std::vector<std::uint32_t> round_labels(const PairColoring& p) {
    const std::size_t n = p.n, R = p.rank();
    Namer& namer = *p.namer;

    // Work with ids ordered by label fingerprint, so that sorted signatures give
    // keys that do not depend on the order in which names were interned.
    std::vector<std::uint32_t> by_label(R);
    std::iota(by_label.begin(), by_label.end(), 0u);
    std::vector<std::uint64_t> fp(R);
    for (std::uint32_t c = 0; c < R; ++c) fp[c] = namer.fingerprint(p.labels[c]);
    std::sort(by_label.begin(), by_label.end(), [&](auto a, auto b) {
        return fp[a] != fp[b] ? fp[a] < fp[b] : p.labels[a] < p.labels[b];
    });
    std::vector<std::uint32_t> sid(R);
    for (std::uint32_t i = 0; i < R; ++i) sid[by_label[i]] = i;

    std::vector<std::uint32_t> cs(n * n), cst(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) cst[b * n + a] = cs[a * n + b] = sid[p.color[a * n + b]];
    std::vector<std::uint32_t> tr(R);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) tr[cs[a * n + b]] = cs[b * n + a];

    const bool dense = R * R <= kDenseCounterLimit;
    const unsigned T = std::min<unsigned>(num_threads(), static_cast<unsigned>(std::max<std::size_t>(1, n / 8)));
    std::vector<SignatureTable> tables(T);
    std::vector<std::uint32_t> local(n * n);

    // idx of (r,s) as seen from (a,b) maps to the idx seen from (b,a): (t(s), t(r))
    std::vector<std::uint32_t> flip(dense ? R * R : 0);
    for (std::size_t i = 0; i < flip.size(); ++i) flip[i] = static_cast<std::uint32_t>(std::size_t{tr[i % R]} * R + tr[i / R]);

    auto work = [&](unsigned t) {
        SignatureTable& tab = tables[t];
        std::vector<std::uint32_t> cnt(dense ? R * R : 0, 0);
        std::vector<std::uint32_t> touched;
        std::vector<std::uint64_t> vals(n);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> ent;
        auto emit_sorted = [&](std::uint64_t old) {
            return [&, old](std::vector<std::uint64_t>& out) {
                out.push_back(old);
                for (auto [k, c] : ent) {
                    out.push_back(k);
                    out.push_back(c);
                }
            };
        };
        auto match_sorted = [&](std::uint64_t old) {
            return [&, old](std::span<const std::uint64_t> w) {
                if (w[0] != old || w.size() != 1 + 2 * ent.size()) return false;
                for (std::size_t i = 0; i < ent.size(); ++i)
                    if (w[1 + 2 * i] != ent[i].first || w[2 + 2 * i] != ent[i].second) return false;
                return true;
            };
        };
        for (std::size_t a = t; a < n; a += T) {
            const std::uint32_t* row = cs.data() + a * n;
            for (std::size_t b = a; b < n; ++b) {
                const std::uint32_t* col = cst.data() + b * n;
                const std::uint64_t old = cs[a * n + b], old_t = cs[b * n + a];
                if (dense) {
                    touched.clear();
                    for (std::size_t g = 0; g < n; ++g) {
                        const std::uint32_t idx = row[g] * static_cast<std::uint32_t>(R) + col[g];
                        if (cnt[idx]++ == 0) touched.push_back(idx);
                    }
                    std::uint64_t h = 0, h_t = 0;
                    for (auto idx : touched) {
                        h += SignatureTable::entry_hash(idx, cnt[idx]);
                        h_t += SignatureTable::entry_hash(flip[idx], cnt[idx]);
                    }
                    const std::size_t k = touched.size();
                    auto match = [&](const std::uint32_t* map, std::uint64_t o) {
                        return [&, map, o](std::span<const std::uint64_t> w) {
                            if (w[0] != o || w.size() != 1 + 2 * k) return false;
                            for (std::size_t i = 1; i < w.size(); i += 2) {
                                const auto idx = map ? map[w[i]] : w[i];
                                if (cnt[idx] != w[i + 1]) return false;
                            }
                            return true;
                        };
                    };
                    auto build = [&](const std::uint32_t* map, std::uint64_t o) {
                        return [&, map, o](std::vector<std::uint64_t>& out) {
                            ent.clear();
                            for (auto idx : touched) ent.emplace_back(map ? map[idx] : idx, cnt[idx]);
                            std::sort(ent.begin(), ent.end());
                            emit_sorted(o)(out);
                        };
                    };
                    local[a * n + b] = tab.find_or_add(SignatureTable::finish(old, k, h), match(nullptr, old),
                                                       build(nullptr, old));
                    if (b != a)
                        local[b * n + a] = tab.find_or_add(SignatureTable::finish(old_t, k, h_t),
                                                           match(flip.data(), old_t), build(flip.data(), old_t));
                    for (auto idx : touched) cnt[idx] = 0;
                } else {
                    for (std::size_t g = 0; g < n; ++g) vals[g] = std::uint64_t{row[g]} * R + col[g];
                    std::sort(vals.begin(), vals.end());
                    ent.clear();
                    for (std::size_t i = 0; i < n;) {
                        std::size_t j = i;
                        while (j < n && vals[j] == vals[i]) ++j;
                        ent.emplace_back(vals[i], j - i);
                        i = j;
                    }
                    std::uint64_t h = 0;
                    for (auto [k, c] : ent) h += SignatureTable::entry_hash(k, c);
                    local[a * n + b] = tab.find_or_add(SignatureTable::finish(old, ent.size(), h), match_sorted(old),
                                                       emit_sorted(old));
                    if (b == a) continue;
                    // (b,a) sees the pairs (t(s), t(r)) for every (r,s) seen by (a,b)
                    for (auto& [k, c] : ent) k = std::uint64_t{tr[k % R]} * R + tr[k / R];
                    std::sort(ent.begin(), ent.end());
                    h = 0;
                    for (auto [k, c] : ent) h += SignatureTable::entry_hash(k, c);
                    local[b * n + a] = tab.find_or_add(SignatureTable::finish(old_t, ent.size(), h),
                                                       match_sorted(old_t), emit_sorted(old_t));
                }
            }
        }
    };
    if (T == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < T; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    // Name each local signature by its label-space key.
    std::vector<std::vector<std::uint32_t>> name(T);
    std::vector<Namer::Word> key;
    for (unsigned t = 0; t < T; ++t) {
        name[t].resize(tables[t].size());
        for (std::uint32_t id = 0; id < tables[t].size(); ++id) {
            const auto w = tables[t].get(id);
            key.assign({tag(Tag::Round), Namer::ref(p.labels[by_label[w[0]]])});
            for (std::size_t i = 1; i < w.size(); i += 2) {
                key.push_back(Namer::ref(p.labels[by_label[w[i] / R]]));
                key.push_back(Namer::ref(p.labels[by_label[w[i] % R]]));
                key.push_back(w[i + 1]);
            }
            name[t][id] = namer.intern(key);
        }
    }
    std::vector<std::uint32_t> out(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out[a * n + b] = name[std::min(a, b) % T][local[a * n + b]];
    return out;
}

std::size_t distinct_labels(const std::vector<PairColoring>& ps) {
    std::vector<std::uint32_t> all;
    for (const auto& p : ps) all.insert(all.end(), p.labels.begin(), p.labels.end());
    std::sort(all.begin(), all.end());
    return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

}  // namespace

Census census_of(const PairColoring& p) {
    Census c;
    const auto sizes = class_sizes(p);
    for (std::size_t i = 0; i < p.rank(); ++i) c.emplace_back(p.labels[i], sizes[i]);
    std::sort(c.begin(), c.end());
    return c;
}

PairColoring initial_split_marked(const PairColoring& x, std::span<const std::uint32_t> cell_mark) {
    if (!x.namer) throw PreconditionError("initial_split: coloring has no namer");
    const std::size_t n = x.n;
    std::map<std::array<std::uint32_t, 5>, std::uint32_t> seen;
    std::vector<std::uint32_t> cell(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const std::array<std::uint32_t, 5> k{a == b ? 1u : 0u, x.label_at(a, b), x.label_at(b, a),
                                                 cell_mark[a * n + b], cell_mark[b * n + a]};
            auto it = seen.find(k);
            if (it == seen.end()) {
                const auto id = x.namer->intern({tag(Tag::Init), k[0], Namer::ref(k[1]), Namer::ref(k[2]),
                                                 Namer::ref(k[3]), Namer::ref(k[4])});
                it = seen.emplace(k, id).first;
            }
            cell[a * n + b] = it->second;
        }
    }
    return from_cell_labels(n, cell, x.namer);
}

PairColoring initial_split(const PairColoring& x, std::span<const Relation> distinguished) {
    if (!x.namer) throw PreconditionError("initial_split: coloring has no namer");
    const std::size_t n = x.n;
    std::unordered_map<std::size_t, std::vector<std::uint64_t>> marks;
    for (std::size_t i = 0; i < distinguished.size(); ++i) {
        for (auto [a, b] : distinguished[i]) {
            if (a >= n || b >= n) throw PreconditionError("distinguished pair out of range");
            auto& m = marks[a * n + b];
            if (m.empty() || m.back() != i) m.push_back(i);
        }
    }
    const std::uint32_t none = x.namer->intern({tag(Tag::MarkSet)});
    std::vector<std::uint32_t> cell_mark(n * n, none);
    std::vector<Namer::Word> key;
    for (auto& [cell, m] : marks) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        key.assign({tag(Tag::MarkSet)});
        key.insert(key.end(), m.begin(), m.end());
        cell_mark[cell] = x.namer->intern(key);
    }
    return initial_split_marked(x, cell_mark);
}

RefineResult refine_batch(std::vector<PairColoring> start, bool record_census) {
    RefineResult res;
    if (start.empty()) return res;
    const NamerPtr namer = start.front().namer;
    for (const auto& p : start)
        if (!p.namer || p.namer != namer) throw PreconditionError("refine_batch: colorings must share one namer");
    auto snapshot = [&](const std::vector<PairColoring>& ps) {
        std::vector<Census> c;
        for (const auto& p : ps) c.push_back(census_of(p));
        res.census.push_back(std::move(c));
    };
    if (record_census) snapshot(start);
    std::size_t count = distinct_labels(start);
    for (;;) {
        std::vector<PairColoring> next;
        next.reserve(start.size());
        for (const auto& p : start) next.push_back(from_cell_labels(p.n, round_labels(p), namer));
        ++res.iterations;
        if (record_census) snapshot(next);
        const std::size_t c = distinct_labels(next);
        start = std::move(next);
        if (c == count) break;
        count = c;
    }
    res.out = std::move(start);
    return res;
}

PairColoring refine(PairColoring start, std::size_t* iterations) {
    std::vector<PairColoring> v;
    v.push_back(std::move(start));
    auto r = refine_batch(std::move(v));
    if (iterations) *iterations = r.iterations;
    return std::move(r.out.front());
}

}  // namespace ccstab
