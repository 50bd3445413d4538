#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace ccstab {

/// Content-addressed color names.
///
/// Every color produced by a refinement engine is named by interning the
/// signature that created it. A key is a sequence of 64-bit words; words with
/// the top bit set are references to previously interned names (see `ref`).
/// Two colors in different structures that share a Namer carry the same name
/// iff they were produced by equal signatures, so comparing names across
/// structures is the same as comparing refinement histories. This is what
/// makes "shared signature naming" between two configurations exact.
///
/// Each name also carries a 64-bit fingerprint computed from its key with
/// references replaced by their fingerprints. Fingerprints are independent of
/// interning order and are used only to order colors for presentation.
class Namer {
public:
    using Word = std::uint64_t;
    static constexpr Word kRefFlag = Word{1} << 63;

    static constexpr Word ref(std::uint32_t id) { return kRefFlag | id; }

    std::uint32_t intern(std::span<const Word> key);
    std::uint32_t intern(std::initializer_list<Word> key) {
        return intern(std::span<const Word>(key.begin(), key.size()));
    }

    std::uint64_t fingerprint(std::uint32_t id) const;
    std::vector<Word> key(std::uint32_t id) const;
    std::size_t size() const;

private:
    struct Entry {
        std::size_t offset;
        std::size_t length;
        std::uint64_t fingerprint;
    };
    bool equal_key(const Entry& e, std::span<const Word> key) const;

    mutable std::mutex mu_;
    std::vector<Word> arena_;
    std::vector<Entry> entries_;
    std::unordered_multimap<std::uint64_t, std::uint32_t> index_;
};

using NamerPtr = std::shared_ptr<Namer>;

/// Key tags. The first word of every key is one of these.
enum class Tag : Namer::Word {
    Raw = 1,
    Init,
    Round,
    Mark,
    MarkSet,
    Tensor,
    Join,
    Project,
    MaryInit,
    MaryRound,
    MaryRelabel,
    Residue,
    Seed,
    SeedFree,
    Census,
    Sim1,
    Sim2,
    Sim3,
    Sim4,
    Restrict,
};

constexpr Namer::Word tag(Tag t) { return static_cast<Namer::Word>(t); }

std::uint64_t mix64(std::uint64_t x);

}  // namespace ccstab
