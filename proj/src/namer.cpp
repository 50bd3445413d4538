#include "ccstab/namer.hpp"

#include <algorithm>

namespace ccstab {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_words(std::span<const Namer::Word> key) {
    std::uint64_t h = 0x1234567887654321ULL ^ key.size();
    for (auto w : key) h = mix64(h ^ w) + 0x632be59bd9b4e019ULL;
    return h;
}

}  // namespace

bool Namer::equal_key(const Entry& e, std::span<const Word> key) const {
    return e.length == key.size() && std::equal(key.begin(), key.end(), arena_.begin() + e.offset);
}

std::uint32_t Namer::intern(std::span<const Word> key) {
    const std::uint64_t h = hash_words(key);
    std::lock_guard lock(mu_);
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
        if (equal_key(entries_[it->second], key)) return it->second;
    }
    std::uint64_t fp = 0x51ed270b27bd3a5dULL ^ key.size();
    for (auto w : key) {
        const std::uint64_t v = (w & kRefFlag) ? entries_[static_cast<std::uint32_t>(w)].fingerprint ^ kRefFlag : w;
        fp = mix64(fp ^ v) + 0x2545f4914f6cdd1dULL;
    }
    const auto id = static_cast<std::uint32_t>(entries_.size());
    entries_.push_back({arena_.size(), key.size(), fp});
    arena_.insert(arena_.end(), key.begin(), key.end());
    index_.emplace(h, id);
    return id;
}

std::uint64_t Namer::fingerprint(std::uint32_t id) const {
    std::lock_guard lock(mu_);
    return entries_.at(id).fingerprint;
}

std::vector<Namer::Word> Namer::key(std::uint32_t id) const {
    std::lock_guard lock(mu_);
    const Entry& e = entries_.at(id);
    return {arena_.begin() + e.offset, arena_.begin() + e.offset + e.length};
}

std::size_t Namer::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

}  // namespace ccstab
