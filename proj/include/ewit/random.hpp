#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ewit {

/// Splittable seed source. Every consumer derives its own engine from
/// (root seed, stream name, index), so results do not depend on call order.
class SeedTree {
public:
    static constexpr std::uint64_t default_seed = 42;

    explicit SeedTree(std::uint64_t seed = default_seed) : seed_(seed) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    [[nodiscard]] SeedTree split(std::string_view name, std::uint64_t index = 0) const {
        return SeedTree(mix(mix(seed_ ^ fnv1a(name)) + index));
    }

    [[nodiscard]] std::mt19937_64 engine() const { return std::mt19937_64(mix(seed_)); }

private:
    static constexpr std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for(unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

} // namespace ewit
