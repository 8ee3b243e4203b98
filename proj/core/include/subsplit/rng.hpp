#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace subsplit {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream: the i-th output depends only on
/// (seed, stream, i), so substreams can be handed to independent work items
/// without any shared state. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream ^ 0x6a09e667f3bcc909ULL))) {}

    /// Stream id from a path of integers, e.g. {purpose, instance, start}.
    static std::uint64_t derive(std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto x : path) h = mix64(h ^ x);
        return h;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace subsplit
