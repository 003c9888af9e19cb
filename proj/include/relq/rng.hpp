#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace relq {

// Seedable generator whose output is identical on every platform.
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not, so bounded integers and unit reals are derived here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound). bound must be positive.
    std::size_t below(std::size_t bound);

    // Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Child seed derived from a parent seed and a sequence of labels. Order matters.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> labels);

// FNV-1a, used to turn dataset ids into seed labels.
std::uint64_t hash_label(std::string_view text);

} // namespace relq
