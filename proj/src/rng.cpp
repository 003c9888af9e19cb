#include "relq/rng.hpp"

#include <stdexcept>

namespace relq {

std::size_t Rng::below(std::size_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: bound must be positive");
    }
    const std::uint64_t n = bound;
    // Reject the low remainder so every residue is equally likely.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) {
            return static_cast<std::size_t>(r % n);
        }
    }
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> labels) {
    std::uint64_t h = mix64(parent);
    for (std::uint64_t label : labels) {
        h = mix64(h ^ mix64(label));
    }
    return h;
}

std::uint64_t hash_label(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace relq
