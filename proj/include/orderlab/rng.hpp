#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace orderlab {

/// All library randomness flows through mt19937_64 (output sequence pinned by
/// the standard) and this multiply-shift bounded draw, so a seed reproduces
/// byte-identical results on any platform. std::uniform_int_distribution is
/// deliberately avoided: its mapping is implementation-defined.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("draw_below needs a positive bound");
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

} // namespace orderlab
