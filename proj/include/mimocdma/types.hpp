#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace mimocdma {

using cd = std::complex<double>;

/// Hard bits, one per element, each 0 or 1.
using BitStream = std::vector<std::uint8_t>;

/// Flat run of complex baseband symbols.
using SymbolFrame = std::vector<cd>;

/// Symbols laid out as OFDM slots x subcarriers, slot-major.
struct SymbolGrid {
    std::size_t n_slots = 0;
    std::size_t n_subcarriers = 0;
    std::vector<cd> data;

    SymbolGrid() = default;
    SymbolGrid(std::size_t slots, std::size_t subcarriers)
        : n_slots(slots), n_subcarriers(subcarriers), data(slots * subcarriers) {}

    cd& at(std::size_t slot, std::size_t sc) { return data[slot * n_subcarriers + sc]; }
    const cd& at(std::size_t slot, std::size_t sc) const { return data[slot * n_subcarriers + sc]; }
};

/// Seeded random source. Each Monte Carlo frame owns one.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cd complex_normal(double variance);
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline cd Rng::complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

/// splitmix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace mimocdma
