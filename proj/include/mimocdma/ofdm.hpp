#pragma once

#include <span>
#include <vector>

#include "mimocdma/types.hpp"

namespace mimocdma {

struct OfdmConfig {
    std::size_t n_subcarriers = 6400;
    std::size_t cp_len = 1280;

    /// Throws std::invalid_argument unless n >= 1 and cp_len <= n.
    void validate() const;
    std::size_t symbol_length() const { return n_subcarriers + cp_len; }
    bool operator==(const OfdmConfig&) const = default;
};

/// Time samples of one OFDM symbol, cyclic prefix first.
struct OfdmSymbol {
    std::vector<cd> samples;
};

/// Unitary DFT (sign -1, scale 1/sqrt(n)) in place. Any n >= 1.
void unitary_dft(std::span<cd> x);
/// Unitary inverse DFT (sign +1, scale 1/sqrt(n)) in place.
void unitary_idft(std::span<cd> x);

/// Splits `freq` into blocks of n_subcarriers, inverse-transforms each and
/// prepends the last cp_len samples. Throws FramingError when the symbol
/// count is not a multiple of n_subcarriers.
std::vector<OfdmSymbol> ofdm_modulate(std::span<const cd> freq, const OfdmConfig& cfg);

/// Drops the first cp_len samples of each symbol and transforms back.
/// Throws FramingError for a symbol of the wrong length.
SymbolFrame ofdm_demodulate(std::span<const OfdmSymbol> symbols, const OfdmConfig& cfg);

}  // namespace mimocdma
