#pragma once

#include <array>
#include <cstdint>

#include "mimocdma/types.hpp"

namespace mimocdma {

/// Fibonacci LFSR over GF(2).
///
/// The characteristic polynomial is given as an integer mask (conventionally
/// written in octal), e.g. x^3 + x^2 + 1 -> 015. Bit i of `state` holds
/// s[n+i]; each step emits s[n] and appends
/// s[n+r] = XOR of s[n+i] over the nonzero low-order coefficients c_i.
class Prbs {
public:
    /// Throws InvalidSeedError on a zero seed, std::invalid_argument on a
    /// polynomial without constant term or of degree < 2 or > 63.
    Prbs(std::uint64_t polynomial, std::uint64_t seed);

    int degree() const noexcept { return degree_; }
    std::uint64_t polynomial() const noexcept { return polynomial_; }
    std::uint64_t state() const noexcept { return state_; }

    std::uint8_t step();

private:
    std::uint64_t polynomial_;
    std::uint64_t taps_;
    std::uint64_t state_;
    int degree_;
};

/// Emits the next n bits and advances the generator.
BitStream prbs_generate(Prbs& prbs, std::size_t n);

inline constexpr std::size_t kSpreadingFactor = 8;

class SpreadingCode {
public:
    /// Default per-user code.
    SpreadingCode();
    /// Throws std::invalid_argument for non-binary, all-zero or all-one chips.
    explicit SpreadingCode(const std::array<std::uint8_t, kSpreadingFactor>& chips);

    /// First eight chips emitted by `prbs` (which is advanced).
    static SpreadingCode from_prbs(Prbs& prbs);

    const std::array<std::uint8_t, kSpreadingFactor>& chips() const noexcept { return chips_; }
    bool operator==(const SpreadingCode&) const = default;

private:
    std::array<std::uint8_t, kSpreadingFactor> chips_;
};

BitStream spread(const BitStream& data, const SpreadingCode& code);

/// Majority vote of (chip XOR code) per 8-chip block; a 4/4 tie yields 0.
/// Throws FramingError when the chip count is not a multiple of 8.
BitStream despread(const BitStream& chips, const SpreadingCode& code);

/// Rate-1/2 feedforward convolutional code. Register bit 0 is the newest
/// input; output j of each step is parity(register & generators[j]).
class ConvCode {
public:
    /// K = 3, generators (7, 5) octal.
    ConvCode();
    ConvCode(int constraint_length, std::array<std::uint32_t, 2> generators);

    int constraint_length() const noexcept { return k_; }
    const std::array<std::uint32_t, 2>& generators() const noexcept { return gens_; }
    int n_states() const noexcept { return 1 << (k_ - 1); }
    bool operator==(const ConvCode&) const = default;

private:
    int k_;
    std::array<std::uint32_t, 2> gens_;
};

/// Appends K-1 zero tail bits; output length 2 * (n + K - 1), register starts at zero.
BitStream conv_encode(const BitStream& data, const ConvCode& code);

/// Hard-decision (Hamming metric) Viterbi decoding of a zero-flushed
/// codeword. Returns the payload without tail bits. Throws FramingError for
/// an odd length or for a nonempty stream shorter than the tail.
BitStream viterbi_decode(const BitStream& coded, const ConvCode& code);

}  // namespace mimocdma
