#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mimocdma/types.hpp"

namespace mimocdma {

enum class Modulation { Qpsk, Psk8, Qam8, Qam16, Qam32, Qam64 };

inline constexpr Modulation kAllModulations[] = {Modulation::Qpsk,  Modulation::Qam8,
                                                 Modulation::Psk8,  Modulation::Qam16,
                                                 Modulation::Qam32, Modulation::Qam64};

/// Short machine name: qpsk, 8psk, 8qam, 16qam, 32qam, 64qam.
std::string_view to_string(Modulation m);
std::optional<Modulation> parse_modulation(std::string_view name);

/// Immutable point table. `points()[label]` is the symbol for that label;
/// label bits are read MSB first from the bit stream.
class Constellation {
public:
    static const Constellation& get(Modulation m);

    Modulation modulation() const noexcept { return modulation_; }
    std::size_t size() const noexcept { return points_.size(); }
    int bits_per_symbol() const noexcept { return bits_; }
    const std::vector<cd>& points() const noexcept { return points_; }

    double mean_energy() const;
    double min_distance() const;

    /// Nearest point; on a distance tie the smaller label wins.
    std::uint32_t nearest(cd z) const;

private:
    Constellation(Modulation m, std::vector<cd> points);

    Modulation modulation_;
    int bits_;
    std::vector<cd> points_;
};

/// Throws FramingError if the bit count is not a multiple of log2(M).
SymbolFrame map(const BitStream& bits, const Constellation& c);

BitStream demap(std::span<const cd> symbols, const Constellation& c);

/// Appends the label bits (MSB first).
void append_label_bits(std::uint32_t label, int bits, BitStream& out);

}  // namespace mimocdma
