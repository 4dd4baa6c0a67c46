#include "mimocdma/modem.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "mimocdma/errors.hpp"

namespace mimocdma {

namespace {

/// Gray-labelled PAM level for `label` among `levels` levels. Label 0 sits on
/// the most positive level, unit spacing between odd integers.
double pam_level(std::uint32_t label, int levels) {
    // Inverse Gray: position along the axis from the top.
    std::uint32_t pos = label;
    for (std::uint32_t shift = label >> 1; shift != 0; shift >>= 1) pos ^= shift;
    return static_cast<double>(levels - 1) - 2.0 * static_cast<double>(pos);
}

std::vector<cd> rectangular(int i_bits, int q_bits) {
    const int n = 1 << (i_bits + q_bits);
    std::vector<cd> pts(static_cast<std::size_t>(n));
    for (std::uint32_t label = 0; label < static_cast<std::uint32_t>(n); ++label) {
        const std::uint32_t i_label = label >> q_bits;
        const std::uint32_t q_label = label & ((1U << q_bits) - 1);
        pts[label] = {pam_level(i_label, 1 << i_bits), pam_level(q_label, 1 << q_bits)};
    }
    return pts;
}

std::vector<cd> psk8() {
    std::vector<cd> pts(8);
    for (std::uint32_t m = 0; m < 8; ++m) {
        pts[m ^ (m >> 1)] = std::polar(1.0, std::numbers::pi / 4.0 * m);
    }
    return pts;
}

// 6x6 grid without corners. Not Gray-perfect: 2 of the 52 nearest pairs differ in three bits.
std::vector<cd> cross32() {
    static constexpr std::array<std::pair<int, int>, 32> kTable{{
        {-5, 1}, {5, 1},   {-5, 3},  {5, 3},  {-1, -5}, {1, -5}, {-3, -5}, {3, -5},
        {-3, 1}, {3, 1},   {-3, 3},  {3, 3},  {-1, 1},  {1, 1},  {-1, 3},  {1, 3},
        {-5, -1}, {5, -1}, {-5, -3}, {5, -3}, {-1, -3}, {1, -3}, {-3, -3}, {3, -3},
        {-3, -1}, {3, -1}, {-3, 5},  {3, 5},  {-1, -1}, {1, -1}, {-1, 5},  {1, 5},
    }};
    std::vector<cd> pts;
    pts.reserve(kTable.size());
    for (auto [i, q] : kTable) pts.emplace_back(i, q);
    return pts;
}

std::vector<cd> raw_points(Modulation m) {
    switch (m) {
        case Modulation::Qpsk: return rectangular(1, 1);
        case Modulation::Psk8: return psk8();
        case Modulation::Qam8: return rectangular(2, 1);
        case Modulation::Qam16: return rectangular(2, 2);
        case Modulation::Qam32: return cross32();
        case Modulation::Qam64: return rectangular(3, 3);
    }
    return {};
}

}  // namespace

std::string_view to_string(Modulation m) {
    switch (m) {
        case Modulation::Qpsk: return "qpsk";
        case Modulation::Psk8: return "8psk";
        case Modulation::Qam8: return "8qam";
        case Modulation::Qam16: return "16qam";
        case Modulation::Qam32: return "32qam";
        case Modulation::Qam64: return "64qam";
    }
    return "?";
}

std::optional<Modulation> parse_modulation(std::string_view name) {
    for (auto m : kAllModulations) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

Constellation::Constellation(Modulation m, std::vector<cd> points)
    : modulation_(m), bits_(std::countr_zero(points.size())), points_(std::move(points)) {
    double energy = 0.0;
    for (const auto& p : points_) energy += std::norm(p);
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(points_.size()));
    for (auto& p : points_) p *= scale;
}

const Constellation& Constellation::get(Modulation m) {
    static const std::array<Constellation, 6> kTables{
        Constellation(Modulation::Qpsk, raw_points(Modulation::Qpsk)),
        Constellation(Modulation::Psk8, raw_points(Modulation::Psk8)),
        Constellation(Modulation::Qam8, raw_points(Modulation::Qam8)),
        Constellation(Modulation::Qam16, raw_points(Modulation::Qam16)),
        Constellation(Modulation::Qam32, raw_points(Modulation::Qam32)),
        Constellation(Modulation::Qam64, raw_points(Modulation::Qam64)),
    };
    return kTables[static_cast<std::size_t>(m)];
}

double Constellation::mean_energy() const {
    double e = 0.0;
    for (const auto& p : points_) e += std::norm(p);
    return e / static_cast<double>(points_.size());
}

double Constellation::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < points_.size(); ++a) {
        for (std::size_t b = a + 1; b < points_.size(); ++b) {
            d = std::min(d, std::abs(points_[a] - points_[b]));
        }
    }
    return d;
}

std::uint32_t Constellation::nearest(cd z) const {
    // Relative slack so exact geometric midpoints resolve to the smaller label
    // despite rounding in the distance computation.
    constexpr double kTieSlack = 1e-12;
    std::uint32_t best = 0;
    double best_d = std::norm(z - points_[0]);
    for (std::uint32_t label = 1; label < points_.size(); ++label) {
        const double d = std::norm(z - points_[label]);
        if (d < best_d - kTieSlack * (1.0 + best_d)) {
            best_d = d;
            best = label;
        }
    }
    return best;
}

void append_label_bits(std::uint32_t label, int bits, BitStream& out) {
    for (int b = bits - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((label >> b) & 1U));
}

SymbolFrame map(const BitStream& bits, const Constellation& c) {
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % k != 0) {
        throw FramingError("bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                           std::to_string(k));
    }
    SymbolFrame out(bits.size() / k);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::uint32_t label = 0;
        for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[s * k + b] & 1U);
        out[s] = c.points()[label];
    }
    return out;
}

BitStream demap(std::span<const cd> symbols, const Constellation& c) {
    BitStream out;
    out.reserve(symbols.size() * static_cast<std::size_t>(c.bits_per_symbol()));
    for (const auto& z : symbols) append_label_bits(c.nearest(z), c.bits_per_symbol(), out);
    return out;
}

}  // namespace mimocdma
