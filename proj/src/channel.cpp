#include "mimocdma/channel.hpp"

#include <cmath>
#include <string>

#include "mimocdma/errors.hpp"

namespace mimocdma {

NoiseConfig NoiseConfig::from_snr_db(double snr_db) {
    return {std::pow(10.0, -snr_db / 10.0)};
}

ChannelRealization draw_channel(Rng& rng, std::size_t n_subcarriers, std::size_t n_rx,
                                std::size_t n_tx, std::size_t coherence_slots) {
    ChannelRealization ch;
    ch.coherence_slots = coherence_slots;
    ch.h.reserve(n_subcarriers);
    for (std::size_t k = 0; k < n_subcarriers; ++k) {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
        for (Eigen::Index j = 0; j < m.rows(); ++j) {
            for (Eigen::Index i = 0; i < m.cols(); ++i) m(j, i) = rng.complex_normal(1.0);
        }
        ch.h.push_back(std::move(m));
    }
    return ch;
}

std::vector<SymbolGrid> apply_channel(std::span<const SymbolGrid> tx, const ChannelRealization& ch,
                                      const NoiseConfig& noise, Rng& rng) {
    if (ch.h.empty()) throw ShapeError("empty channel realization");
    const auto n_rx = static_cast<std::size_t>(ch.h.front().rows());
    const auto n_tx = static_cast<std::size_t>(ch.h.front().cols());
    if (tx.size() != n_tx) {
        throw ShapeError("channel expects " + std::to_string(n_tx) + " transmit streams, got " +
                         std::to_string(tx.size()));
    }
    const std::size_t n_sc = ch.n_subcarriers();
    const std::size_t n_slots = tx.front().n_slots;
    for (const auto& g : tx) {
        if (g.n_subcarriers != n_sc || g.n_slots != n_slots) {
            throw ShapeError("transmit grids disagree with the channel's subcarrier count");
        }
    }
    if (n_slots > ch.coherence_slots) {
        throw ShapeError("transmit grid spans " + std::to_string(n_slots) +
                         " slots, longer than the coherence interval");
    }

    std::vector<SymbolGrid> rx(n_rx, SymbolGrid(n_slots, n_sc));
    for (std::size_t k = 0; k < n_sc; ++k) {
        const auto& h = ch.h[k];
        for (std::size_t s = 0; s < n_slots; ++s) {
            for (std::size_t j = 0; j < n_rx; ++j) {
                cd acc{};
                for (std::size_t i = 0; i < n_tx; ++i) {
                    acc += h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) *
                           tx[i].at(s, k);
                }
                if (noise.enabled()) acc += rng.complex_normal(noise.sigma2);
                rx[j].at(s, k) = acc;
            }
        }
    }
    return rx;
}

}  // namespace mimocdma
