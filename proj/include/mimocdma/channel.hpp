#pragma once

#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mimocdma/types.hpp"

namespace mimocdma {

/// Per-subcarrier flat Rayleigh fading. `h[k]` is n_rx x n_tx with
/// h[k](j, i) the gain from transmit antenna i to receive antenna j, so that
/// y = H a + n. Each matrix holds for `coherence_slots` consecutive slots.
struct ChannelRealization {
    std::vector<Eigen::MatrixXcd> h;
    std::size_t coherence_slots = 2;

    std::size_t n_subcarriers() const { return h.size(); }
};

/// Noise variance per receive antenna and per subcarrier sample.
struct NoiseConfig {
    double sigma2 = 0.0;

    /// sigma2 = 1 / 10^(snr_db / 10) (unit symbol energy).
    static NoiseConfig from_snr_db(double snr_db);
    static NoiseConfig disabled() { return {}; }
    bool enabled() const { return sigma2 > 0.0; }
};

/// i.i.d. CN(0, 1) entries for every subcarrier.
ChannelRealization draw_channel(Rng& rng, std::size_t n_subcarriers, std::size_t n_rx = 4,
                                std::size_t n_tx = 2, std::size_t coherence_slots = 2);

/// y_j = sum_i h_ji a_i + n_j on every subcarrier and slot. `tx` holds one
/// grid per transmit antenna. Throws ShapeError on antenna, subcarrier or
/// slot-count mismatch (slots may not exceed the coherence interval).
std::vector<SymbolGrid> apply_channel(std::span<const SymbolGrid> tx, const ChannelRealization& ch,
                                      const NoiseConfig& noise, Rng& rng);

}  // namespace mimocdma
