#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mimocdma/bits.hpp"
#include "mimocdma/mimo.hpp"
#include "mimocdma/modem.hpp"
#include "mimocdma/ofdm.hpp"

namespace mimocdma {

/// How the swept SNR value sets the noise variance N0 (total transmit
/// energy per symbol is 1).
enum class SnrReference {
    /// Es/N0 at each receive antenna: N0 = 10^(-snr/10).
    EsN0,
    /// Average post-combining SNR per modulated bit, n_rx * Es / (k * N0):
    /// N0 = n_rx / (k * 10^(snr/10)).
    CombinedEbN0,
};

enum class Profile { Fast, Table1 };

struct SimConfig {
    std::vector<Modulation> modulations{std::begin(kAllModulations), std::end(kAllModulations)};
    std::vector<double> snr_grid{-10, -5, 0, 5, 10, 15, 20};
    OfdmConfig ofdm{256, 64};
    std::array<std::uint8_t, kSpreadingFactor> spreading_code = SpreadingCode().chips();
    int constraint_length = 3;
    std::array<std::uint32_t, 2> generators{07, 05};
    Detector detector = Detector::Zf;
    std::uint64_t seed = 1;
    std::uint64_t min_bits = 100000;
    std::uint64_t max_bit_errors = 1000;
    std::uint64_t max_bits = 1000000;
    unsigned workers = 1;
    bool spreading = true;
    bool fec = true;
    bool stbc = true;
    unsigned n_rx = 4;
    SnrReference snr_reference = SnrReference::CombinedEbN0;
    bool noise = true;
    double cond_cap = kDefaultConditionCap;
    Modulation gain_reference = Modulation::Qam64;
    double gain_snr_db = -5.0;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

/// Fast: N = 256, cp = 64. Table1: N = 6400, cp = 1280.
void apply_profile(SimConfig& cfg, Profile p);

struct BerRecord {
    Modulation modulation = Modulation::Qpsk;
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    double ci95 = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t singular_redraws = 0;
};

/// ber = errors / bits, ci95 = 1.96 * sqrt(ber (1 - ber) / bits).
BerRecord make_record(Modulation m, double snr_db, std::uint64_t bits, std::uint64_t errors);

/// Noise variance for `snr_db` under the configured reference.
double noise_variance(const SimConfig& cfg, Modulation m, double snr_db);

/// Payload bits carried by one frame (one Alamouti slot pair of OFDM
/// symbols) after FEC and spreading expansion.
std::size_t payload_bits_per_frame(const SimConfig& cfg, Modulation m);

struct FrameResult {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    std::uint64_t singular_redraws = 0;
};

/// One frame through the full chain with the given frame seed.
FrameResult run_frame(const SimConfig& cfg, Modulation m, double snr_db, std::uint64_t frame_seed);

/// Frames until bits >= min_bits and (errors >= max_bit_errors or
/// bits >= max_bits). Deterministic in (cfg, m, snr_db).
BerRecord run_chain(const SimConfig& cfg, Modulation m, double snr_db);

/// modulations x snr_grid, modulation-major, points spread over cfg.workers threads.
std::vector<BerRecord> sweep(const SimConfig& cfg);

struct GainRecord {
    Modulation modulation = Modulation::Qpsk;
    Modulation reference = Modulation::Qam64;
    double at_snr_db = 0.0;
    double gain_db = 0.0;
    bool extrapolation_required = false;
};

/// SNR offset at equal BER: gain = at_snr - s*, where s* is the SNR at which
/// the target curve reaches the reference's BER at `at_snr`, found by linear
/// interpolation of log10(BER) between grid points. Flags instead of
/// extrapolating when the curves do not bracket.
GainRecord gain_vs_reference(const std::vector<BerRecord>& table, Modulation target,
                             Modulation reference, double at_snr_db);

/// Gains of every swept modulation w.r.t. cfg.gain_reference at cfg.gain_snr_db.
std::vector<GainRecord> gains_for(const SimConfig& cfg, const std::vector<BerRecord>& table);

}  // namespace mimocdma
