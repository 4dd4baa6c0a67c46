#include "mimocdma/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "mimocdma/channel.hpp"
#include "mimocdma/errors.hpp"

namespace mimocdma {

namespace {

// x^31 + x^28 + 1, the message source.
constexpr std::uint64_t kMessagePolynomial = 020000000011;

std::uint64_t point_key(const SimConfig& cfg, Modulation m, double snr_db) {
    std::uint64_t key = mix64(cfg.seed);
    key = mix64(key ^ (static_cast<std::uint64_t>(m) + 1) * 0x100000001b3ULL);
    key = mix64(key ^ std::bit_cast<std::uint64_t>(snr_db));
    return key;
}

std::size_t expansion(const SimConfig& cfg) {
    return (cfg.fec ? 2U : 1U) * (cfg.spreading ? kSpreadingFactor : 1U);
}

SymbolGrid scaled(const SymbolGrid& g, double gain) {
    SymbolGrid out = g;
    for (auto& v : out.data) v *= gain;
    return out;
}

/// Transmit waveform of one antenna as seen per subcarrier: the CP-carrying
/// OFDM symbols, CP stripped and transformed back.
SymbolGrid through_ofdm(const SymbolGrid& g, const OfdmConfig& ofdm) {
    const auto symbols = ofdm_modulate(g.data, ofdm);
    SymbolGrid out(g.n_slots, g.n_subcarriers);
    out.data = ofdm_demodulate(symbols, ofdm);
    return out;
}

}  // namespace

void SimConfig::validate() const {
    if (modulations.empty()) throw ConfigError("no modulations selected");
    if (snr_grid.empty()) throw ConfigError("empty SNR grid");
    for (std::size_t i = 1; i < snr_grid.size(); ++i) {
        if (!(snr_grid[i] > snr_grid[i - 1])) throw ConfigError("SNR grid must be strictly increasing");
    }
    for (double s : snr_grid) {
        if (!std::isfinite(s)) throw ConfigError("SNR grid values must be finite");
    }
    try {
        ofdm.validate();
        (void)SpreadingCode(spreading_code);
        (void)ConvCode(constraint_length, generators);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (min_bits < 10000) throw ConfigError("min_bits must be at least 10000");
    if (max_bits < min_bits) throw ConfigError("max_bits must be >= min_bits");
    if (max_bit_errors < 1) throw ConfigError("max_bit_errors must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (n_rx < 1 || n_rx > 4) throw ConfigError("n_rx must be in [1, 4]");
    if (!(cond_cap > 1.0)) throw ConfigError("cond_cap must exceed 1");
    if (!std::isfinite(gain_snr_db)) throw ConfigError("gain_snr_db must be finite");
    for (auto m : modulations) {
        if (payload_bits_per_frame(*this, m) < 1) {
            throw ConfigError("frame too small to carry payload for " + std::string(to_string(m)));
        }
    }
}

void apply_profile(SimConfig& cfg, Profile p) {
    cfg.ofdm = p == Profile::Table1 ? OfdmConfig{6400, 1280} : OfdmConfig{256, 64};
}

BerRecord make_record(Modulation m, double snr_db, std::uint64_t bits, std::uint64_t errors) {
    BerRecord r;
    r.modulation = m;
    r.snr_db = snr_db;
    r.bits = bits;
    r.errors = errors;
    if (bits > 0) {
        r.ber = static_cast<double>(errors) / static_cast<double>(bits);
        r.ci95 = 1.96 * std::sqrt(r.ber * (1.0 - r.ber) / static_cast<double>(bits));
    }
    return r;
}

double noise_variance(const SimConfig& cfg, Modulation m, double snr_db) {
    if (!cfg.noise) return 0.0;
    const double snr = std::pow(10.0, snr_db / 10.0);
    switch (cfg.snr_reference) {
        case SnrReference::EsN0: return 1.0 / snr;
        case SnrReference::CombinedEbN0: {
            const double k = Constellation::get(m).bits_per_symbol();
            return static_cast<double>(cfg.n_rx) / (k * snr);
        }
    }
    return 1.0 / snr;
}

std::size_t payload_bits_per_frame(const SimConfig& cfg, Modulation m) {
    const std::size_t capacity = 2 * cfg.ofdm.n_subcarriers *
                                 static_cast<std::size_t>(Constellation::get(m).bits_per_symbol());
    std::size_t n = capacity / expansion(cfg);
    if (cfg.fec) {
        const auto tail = static_cast<std::size_t>(cfg.constraint_length - 1);
        n = n > tail ? n - tail : 0;
    }
    return n;
}

FrameResult run_frame(const SimConfig& cfg, Modulation m, double snr_db, std::uint64_t frame_seed) {
    const Constellation& c = Constellation::get(m);
    const SpreadingCode code(cfg.spreading_code);
    const ConvCode conv(cfg.constraint_length, cfg.generators);
    const std::size_t n_sc = cfg.ofdm.n_subcarriers;
    const std::size_t k = static_cast<std::size_t>(c.bits_per_symbol());
    Rng rng(frame_seed);

    Prbs source(kMessagePolynomial, rng.next_u64() % ((std::uint64_t{1} << 31) - 1) + 1);
    const BitStream payload = prbs_generate(source, payload_bits_per_frame(cfg, m));

    BitStream tx_bits = cfg.fec ? conv_encode(payload, conv) : payload;
    if (cfg.spreading) tx_bits = spread(tx_bits, code);
    const std::size_t used = tx_bits.size();
    tx_bits.resize(2 * n_sc * k, 0);

    SymbolGrid grid(2, n_sc);
    grid.data = map(tx_bits, c);

    std::vector<SymbolGrid> antennas;
    if (cfg.stbc) {
        const double gain = 1.0 / std::sqrt(2.0);
        for (const auto& g : stbc_encode(grid)) antennas.push_back(through_ofdm(scaled(g, gain), cfg.ofdm));
    } else {
        antennas.push_back(through_ofdm(grid, cfg.ofdm));
    }
    const std::size_t n_tx = antennas.size();
    const NoiseConfig noise{noise_variance(cfg, m, snr_db)};

    FrameResult result;
    std::vector<std::uint32_t> labels(2 * n_sc);
    for (;;) {
        const ChannelRealization ch = draw_channel(rng, n_sc, cfg.n_rx, n_tx, 2);
        const auto rx = apply_channel(antennas, ch, noise, rng);
        try {
            std::vector<cd> y1(cfg.n_rx), y2(cfg.n_rx);
            for (std::size_t sc = 0; sc < n_sc; ++sc) {
                for (std::size_t j = 0; j < cfg.n_rx; ++j) {
                    y1[j] = rx[j].at(0, sc);
                    y2[j] = rx[j].at(1, sc);
                }
                if (cfg.stbc) {
                    const auto eff = build_effective(ch.h[sc], y1, y2, 1.0 / std::sqrt(2.0));
                    const auto out = detect(cfg.detector, eff, c, cfg.cond_cap);
                    labels[sc] = out.decisions[0];
                    labels[n_sc + sc] = out.decisions[1];
                } else {
                    for (std::size_t s = 0; s < 2; ++s) {
                        EffectiveChannel eff{ch.h[sc], Eigen::Map<const Eigen::VectorXcd>(
                                                           (s == 0 ? y1 : y2).data(),
                                                           static_cast<Eigen::Index>(cfg.n_rx))};
                        labels[s * n_sc + sc] = detect(cfg.detector, eff, c, cfg.cond_cap).decisions[0];
                    }
                }
            }
        } catch (const SingularChannelError&) {
            ++result.singular_redraws;
            continue;
        }
        break;
    }

    BitStream rx_bits;
    rx_bits.reserve(labels.size() * k);
    for (auto l : labels) append_label_bits(l, c.bits_per_symbol(), rx_bits);
    rx_bits.resize(used);
    if (cfg.spreading) rx_bits = despread(rx_bits, code);
    if (cfg.fec) rx_bits = viterbi_decode(rx_bits, conv);

    result.bits = payload.size();
    for (std::size_t i = 0; i < payload.size(); ++i) result.errors += (payload[i] != rx_bits[i]);
    return result;
}

BerRecord run_chain(const SimConfig& cfg, Modulation m, double snr_db) {
    cfg.validate();
    const std::uint64_t key = point_key(cfg, m, snr_db);
    std::uint64_t bits = 0, errors = 0, redraws = 0, frames = 0;
    for (;;) {
        const FrameResult f = run_frame(cfg, m, snr_db, mix64(key + frames));
        ++frames;
        bits += f.bits;
        errors += f.errors;
        redraws += f.singular_redraws;
        if (bits >= cfg.min_bits && (errors >= cfg.max_bit_errors || bits >= cfg.max_bits)) break;
    }
    BerRecord r = make_record(m, snr_db, bits, errors);
    r.frames = frames;
    r.singular_redraws = redraws;
    return r;
}

std::vector<BerRecord> sweep(const SimConfig& cfg) {
    cfg.validate();
    struct Point {
        Modulation m;
        double snr;
    };
    std::vector<Point> points;
    for (auto m : cfg.modulations) {
        for (double s : cfg.snr_grid) points.push_back({m, s});
    }
    std::vector<BerRecord> out(points.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                out[i] = run_chain(cfg, points[i].m, points[i].snr);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::min<unsigned>(cfg.workers, static_cast<unsigned>(points.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

namespace {

struct CurvePoint {
    double snr;
    double ber;
};

std::vector<CurvePoint> curve(const std::vector<BerRecord>& table, Modulation m) {
    std::vector<CurvePoint> pts;
    for (const auto& r : table) {
        if (r.modulation == m) pts.push_back({r.snr_db, r.ber});
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.snr < b.snr; });
    return pts;
}

double lerp_log(double s, const CurvePoint& a, const CurvePoint& b) {
    const double t = (s - a.snr) / (b.snr - a.snr);
    return std::pow(10.0, std::log10(a.ber) + t * (std::log10(b.ber) - std::log10(a.ber)));
}

std::optional<double> ber_at(const std::vector<CurvePoint>& c, double snr) {
    for (const auto& p : c) {
        if (p.snr == snr) return p.ber;
    }
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        if (c[i].snr < snr && snr < c[i + 1].snr) {
            if (c[i].ber <= 0.0 || c[i + 1].ber <= 0.0) return std::nullopt;
            return lerp_log(snr, c[i], c[i + 1]);
        }
    }
    return std::nullopt;
}

}  // namespace

GainRecord gain_vs_reference(const std::vector<BerRecord>& table, Modulation target,
                             Modulation reference, double at_snr_db) {
    GainRecord g;
    g.modulation = target;
    g.reference = reference;
    g.at_snr_db = at_snr_db;
    g.gain_db = std::numeric_limits<double>::quiet_NaN();
    g.extrapolation_required = true;

    const auto ref_ber = ber_at(curve(table, reference), at_snr_db);
    if (!ref_ber || *ref_ber <= 0.0) return g;
    const double b = *ref_ber;
    const auto tc = curve(table, target);

    // Every SNR where the target curve attains b; keep the one closest to at_snr.
    std::optional<double> best;
    auto consider = [&](double s) {
        if (!best || std::abs(s - at_snr_db) < std::abs(*best - at_snr_db)) best = s;
    };
    for (const auto& p : tc) {
        if (p.ber == b) consider(p.snr);
    }
    for (std::size_t i = 0; i + 1 < tc.size(); ++i) {
        const auto& lo = tc[i];
        const auto& hi = tc[i + 1];
        if (lo.ber <= 0.0 || hi.ber <= 0.0 || lo.ber == hi.ber) continue;
        if ((lo.ber - b) * (hi.ber - b) < 0.0) {
            const double t = (std::log10(b) - std::log10(lo.ber)) /
                             (std::log10(hi.ber) - std::log10(lo.ber));
            consider(lo.snr + t * (hi.snr - lo.snr));
        }
    }
    if (!best) return g;
    g.gain_db = at_snr_db - *best;
    g.extrapolation_required = false;
    return g;
}

std::vector<GainRecord> gains_for(const SimConfig& cfg, const std::vector<BerRecord>& table) {
    std::vector<GainRecord> out;
    for (auto m : cfg.modulations) {
        out.push_back(gain_vs_reference(table, m, cfg.gain_reference, cfg.gain_snr_db));
    }
    return out;
}

}  // namespace mimocdma
