// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "mimocdma/bits.hpp"
#include "mimocdma/channel.hpp"
#include "mimocdma/io.hpp"
#include "mimocdma/mimo.hpp"
#include "mimocdma/modem.hpp"
#include "mimocdma/sim.hpp"
#include "oracles.hpp"

using namespace mimocdma;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string fmt(const char* f) { return f; }

unsigned hw_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

Eigen::MatrixXcd random_channel(Rng& rng, int rows, int cols) {
    Eigen::MatrixXcd h(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) h(i, j) = rng.complex_normal(1.0);
    return h;
}

// 1
Outcome transparency() {
    const auto t0 = Clock::now();
    SimConfig cfg;
    cfg.noise = false;
    cfg.min_bits = 10000;
    cfg.max_bits = 10000;
    std::uint64_t errors = 0, min_bits = ~0ULL;
    for (auto m : kAllModulations) {
        const auto r = run_chain(cfg, m, 0.0);
        errors += r.errors;
        min_bits = std::min(min_bits, r.bits);
    }
    const double t = seconds_since(t0);
    return {errors == 0 && min_bits >= 10000 && t < 30.0,
            fmt("errors=%llu, min bits/scheme=%llu, %.2f s (limit 30 s)",
                static_cast<unsigned long long>(errors), static_cast<unsigned long long>(min_bits), t)};
}

// 2
Outcome detector_equivalence() {
    const auto t0 = Clock::now();
    Rng rng(0xd37ec7);
    double worst = 0.0;
    std::size_t decision_mismatch = 0;
    const int blocks = 10000;
    for (int b = 0; b < blocks; ++b) {
        const Modulation m = kAllModulations[static_cast<std::size_t>(b) % 6];
        const Constellation& c = Constellation::get(m);
        const Eigen::MatrixXcd h = random_channel(rng, 4, 2);
        const cd a1 = c.points()[rng.next_u64() % c.size()];
        const cd a2 = c.points()[rng.next_u64() % c.size()];
        const double g = 1.0 / std::sqrt(2.0);
        std::vector<cd> y1(4), y2(4);
        for (int j = 0; j < 4; ++j) {
            y1[j] = g * (h(j, 0) * a1 + h(j, 1) * a2) + rng.complex_normal(0.3);
            y2[j] = g * (-h(j, 0) * std::conj(a2) + h(j, 1) * std::conj(a1)) + rng.complex_normal(0.3);
        }
        const auto eff = build_effective(h, y1, y2, g);
        const auto z = zf_detect(eff, c);
        const auto r = realzf_detect(eff, c);
        for (int k = 0; k < 2; ++k) {
            worst = std::max(worst, std::abs(z.estimates(k) - r.estimates(k)) /
                                        std::max(1.0, std::abs(z.estimates(k))));
        }
        if (z.decisions != r.decisions) ++decision_mismatch;
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-9 && decision_mismatch == 0 && t < 10.0,
            fmt("%d blocks, max rel diff=%.2e (tol 1e-9), decision mismatches=%zu, %.2f s (limit 10 s)",
                blocks, worst, decision_mismatch, t)};
}

// 3
Outcome alamouti_orthogonality() {
    Rng rng(0xa1a0);
    double worst = 0.0;
    const std::vector<cd> zeros(4);
    for (int i = 0; i < 10000; ++i) {
        const Eigen::MatrixXcd h = random_channel(rng, 4, 2);
        const auto eff = build_effective(h, zeros, zeros);
        const Eigen::MatrixXcd gram = eff.h.adjoint() * eff.h;
        const Eigen::MatrixXcd expect = h.cwiseAbs2().sum() * Eigen::MatrixXcd::Identity(2, 2);
        worst = std::max(worst, (gram - expect).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-10, fmt("10000 draws, max |HᴴH - Σ|h|²I| = %.2e (tol 1e-10)", worst)};
}

// 4
Outcome zf_oracle() {
    Rng rng(0x2f);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int rows = 2 + static_cast<int>(rng.next_u64() % 7);
        const int cols = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(std::min(rows, 4)));
        const Eigen::MatrixXcd h = random_channel(rng, rows, cols);
        worst = std::max(worst, (zf_weights(h, 1e12) - oracle::pinv(h)).cwiseAbs().maxCoeff());
    }
    double exact = 0.0;
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Zero(8, 2);
    id(0, 0) = 1.0;
    id(1, 1) = 1.0;
    exact = std::max(exact, (zf_weights(id) - id.adjoint()).cwiseAbs().maxCoeff());
    const Eigen::MatrixXcd i4 = Eigen::MatrixXcd::Identity(4, 4);
    exact = std::max(exact, (zf_weights(i4) - i4).cwiseAbs().maxCoeff());
    Rng srng(0x5ca1e);
    for (int i = 0; i < 100; ++i) {
        const Eigen::MatrixXcd h = random_channel(srng, 8, 2);
        const cd s = srng.complex_normal(1.0) * 10.0;
        const Eigen::MatrixXcd w = zf_weights(h);
        exact = std::max(exact, (zf_weights(s * h) - w / s).cwiseAbs().maxCoeff() /
                                    std::max(1.0, w.cwiseAbs().maxCoeff() / std::abs(s)));
        exact = std::max(exact, (w * h - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-9 && exact <= 1e-12,
            fmt("1000 random matrices max diff vs pinv=%.2e (tol 1e-9); identity/scaling max=%.2e (tol 1e-12)",
                worst, exact)};
}

// 5
Outcome viterbi_oracle() {
    const ConvCode code;
    std::size_t cases = 0, mismatches = 0;
    for (std::size_t len = 1; len <= 12; ++len) {
        const std::uint32_t n_words = 1U << len;
        std::vector<std::uint32_t> codebook(n_words);
        for (std::uint32_t u = 0; u < n_words; ++u) codebook[u] = oracle::pack(oracle::encode_75(oracle::unpack(u, len)));
        const std::size_t coded_len = 2 * (len + 2);
        for (std::uint32_t u = 0; u < n_words; ++u) {
            const BitStream clean = conv_encode(oracle::unpack(u, len), code);
            for (std::size_t flip = 0; flip <= coded_len; ++flip) {
                BitStream rx = clean;
                if (flip < coded_len) rx[flip] ^= 1U;
                const auto want = oracle::nearest_codeword(oracle::pack(rx), codebook);
                const BitStream got = viterbi_decode(rx, code);
                ++cases;
                if (!want.unique || got != oracle::unpack(want.input, len)) ++mismatches;
            }
        }
    }
    return {mismatches == 0, fmt("%zu cases over lengths 1..12, mismatches=%zu", cases, mismatches)};
}

// 6, 7
struct MinusFive {
    std::vector<BerRecord> table;
    double seconds;
};

MinusFive minus_five_sweep() {
    SimConfig cfg;
    cfg.snr_grid = {-5.0};
    cfg.workers = hw_workers();
    const auto t0 = Clock::now();
    auto table = sweep(cfg);
    return {std::move(table), seconds_since(t0)};
}

const BerRecord& find(const std::vector<BerRecord>& table, Modulation m, double snr) {
    for (const auto& r : table) {
        if (r.modulation == m && r.snr_db == snr) return r;
    }
    throw std::logic_error("point missing");
}

Outcome ordering(const MinusFive& run) {
    const std::vector<Modulation> order{Modulation::Qpsk, Modulation::Qam8, Modulation::Psk8,
                                        Modulation::Qam16, Modulation::Qam32, Modulation::Qam64};
    bool pass = run.seconds < 300.0;
    std::string detail;
    for (auto m : order) {
        const auto& r = find(run.table, m, -5.0);
        pass = pass && r.bits >= 100000;
        detail += fmt("%s=%.4g±%.2g ", std::string(to_string(m)).c_str(), r.ber, r.ci95);
    }
    detail += "| gaps:";
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const auto& lo = find(run.table, order[i], -5.0);
        const auto& hi = find(run.table, order[i + 1], -5.0);
        const double gap = hi.ber - lo.ber;
        const double need = 2.0 * (lo.ci95 + hi.ci95);
        const bool ok = gap > need;
        pass = pass && ok;
        detail += fmt(" %s<%s %s", std::string(to_string(order[i])).c_str(),
                      std::string(to_string(order[i + 1])).c_str(), ok ? "ok" : "VIOLATED");
        if (!ok) detail += fmt("(gap %.3g, needs > %.3g)", gap, need);
    }
    detail += fmt(" | %.1f s (limit 300 s)", run.seconds);
    return {pass, detail};
}

Outcome magnitude(const MinusFive& run) {
    const auto& q = find(run.table, Modulation::Qpsk, -5.0);
    const auto& s = find(run.table, Modulation::Qam64, -5.0);
    const bool q_ok = q.ber >= 0.005 && q.ber <= 0.05;
    const bool s_ok = s.ber >= 0.15 && s.ber <= 0.40;
    return {q_ok && s_ok, fmt("qpsk=%.4g in [0.005, 0.05]: %s; 64qam=%.4g in [0.15, 0.40]: %s", q.ber,
                              q_ok ? "yes" : "no", s.ber, s_ok ? "yes" : "no")};
}

// 8
Outcome high_snr() {
    SimConfig cfg;
    cfg.min_bits = 1000000;
    cfg.max_bits = 1000000;
    const auto r = run_chain(cfg, Modulation::Qam64, 10.0);
    return {r.bits >= 1000000 && r.ber < 1e-2,
            fmt("64qam at 10 dB: %llu errors / %llu bits, ber=%.3g (limit 1e-2)",
                static_cast<unsigned long long>(r.errors), static_cast<unsigned long long>(r.bits), r.ber)};
}

// 9
Outcome monotonicity() {
    SimConfig cfg;
    cfg.workers = hw_workers();
    const auto t0 = Clock::now();
    const auto table = sweep(cfg);
    std::size_t violations = 0;
    std::string detail;
    for (auto m : cfg.modulations) {
        for (std::size_t i = 0; i + 1 < cfg.snr_grid.size(); ++i) {
            const auto& a = find(table, m, cfg.snr_grid[i]);
            const auto& b = find(table, m, cfg.snr_grid[i + 1]);
            if (b.ber > a.ber + 2.0 * (a.ci95 + b.ci95)) {
                ++violations;
                detail += fmt(" %s %g->%g dB", std::string(to_string(m)).c_str(), a.snr_db, b.snr_db);
            }
        }
    }
    return {violations == 0, fmt("%zu points, violations=%zu%s, %.1f s", table.size(), violations,
                                 detail.c_str(), seconds_since(t0))};
}

// 10
Outcome determinism() {
    SimConfig cfg;
    cfg.min_bits = 20000;
    cfg.max_bits = 20000;
    std::vector<std::string> outputs;
    for (unsigned w : {1U, 1U, 8U, 8U}) {
        cfg.workers = w;
        const auto table = sweep(cfg);
        outputs.push_back(ber_csv(table) + gain_csv(gains_for(cfg, table)));
    }
    const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const auto& s) { return s == outputs[0]; });
    return {same, fmt("4 full sweeps (workers 1,1,8,8), %zu-byte CSV output, identical=%s", outputs[0].size(),
                      same ? "yes" : "no")};
}

// 11
Outcome table1_preset() {
    SimConfig cfg;
    apply_profile(cfg, Profile::Table1);
    cfg.min_bits = 100000;
    cfg.max_bits = 100000;
    cfg.workers = hw_workers();
    const auto t0 = Clock::now();
    const auto table = sweep(cfg);
    const double t = seconds_since(t0);
    std::uint64_t fewest = ~0ULL;
    for (const auto& r : table) fewest = std::min(fewest, r.bits);
    return {table.size() == 42 && fewest >= 100000 && t < 1800.0,
            fmt("N=%zu cp=%zu, %zu points, min bits/point=%llu, %.1f s (limit 1800 s)", cfg.ofdm.n_subcarriers,
                cfg.ofdm.cp_len, table.size(), static_cast<unsigned long long>(fewest), t)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "chain transparency", transparency);
    report(2, "detector equivalence", detector_equivalence);
    report(3, "alamouti orthogonality", alamouti_orthogonality);
    report(4, "zf oracle", zf_oracle);
    report(5, "viterbi oracle", viterbi_oracle);
    MinusFive m5{};
    try {
        m5 = minus_five_sweep();
    } catch (const std::exception& e) {
        std::printf("-5 dB sweep failed: %s\n", e.what());
    }
    report(6, "ber ordering at -5 dB", [&] { return ordering(m5); });
    report(7, "ber magnitude at -5 dB", [&] { return magnitude(m5); });
    report(8, "64qam at 10 dB", high_snr);
    report(9, "monotonicity", monotonicity);
    report(10, "determinism", determinism);
    report(11, "table 1 preset sweep", table1_preset);

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
