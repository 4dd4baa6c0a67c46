#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mimocdma/errors.hpp"
#include "mimocdma/ofdm.hpp"
#include "oracles.hpp"

using namespace mimocdma;

namespace {

std::vector<cd> random_symbols(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> nd;
    std::vector<cd> x(n);
    for (auto& v : x) v = {nd(gen), nd(gen)};
    return x;
}

double energy(std::span<const cd> x) {
    double e = 0.0;
    for (const auto& v : x) e += std::norm(v);
    return e;
}

double max_abs_diff(std::span<const cd> a, std::span<const cd> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("4-point example with a one-sample prefix") {
    const std::vector<cd> x{1, 0, 0, 0};
    const auto syms = ofdm_modulate(x, {4, 1});
    REQUIRE(syms.size() == 1);
    REQUIRE(syms[0].samples.size() == 5);
    for (const auto& v : syms[0].samples) CHECK(std::abs(v - cd(0.5, 0.0)) < 1e-15);

    const auto zero = ofdm_modulate(std::vector<cd>(8), {4, 1});
    for (const auto& s : zero) {
        for (const auto& v : s.samples) CHECK(v == cd{});
    }
}

TEST_CASE("transforms match the naive DFT for mixed-radix sizes") {
    std::mt19937_64 gen(2);
    for (std::size_t n : {1, 2, 3, 5, 7, 12, 60, 100, 6400 / 16}) {
        CAPTURE(n);
        const auto x = random_symbols(gen, n);
        auto fwd = x;
        unitary_dft(fwd);
        auto inv = x;
        unitary_idft(inv);
        CHECK(max_abs_diff(fwd, oracle::dft(x, -1)) < 1e-10);
        CHECK(max_abs_diff(inv, oracle::dft(x, +1)) < 1e-10);
    }
}

TEST_CASE("unitarity and cyclic prefix structure") {
    std::mt19937_64 gen(4);
    for (OfdmConfig cfg : {OfdmConfig{8, 2}, OfdmConfig{256, 64}, OfdmConfig{6400, 1280}, OfdmConfig{30, 0}}) {
        const auto x = random_symbols(gen, 3 * cfg.n_subcarriers);
        const auto syms = ofdm_modulate(x, cfg);
        REQUIRE(syms.size() == 3);
        for (std::size_t b = 0; b < 3; ++b) {
            const auto& s = syms[b].samples;
            REQUIRE(s.size() == cfg.symbol_length());
            for (std::size_t i = 0; i < cfg.cp_len; ++i) CHECK(s[i] == s[cfg.n_subcarriers + i]);
            const std::span<const cd> body(s.data() + cfg.cp_len, cfg.n_subcarriers);
            const std::span<const cd> in(x.data() + b * cfg.n_subcarriers, cfg.n_subcarriers);
            CHECK(std::abs(energy(body) - energy(in)) < 1e-10 * energy(in));
        }
    }
}

TEST_CASE("perfect reconstruction including the default sizes") {
    std::mt19937_64 gen(6);
    for (OfdmConfig cfg : {OfdmConfig{}, OfdmConfig{256, 64}, OfdmConfig{64, 0}, OfdmConfig{7, 7}}) {
        const auto x = random_symbols(gen, 2 * cfg.n_subcarriers);
        const auto y = ofdm_demodulate(ofdm_modulate(x, cfg), cfg);
        REQUIRE(y.size() == x.size());
        CHECK(max_abs_diff(x, y) <= 1e-10 * std::sqrt(energy(x) / static_cast<double>(x.size())));
    }
    CHECK(OfdmConfig{}.n_subcarriers == 6400);
    CHECK(OfdmConfig{}.cp_len == 1280);
}

TEST_CASE("timing advance inside the prefix is a per-subcarrier phase") {
    // Window starting k samples early: Y[m] = X[m] * exp(-j 2 pi m k / N).
    std::mt19937_64 gen(8);
    const OfdmConfig cfg{8, 3};
    const auto x = random_symbols(gen, 8);
    const auto sym = ofdm_modulate(x, cfg);
    for (std::size_t k = 1; k < cfg.cp_len; ++k) {
        OfdmSymbol shifted;
        shifted.samples.assign(k, cd{9.0, -9.0});
        shifted.samples.insert(shifted.samples.end(), sym[0].samples.begin(),
                               sym[0].samples.end() - static_cast<std::ptrdiff_t>(k));
        const auto y = ofdm_demodulate(std::vector<OfdmSymbol>{shifted}, cfg);
        for (std::size_t m = 0; m < 8; ++m) {
            const cd phasor = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m * k) / 8.0);
            CHECK(std::abs(y[m] - x[m] * phasor) < 1e-12);
            CHECK(std::abs(std::abs(y[m] / x[m]) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("framing errors") {
    CHECK_THROWS_AS(ofdm_modulate(std::vector<cd>(5), {4, 1}), FramingError);
    std::vector<OfdmSymbol> bad(1);
    bad[0].samples.resize(4);
    CHECK_THROWS_AS(ofdm_demodulate(bad, {4, 1}), FramingError);
    CHECK_THROWS_AS(OfdmConfig({4, 5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(OfdmConfig({0, 0}).validate(), std::invalid_argument);
}
