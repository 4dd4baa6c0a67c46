#include "mimocdma/ofdm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "mimocdma/errors.hpp"

namespace mimocdma {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<cd> scratch(n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void transform(std::span<cd> x, int sign) {
    if (x.empty()) return;
    auto* buf = reinterpret_cast<fftw_complex*>(x.data());
    fftw_execute_dft(plan_cache().get(x.size(), sign), buf, buf);
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : x) v *= scale;
}

}  // namespace

void OfdmConfig::validate() const {
    if (n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be >= 1");
    if (cp_len > n_subcarriers) throw std::invalid_argument("cp_len must not exceed n_subcarriers");
}

void unitary_dft(std::span<cd> x) { transform(x, FFTW_FORWARD); }

void unitary_idft(std::span<cd> x) { transform(x, FFTW_BACKWARD); }

std::vector<OfdmSymbol> ofdm_modulate(std::span<const cd> freq, const OfdmConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_subcarriers;
    if (freq.size() % n != 0) {
        throw FramingError("symbol count " + std::to_string(freq.size()) +
                           " does not fill whole OFDM symbols of " + std::to_string(n));
    }
    std::vector<OfdmSymbol> out(freq.size() / n);
    for (std::size_t b = 0; b < out.size(); ++b) {
        auto& s = out[b].samples;
        s.resize(cfg.symbol_length());
        std::span<cd> body(s.data() + cfg.cp_len, n);
        std::copy_n(freq.begin() + static_cast<std::ptrdiff_t>(b * n), n, body.begin());
        unitary_idft(body);
        std::copy_n(body.end() - static_cast<std::ptrdiff_t>(cfg.cp_len), cfg.cp_len, s.begin());
    }
    return out;
}

SymbolFrame ofdm_demodulate(std::span<const OfdmSymbol> symbols, const OfdmConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_subcarriers;
    SymbolFrame out(symbols.size() * n);
    for (std::size_t b = 0; b < symbols.size(); ++b) {
        const auto& s = symbols[b].samples;
        if (s.size() != cfg.symbol_length()) {
            throw FramingError("OFDM symbol has " + std::to_string(s.size()) + " samples, expected " +
                               std::to_string(cfg.symbol_length()));
        }
        std::span<cd> dst(out.data() + b * n, n);
        std::copy_n(s.begin() + static_cast<std::ptrdiff_t>(cfg.cp_len), n, dst.begin());
        unitary_dft(dst);
    }
    return out;
}

}  // namespace mimocdma
