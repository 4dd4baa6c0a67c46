#include "mimocdma/bits.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

#include "mimocdma/errors.hpp"

namespace mimocdma {

namespace {

int highest_bit(std::uint64_t v) { return 63 - std::countl_zero(v); }

std::uint8_t parity(std::uint64_t v) { return static_cast<std::uint8_t>(std::popcount(v) & 1); }

}  // namespace

Prbs::Prbs(std::uint64_t polynomial, std::uint64_t seed) : polynomial_(polynomial) {
    if (polynomial == 0 || (polynomial & 1U) == 0) {
        throw std::invalid_argument("LFSR polynomial needs a constant term");
    }
    degree_ = highest_bit(polynomial);
    if (degree_ < 2 || degree_ > 63) {
        throw std::invalid_argument("LFSR degree must be in [2, 63]");
    }
    const std::uint64_t mask = (std::uint64_t{1} << degree_) - 1;
    taps_ = polynomial & mask;
    state_ = seed & mask;
    if (state_ == 0) {
        throw InvalidSeedError("LFSR seed must be nonzero in the low " + std::to_string(degree_) +
                               " bits");
    }
}

std::uint8_t Prbs::step() {
    const auto out = static_cast<std::uint8_t>(state_ & 1U);
    const std::uint64_t fb = parity(state_ & taps_);
    state_ = (state_ >> 1) | (fb << (degree_ - 1));
    return out;
}

BitStream prbs_generate(Prbs& prbs, std::size_t n) {
    BitStream out(n);
    for (auto& b : out) b = prbs.step();
    return out;
}

SpreadingCode::SpreadingCode() : chips_{1, 0, 1, 1, 0, 0, 1, 0} {}

SpreadingCode::SpreadingCode(const std::array<std::uint8_t, kSpreadingFactor>& chips)
    : chips_(chips) {
    std::size_t ones = 0;
    for (auto c : chips_) {
        if (c > 1) throw std::invalid_argument("spreading chips must be 0 or 1");
        ones += c;
    }
    if (ones == 0 || ones == kSpreadingFactor) {
        throw std::invalid_argument("spreading code must not be constant");
    }
}

SpreadingCode SpreadingCode::from_prbs(Prbs& prbs) {
    std::array<std::uint8_t, kSpreadingFactor> chips{};
    for (auto& c : chips) c = prbs.step();
    return SpreadingCode(chips);
}

BitStream spread(const BitStream& data, const SpreadingCode& code) {
    BitStream out;
    out.reserve(data.size() * kSpreadingFactor);
    for (auto b : data) {
        for (auto c : code.chips()) out.push_back(static_cast<std::uint8_t>((b ^ c) & 1U));
    }
    return out;
}

BitStream despread(const BitStream& chips, const SpreadingCode& code) {
    if (chips.size() % kSpreadingFactor != 0) {
        throw FramingError("chip count " + std::to_string(chips.size()) +
                           " is not a multiple of the spreading factor");
    }
    BitStream out(chips.size() / kSpreadingFactor);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t votes = 0;
        for (std::size_t k = 0; k < kSpreadingFactor; ++k) {
            votes += (chips[i * kSpreadingFactor + k] ^ code.chips()[k]) & 1U;
        }
        out[i] = votes > kSpreadingFactor / 2 ? 1 : 0;
    }
    return out;
}

ConvCode::ConvCode() : ConvCode(3, {07, 05}) {}

ConvCode::ConvCode(int constraint_length, std::array<std::uint32_t, 2> generators)
    : k_(constraint_length), gens_(generators) {
    if (k_ < 2 || k_ > 16) throw std::invalid_argument("constraint length must be in [2, 16]");
    for (auto g : gens_) {
        if (g >> k_ != 0) throw std::invalid_argument("generator wider than constraint length");
        if ((g & 1U) == 0) throw std::invalid_argument("generator must tap the current input");
    }
}

BitStream conv_encode(const BitStream& data, const ConvCode& code) {
    const std::size_t tail = static_cast<std::size_t>(code.constraint_length() - 1);
    const std::uint32_t mask = (1U << code.constraint_length()) - 1;
    BitStream out;
    out.reserve(2 * (data.size() + tail));
    std::uint32_t reg = 0;
    auto push = [&](std::uint8_t bit) {
        reg = ((reg << 1) | (bit & 1U)) & mask;
        out.push_back(parity(reg & code.generators()[0]));
        out.push_back(parity(reg & code.generators()[1]));
    };
    for (auto b : data) push(b);
    for (std::size_t i = 0; i < tail; ++i) push(0);
    return out;
}

BitStream viterbi_decode(const BitStream& coded, const ConvCode& code) {
    if (coded.size() % 2 != 0) {
        throw FramingError("coded length " + std::to_string(coded.size()) + " is odd");
    }
    const std::size_t steps = coded.size() / 2;
    const auto tail = static_cast<std::size_t>(code.constraint_length() - 1);
    if (steps == 0) return {};
    if (steps < tail) throw FramingError("coded stream shorter than the termination tail");

    const int k = code.constraint_length();
    const auto n_states = static_cast<std::uint32_t>(code.n_states());
    const std::uint32_t mask = (1U << k) - 1;
    const auto g0 = code.generators()[0];
    const auto g1 = code.generators()[1];

    // Branch outputs indexed by the full register contents.
    std::vector<std::uint8_t> branch(std::size_t{1} << k);
    for (std::uint32_t reg = 0; reg <= mask; ++reg) {
        branch[reg] = static_cast<std::uint8_t>((parity(reg & g0) << 1) | parity(reg & g1));
    }

    constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max() / 2;
    std::vector<std::uint32_t> metric(n_states, kUnreached), next(n_states);
    metric[0] = 0;
    // decisions[t * n_states + s]: the register bit that fell off when entering s at step t.
    std::vector<std::uint8_t> decisions(steps * n_states);

    for (std::size_t t = 0; t < steps; ++t) {
        const auto rx = static_cast<std::uint8_t>((coded[2 * t] << 1) | coded[2 * t + 1]);
        for (std::uint32_t ns = 0; ns < n_states; ++ns) {
            std::uint32_t best = kUnreached * 2;
            std::uint8_t best_drop = 0;
            for (std::uint8_t drop = 0; drop < 2; ++drop) {
                const std::uint32_t prev = (ns >> 1) | (std::uint32_t{drop} << (k - 2));
                if (metric[prev] >= kUnreached) continue;
                const std::uint32_t reg = (prev << 1 | (ns & 1U)) & mask;
                const std::uint32_t m =
                    metric[prev] + static_cast<std::uint32_t>(std::popcount(
                                       static_cast<unsigned>(branch[reg] ^ rx)));
                if (m < best) {
                    best = m;
                    best_drop = drop;
                }
            }
            next[ns] = best >= kUnreached ? kUnreached : best;
            decisions[t * n_states + ns] = best_drop;
        }
        metric.swap(next);
    }

    BitStream inputs(steps);
    std::uint32_t state = 0;
    for (std::size_t t = steps; t-- > 0;) {
        inputs[t] = static_cast<std::uint8_t>(state & 1U);
        state = (state >> 1) | (std::uint32_t{decisions[t * n_states + state]} << (k - 2));
    }
    inputs.resize(steps - tail);
    return inputs;
}

}  // namespace mimocdma
