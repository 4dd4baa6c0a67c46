#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mimocdma/modem.hpp"
#include "mimocdma/types.hpp"

namespace mimocdma {

inline constexpr double kDefaultConditionCap = 1e8;

enum class Detector { Zf, RealZf };

/// Alamouti over slot pairs on every subcarrier: for (a1, a2) in slots
/// (2p, 2p+1), antenna 1 sends [a1, -conj(a2)] and antenna 2 sends
/// [a2, conj(a1)]. Throws FramingError on an odd slot count.
std::array<SymbolGrid, 2> stbc_encode(const SymbolGrid& symbols);

/// Stacked linear model y = H a + n for one detection block.
struct EffectiveChannel {
    Eigen::MatrixXcd h;
    Eigen::VectorXcd y;
};

/// Alamouti effective channel for one subcarrier. `h` is n_rx x 2,
/// `slot1`/`slot2` the n_rx received samples. Per receive antenna j the rows
/// are g*[h_j1, h_j2] (for y_j1) and g*[conj(h_j2), -conj(h_j1)] (for
/// conj(y_j2)), where g = `tx_gain` is the per-antenna amplitude scaling.
EffectiveChannel build_effective(const Eigen::MatrixXcd& h, std::span<const cd> slot1,
                                 std::span<const cd> slot2, double tx_gain = 1.0);

/// Ratio of extreme singular values of `h` (infinity if rank deficient).
double condition_number(const Eigen::MatrixXcd& h);

/// W = (H^H H)^{-1} H^H. Throws SingularChannelError if cond(H) > cap.
Eigen::MatrixXcd zf_weights(const Eigen::MatrixXcd& h, double cond_cap = kDefaultConditionCap);

struct DetectorOutput {
    Eigen::VectorXcd estimates;
    std::vector<std::uint32_t> decisions;
};

/// a~ = W y with W from zf_weights; decisions are nearest labels of `c`.
DetectorOutput zf_detect(const EffectiveChannel& eff, const Constellation& c,
                         double cond_cap = kDefaultConditionCap);

/// Real-valued form of a complex model: y_hat = [Re y; Im y] and
/// H_hat = [[Re H, -Im H], [Im H, Re H]] acting on [Re a; Im a].
struct RealDecomposition {
    Eigen::MatrixXd h_hat;
    Eigen::VectorXd y_hat;
};

RealDecomposition real_decompose(const EffectiveChannel& eff);

/// Solves (H_hat^T H_hat)^{-1} H_hat^T y_hat and reassembles
/// [a1R, a2R, a1I, a2I] into complex estimates.
DetectorOutput realzf_detect(const EffectiveChannel& eff, const Constellation& c,
                             double cond_cap = kDefaultConditionCap);

DetectorOutput detect(Detector d, const EffectiveChannel& eff, const Constellation& c,
                      double cond_cap = kDefaultConditionCap);

}  // namespace mimocdma
