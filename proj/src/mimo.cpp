#include "mimocdma/mimo.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mimocdma/errors.hpp"

namespace mimocdma {

namespace {

void check_condition(double cond, double cap) {
    if (!(cond <= cap)) {
        throw SingularChannelError("channel condition number " + std::to_string(cond) +
                                   " exceeds cap " + std::to_string(cap));
    }
}

double condition_from_gram_eigenvalues(double lo, double hi) {
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(hi / lo);
}

std::vector<std::uint32_t> decide(const Eigen::VectorXcd& est, const Constellation& c) {
    std::vector<std::uint32_t> out(static_cast<std::size_t>(est.size()));
    for (Eigen::Index i = 0; i < est.size(); ++i) out[static_cast<std::size_t>(i)] = c.nearest(est(i));
    return out;
}

}  // namespace

std::array<SymbolGrid, 2> stbc_encode(const SymbolGrid& symbols) {
    if (symbols.n_slots % 2 != 0) {
        throw FramingError("Alamouti encoding needs an even slot count, got " +
                           std::to_string(symbols.n_slots));
    }
    std::array<SymbolGrid, 2> out{SymbolGrid(symbols.n_slots, symbols.n_subcarriers),
                                  SymbolGrid(symbols.n_slots, symbols.n_subcarriers)};
    for (std::size_t p = 0; p < symbols.n_slots; p += 2) {
        for (std::size_t k = 0; k < symbols.n_subcarriers; ++k) {
            const cd a1 = symbols.at(p, k);
            const cd a2 = symbols.at(p + 1, k);
            out[0].at(p, k) = a1;
            out[0].at(p + 1, k) = -std::conj(a2);
            out[1].at(p, k) = a2;
            out[1].at(p + 1, k) = std::conj(a1);
        }
    }
    return out;
}

EffectiveChannel build_effective(const Eigen::MatrixXcd& h, std::span<const cd> slot1,
                                 std::span<const cd> slot2, double tx_gain) {
    const Eigen::Index n_rx = h.rows();
    if (h.cols() != 2 || slot1.size() != static_cast<std::size_t>(n_rx) ||
        slot2.size() != static_cast<std::size_t>(n_rx)) {
        throw ShapeError("Alamouti effective channel needs an n_rx x 2 matrix and n_rx samples per slot");
    }
    EffectiveChannel eff{Eigen::MatrixXcd(2 * n_rx, 2), Eigen::VectorXcd(2 * n_rx)};
    for (Eigen::Index j = 0; j < n_rx; ++j) {
        const cd h1 = tx_gain * h(j, 0);
        const cd h2 = tx_gain * h(j, 1);
        eff.h(2 * j, 0) = h1;
        eff.h(2 * j, 1) = h2;
        eff.h(2 * j + 1, 0) = std::conj(h2);
        eff.h(2 * j + 1, 1) = -std::conj(h1);
        eff.y(2 * j) = slot1[static_cast<std::size_t>(j)];
        eff.y(2 * j + 1) = std::conj(slot2[static_cast<std::size_t>(j)]);
    }
    return eff;
}

double condition_number(const Eigen::MatrixXcd& h) {
    const Eigen::MatrixXcd gram = h.adjoint() * h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    return condition_from_gram_eigenvalues(ev.minCoeff(), ev.maxCoeff());
}

Eigen::MatrixXcd zf_weights(const Eigen::MatrixXcd& h, double cond_cap) {
    if (h.rows() < h.cols()) throw SingularChannelError("more streams than receive dimensions");
    const Eigen::MatrixXcd gram = h.adjoint() * h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    check_condition(condition_from_gram_eigenvalues(eig.eigenvalues().minCoeff(),
                                                    eig.eigenvalues().maxCoeff()),
                    cond_cap);
    return gram.inverse() * h.adjoint();
}

DetectorOutput zf_detect(const EffectiveChannel& eff, const Constellation& c, double cond_cap) {
    DetectorOutput out;
    out.estimates = zf_weights(eff.h, cond_cap) * eff.y;
    out.decisions = decide(out.estimates, c);
    return out;
}

RealDecomposition real_decompose(const EffectiveChannel& eff) {
    const Eigen::Index m = eff.h.rows();
    const Eigen::Index p = eff.h.cols();
    RealDecomposition r{Eigen::MatrixXd(2 * m, 2 * p), Eigen::VectorXd(2 * m)};
    const Eigen::MatrixXd hr = eff.h.real();
    const Eigen::MatrixXd hi = eff.h.imag();
    r.h_hat.topLeftCorner(m, p) = hr;
    r.h_hat.topRightCorner(m, p) = -hi;
    r.h_hat.bottomLeftCorner(m, p) = hi;
    r.h_hat.bottomRightCorner(m, p) = hr;
    r.y_hat.head(m) = eff.y.real();
    r.y_hat.tail(m) = eff.y.imag();
    return r;
}

DetectorOutput realzf_detect(const EffectiveChannel& eff, const Constellation& c, double cond_cap) {
    const RealDecomposition r = real_decompose(eff);
    const Eigen::MatrixXd gram = r.h_hat.transpose() * r.h_hat;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    check_condition(condition_from_gram_eigenvalues(eig.eigenvalues().minCoeff(),
                                                    eig.eigenvalues().maxCoeff()),
                    cond_cap);
    const Eigen::VectorXd a = gram.inverse() * (r.h_hat.transpose() * r.y_hat);

    const Eigen::Index p = eff.h.cols();
    DetectorOutput out;
    out.estimates.resize(p);
    for (Eigen::Index i = 0; i < p; ++i) out.estimates(i) = {a(i), a(p + i)};
    out.decisions = decide(out.estimates, c);
    return out;
}

DetectorOutput detect(Detector d, const EffectiveChannel& eff, const Constellation& c,
                      double cond_cap) {
    return d == Detector::Zf ? zf_detect(eff, c, cond_cap) : realzf_detect(eff, c, cond_cap);
}

}  // namespace mimocdma
