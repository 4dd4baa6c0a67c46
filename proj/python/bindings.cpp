#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mimocdma/bits.hpp"
#include "mimocdma/errors.hpp"
#include "mimocdma/io.hpp"
#include "mimocdma/mimo.hpp"
#include "mimocdma/modem.hpp"
#include "mimocdma/ofdm.hpp"
#include "mimocdma/sim.hpp"

namespace py = pybind11;
using namespace mimocdma;

namespace {

using ComplexArray = py::array_t<cd, py::array::c_style | py::array::forcecast>;

ConvCode make_code(int k, std::array<std::uint32_t, 2> g) { return ConvCode(k, g); }

}  // namespace

PYBIND11_MODULE(mimocdma, m) {
    m.doc() = "2x4 MIMO MC-CDMA link-level simulator";

    py::register_exception<FramingError>(m, "FramingError", PyExc_ValueError);
    py::register_exception<InvalidSeedError>(m, "InvalidSeedError", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<SingularChannelError>(m, "SingularChannelError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Modulation>(m, "Modulation")
        .value("QPSK", Modulation::Qpsk)
        .value("PSK8", Modulation::Psk8)
        .value("QAM8", Modulation::Qam8)
        .value("QAM16", Modulation::Qam16)
        .value("QAM32", Modulation::Qam32)
        .value("QAM64", Modulation::Qam64);
    py::enum_<Detector>(m, "Detector").value("ZF", Detector::Zf).value("REALZF", Detector::RealZf);
    py::enum_<SnrReference>(m, "SnrReference")
        .value("ES_N0", SnrReference::EsN0)
        .value("COMBINED_EB_N0", SnrReference::CombinedEbN0);

    // bits
    m.def(
        "prbs_generate",
        [](std::uint64_t polynomial, std::uint64_t seed, std::size_t n) {
            Prbs p(polynomial, seed);
            return prbs_generate(p, n);
        },
        py::arg("polynomial"), py::arg("seed"), py::arg("n"));
    m.def(
        "spread",
        [](const BitStream& bits, std::array<std::uint8_t, kSpreadingFactor> chips) {
            return spread(bits, SpreadingCode(chips));
        },
        py::arg("bits"), py::arg("code") = SpreadingCode().chips());
    m.def(
        "despread",
        [](const BitStream& chips, std::array<std::uint8_t, kSpreadingFactor> code) {
            return despread(chips, SpreadingCode(code));
        },
        py::arg("chips"), py::arg("code") = SpreadingCode().chips());
    m.def(
        "conv_encode",
        [](const BitStream& bits, int k, std::array<std::uint32_t, 2> g) {
            return conv_encode(bits, make_code(k, g));
        },
        py::arg("bits"), py::arg("constraint_length") = 3,
        py::arg("generators") = std::array<std::uint32_t, 2>{07, 05});
    m.def(
        "viterbi_decode",
        [](const BitStream& coded, int k, std::array<std::uint32_t, 2> g) {
            return viterbi_decode(coded, make_code(k, g));
        },
        py::arg("coded"), py::arg("constraint_length") = 3,
        py::arg("generators") = std::array<std::uint32_t, 2>{07, 05});

    // modem
    m.def("constellation", [](Modulation mod) { return Constellation::get(mod).points(); });
    m.def("map_bits", [](const BitStream& bits, Modulation mod) { return map(bits, Constellation::get(mod)); });
    m.def("demap", [](ComplexArray symbols, Modulation mod) {
        return demap(std::span<const cd>(symbols.data(), static_cast<std::size_t>(symbols.size())),
                     Constellation::get(mod));
    });

    // ofdm
    m.def(
        "ofdm_modulate",
        [](ComplexArray freq, std::size_t n, std::size_t cp) {
            const auto syms = ofdm_modulate(
                std::span<const cd>(freq.data(), static_cast<std::size_t>(freq.size())), {n, cp});
            py::array_t<cd> out({syms.size(), n + cp});
            auto view = out.mutable_unchecked<2>();
            for (std::size_t b = 0; b < syms.size(); ++b) {
                for (std::size_t i = 0; i < n + cp; ++i) view(b, i) = syms[b].samples[i];
            }
            return out;
        },
        py::arg("freq"), py::arg("n_subcarriers"), py::arg("cp_len"));
    m.def(
        "ofdm_demodulate",
        [](ComplexArray time, std::size_t n, std::size_t cp) {
            if (time.ndim() != 2) throw FramingError("expected a 2-D array of OFDM symbols");
            std::vector<OfdmSymbol> syms(static_cast<std::size_t>(time.shape(0)));
            auto view = time.unchecked<2>();
            for (std::size_t b = 0; b < syms.size(); ++b) {
                syms[b].samples.resize(static_cast<std::size_t>(time.shape(1)));
                for (std::size_t i = 0; i < syms[b].samples.size(); ++i) syms[b].samples[i] = view(b, i);
            }
            return ofdm_demodulate(syms, {n, cp});
        },
        py::arg("time"), py::arg("n_subcarriers"), py::arg("cp_len"));

    // mimo
    m.def("zf_weights", &zf_weights, py::arg("h"), py::arg("cond_cap") = kDefaultConditionCap);
    m.def(
        "zf_detect",
        [](const Eigen::MatrixXcd& h, const Eigen::VectorXcd& y, Modulation mod) {
            auto out = zf_detect({h, y}, Constellation::get(mod));
            return py::make_tuple(out.estimates, out.decisions);
        },
        py::arg("h"), py::arg("y"), py::arg("modulation"));
    m.def(
        "realzf_detect",
        [](const Eigen::MatrixXcd& h, const Eigen::VectorXcd& y, Modulation mod) {
            auto out = realzf_detect({h, y}, Constellation::get(mod));
            return py::make_tuple(out.estimates, out.decisions);
        },
        py::arg("h"), py::arg("y"), py::arg("modulation"));
    m.def(
        "build_effective",
        [](const Eigen::MatrixXcd& h, std::vector<cd> slot1, std::vector<cd> slot2, double gain) {
            auto eff = build_effective(h, slot1, slot2, gain);
            return py::make_tuple(eff.h, eff.y);
        },
        py::arg("h"), py::arg("slot1"), py::arg("slot2"), py::arg("tx_gain") = 1.0);

    // simengine
    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_static("from_text", [](const std::string& text) { return parse_config_text(text); })
        .def("set", [](SimConfig& c, const std::string& key, const std::string& value) {
            apply_setting(c, key, value);
        })
        .def("validate", &SimConfig::validate)
        .def_readwrite("modulations", &SimConfig::modulations)
        .def_readwrite("snr_grid", &SimConfig::snr_grid)
        .def_property(
            "n_subcarriers", [](const SimConfig& c) { return c.ofdm.n_subcarriers; },
            [](SimConfig& c, std::size_t n) { c.ofdm.n_subcarriers = n; })
        .def_property(
            "cp_len", [](const SimConfig& c) { return c.ofdm.cp_len; },
            [](SimConfig& c, std::size_t n) { c.ofdm.cp_len = n; })
        .def_readwrite("detector", &SimConfig::detector)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("min_bits", &SimConfig::min_bits)
        .def_readwrite("max_bit_errors", &SimConfig::max_bit_errors)
        .def_readwrite("max_bits", &SimConfig::max_bits)
        .def_readwrite("workers", &SimConfig::workers)
        .def_readwrite("spreading", &SimConfig::spreading)
        .def_readwrite("fec", &SimConfig::fec)
        .def_readwrite("stbc", &SimConfig::stbc)
        .def_readwrite("n_rx", &SimConfig::n_rx)
        .def_readwrite("snr_reference", &SimConfig::snr_reference)
        .def_readwrite("noise", &SimConfig::noise)
        .def_readwrite("cond_cap", &SimConfig::cond_cap)
        .def(py::self == py::self);

    py::class_<BerRecord>(m, "BerRecord")
        .def_readonly("modulation", &BerRecord::modulation)
        .def_readonly("snr_db", &BerRecord::snr_db)
        .def_readonly("bits", &BerRecord::bits)
        .def_readonly("errors", &BerRecord::errors)
        .def_readonly("ber", &BerRecord::ber)
        .def_readonly("ci95", &BerRecord::ci95)
        .def_readonly("frames", &BerRecord::frames)
        .def_readonly("singular_redraws", &BerRecord::singular_redraws);

    py::class_<GainRecord>(m, "GainRecord")
        .def_readonly("modulation", &GainRecord::modulation)
        .def_readonly("reference", &GainRecord::reference)
        .def_readonly("at_snr_db", &GainRecord::at_snr_db)
        .def_readonly("gain_db", &GainRecord::gain_db)
        .def_readonly("extrapolation_required", &GainRecord::extrapolation_required);

    m.def("run_chain", &run_chain, py::arg("config"), py::arg("modulation"), py::arg("snr_db"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep", &sweep, py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("gain_vs_reference", &gain_vs_reference, py::arg("table"), py::arg("target"),
          py::arg("reference"), py::arg("at_snr_db"));
    m.def("ber_csv", &ber_csv);
    m.def("constellation_fixture", &constellation_fixture);
    m.attr("__version__") = version_string();
}
