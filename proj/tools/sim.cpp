// Command-line front end: `sim sweep` runs a BER sweep and writes CSV plus a
// run manifest; `sim constellations` prints the point tables.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mimocdma/errors.hpp"
#include "mimocdma/io.hpp"
#include "mimocdma/sim.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
    using namespace mimocdma;

    CLI::App app{"MIMO MC-CDMA link-level BER simulator"};
    app.require_subcommand(1);

    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo BER sweep over modulations x SNR");
    std::string config_path, snr, mods, detector, profile, out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    bool quiet = false;
    sweep_cmd->add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--snr", snr, "SNR grid a:step:b or comma list (dB)");
    sweep_cmd->add_option("--mod", mods, "Modulations, e.g. qpsk,64qam");
    sweep_cmd->add_option("--detector", detector, "zf | realzf");
    sweep_cmd->add_option("--seed", seed, "Master seed");
    sweep_cmd->add_option("--profile", profile, "table1 | fast");
    sweep_cmd->add_option("--workers", workers, "Worker threads");
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    sweep_cmd->add_flag("--quiet", quiet, "Do not echo the BER table");

    auto* const_cmd = app.add_subcommand("constellations", "Print the constellation point tables");
    std::string const_out;
    const_cmd->add_option("--out", const_out, "Write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*const_cmd) {
        const std::string table = constellation_fixture();
        if (const_out.empty()) {
            std::cout << table;
            return 0;
        }
        std::FILE* f = std::fopen(const_out.c_str(), "wb");
        if (f == nullptr || std::fwrite(table.data(), 1, table.size(), f) != table.size()) {
            std::cerr << "error: cannot write " << const_out << '\n';
            if (f != nullptr) std::fclose(f);
            return kExitRuntime;
        }
        std::fclose(f);
        return 0;
    }

    SimConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
        if (!profile.empty()) apply_setting(cfg, "profile", profile);
        if (!snr.empty()) apply_setting(cfg, "snr_grid", snr);
        if (!mods.empty()) apply_setting(cfg, "modulations", mods);
        if (!detector.empty()) apply_setting(cfg, "detector", detector);
        if (seed) cfg.seed = *seed;
        if (workers) cfg.workers = *workers;
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const auto table = sweep(cfg);
        const auto gains = gains_for(cfg, table);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto files = emit_results(cfg, table, gains, out_dir, wall);
        if (!quiet) std::cout << ber_csv(table) << '\n' << gain_csv(gains);
        std::cerr << "wrote " << files.ber_csv.string() << ", " << files.gain_csv.string() << ", "
                  << files.manifest.string() << " in " << wall << " s\n";
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
