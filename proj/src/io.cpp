#include "mimocdma/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "mimocdma/errors.hpp"

#ifndef MIMOCDMA_VERSION
#define MIMOCDMA_VERSION "unknown"
#endif

namespace mimocdma {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto pos = s.find(sep);
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    v = trim(v);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, v);
    return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v, int base = 10) {
    std::uint64_t out = 0;
    v = trim(v);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, v);
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    v = trim(v);
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v);
}

std::string_view detector_name(Detector d) { return d == Detector::Zf ? "zf" : "realzf"; }

Detector parse_detector(std::string_view key, std::string_view v) {
    if (v == "zf") return Detector::Zf;
    if (v == "realzf") return Detector::RealZf;
    bad_value(key, v);
}

std::string_view reference_name(SnrReference r) {
    return r == SnrReference::EsN0 ? "es_n0" : "combined_eb_n0";
}

SnrReference parse_reference(std::string_view key, std::string_view v) {
    if (v == "es_n0") return SnrReference::EsN0;
    if (v == "combined_eb_n0") return SnrReference::CombinedEbN0;
    bad_value(key, v);
}

Modulation parse_mod(std::string_view key, std::string_view v) {
    if (auto m = parse_modulation(trim(v))) return *m;
    bad_value(key, v);
}

std::array<std::uint8_t, kSpreadingFactor> parse_chips(std::string_view key, std::string_view v) {
    std::array<std::uint8_t, kSpreadingFactor> chips{};
    std::vector<std::string_view> parts = split(v, ',');
    if (parts.size() == 1) {
        parts.clear();
        for (std::size_t i = 0; i < v.size(); ++i) parts.push_back(v.substr(i, 1));
    }
    if (parts.size() != kSpreadingFactor) bad_value(key, v);
    for (std::size_t i = 0; i < kSpreadingFactor; ++i) {
        const auto c = parse_uint(key, parts[i]);
        if (c > 1) bad_value(key, v);
        chips[i] = static_cast<std::uint8_t>(c);
    }
    return chips;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string());
    out << content;
    out.flush();
    if (!out) throw IoError(path.string());
}

json config_to_json(const SimConfig& cfg) {
    json j;
    j["modulations"] = json::array();
    for (auto m : cfg.modulations) j["modulations"].push_back(std::string(to_string(m)));
    j["snr_grid"] = cfg.snr_grid;
    j["n_subcarriers"] = cfg.ofdm.n_subcarriers;
    j["cp_len"] = cfg.ofdm.cp_len;
    j["spreading_code"] = cfg.spreading_code;
    j["constraint_length"] = cfg.constraint_length;
    j["generators"] = cfg.generators;
    j["detector"] = detector_name(cfg.detector);
    j["seed"] = cfg.seed;
    j["min_bits"] = cfg.min_bits;
    j["max_bit_errors"] = cfg.max_bit_errors;
    j["max_bits"] = cfg.max_bits;
    j["workers"] = cfg.workers;
    j["spreading"] = cfg.spreading;
    j["fec"] = cfg.fec;
    j["stbc"] = cfg.stbc;
    j["n_rx"] = cfg.n_rx;
    j["snr_reference"] = reference_name(cfg.snr_reference);
    j["noise"] = cfg.noise;
    j["cond_cap"] = cfg.cond_cap;
    j["gain_reference"] = std::string(to_string(cfg.gain_reference));
    j["gain_snr_db"] = cfg.gain_snr_db;
    return j;
}

SimConfig config_from_json(const json& j) {
    SimConfig cfg;
    cfg.modulations.clear();
    for (const auto& m : j.at("modulations")) {
        cfg.modulations.push_back(parse_mod("modulations", m.get<std::string>()));
    }
    cfg.snr_grid = j.at("snr_grid").get<std::vector<double>>();
    cfg.ofdm.n_subcarriers = j.at("n_subcarriers").get<std::size_t>();
    cfg.ofdm.cp_len = j.at("cp_len").get<std::size_t>();
    cfg.spreading_code = j.at("spreading_code").get<std::array<std::uint8_t, kSpreadingFactor>>();
    cfg.constraint_length = j.at("constraint_length").get<int>();
    cfg.generators = j.at("generators").get<std::array<std::uint32_t, 2>>();
    cfg.detector = parse_detector("detector", j.at("detector").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.min_bits = j.at("min_bits").get<std::uint64_t>();
    cfg.max_bit_errors = j.at("max_bit_errors").get<std::uint64_t>();
    cfg.max_bits = j.at("max_bits").get<std::uint64_t>();
    cfg.workers = j.at("workers").get<unsigned>();
    cfg.spreading = j.at("spreading").get<bool>();
    cfg.fec = j.at("fec").get<bool>();
    cfg.stbc = j.at("stbc").get<bool>();
    cfg.n_rx = j.at("n_rx").get<unsigned>();
    cfg.snr_reference = parse_reference("snr_reference", j.at("snr_reference").get<std::string>());
    cfg.noise = j.at("noise").get<bool>();
    cfg.cond_cap = j.at("cond_cap").get<double>();
    cfg.gain_reference = parse_mod("gain_reference", j.at("gain_reference").get<std::string>());
    cfg.gain_snr_db = j.at("gain_snr_db").get<double>();
    return cfg;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<double> parse_snr_grid(std::string_view text) {
    text = trim(text);
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) bad_value("snr_grid", text);
        const double a = parse_double("snr_grid", parts[0]);
        const double step = parse_double("snr_grid", parts[1]);
        const double b = parse_double("snr_grid", parts[2]);
        if (!(step > 0.0) || b < a) bad_value("snr_grid", text);
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) grid.push_back(a + static_cast<double>(i) * step);
    } else {
        for (auto p : split(text, ',')) grid.push_back(parse_double("snr_grid", p));
    }
    return grid;
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "profile") {
        if (value == "fast") apply_profile(cfg, Profile::Fast);
        else if (value == "table1") apply_profile(cfg, Profile::Table1);
        else bad_value(key, value);
    } else if (key == "modulations") {
        cfg.modulations.clear();
        for (auto p : split(value, ',')) cfg.modulations.push_back(parse_mod(key, p));
    } else if (key == "snr_grid") {
        cfg.snr_grid = parse_snr_grid(value);
    } else if (key == "n_subcarriers") {
        cfg.ofdm.n_subcarriers = parse_uint(key, value);
    } else if (key == "cp_len") {
        cfg.ofdm.cp_len = parse_uint(key, value);
    } else if (key == "spreading_code") {
        cfg.spreading_code = parse_chips(key, value);
    } else if (key == "constraint_length") {
        cfg.constraint_length = static_cast<int>(parse_uint(key, value));
    } else if (key == "generators") {
        const auto parts = split(value, ',');
        if (parts.size() != 2) bad_value(key, value);
        cfg.generators = {static_cast<std::uint32_t>(parse_uint(key, parts[0], 8)),
                          static_cast<std::uint32_t>(parse_uint(key, parts[1], 8))};
    } else if (key == "detector") {
        cfg.detector = parse_detector(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_uint(key, value);
    } else if (key == "min_bits") {
        cfg.min_bits = parse_uint(key, value);
    } else if (key == "max_bit_errors") {
        cfg.max_bit_errors = parse_uint(key, value);
    } else if (key == "max_bits") {
        cfg.max_bits = parse_uint(key, value);
    } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "spreading") {
        cfg.spreading = parse_bool(key, value);
    } else if (key == "fec") {
        cfg.fec = parse_bool(key, value);
    } else if (key == "stbc") {
        cfg.stbc = parse_bool(key, value);
    } else if (key == "noise") {
        cfg.noise = parse_bool(key, value);
    } else if (key == "n_rx") {
        cfg.n_rx = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "snr_reference") {
        cfg.snr_reference = parse_reference(key, value);
    } else if (key == "cond_cap") {
        cfg.cond_cap = parse_double(key, value);
    } else if (key == "gain_reference") {
        cfg.gain_reference = parse_mod(key, value);
    } else if (key == "gain_snr_db") {
        cfg.gain_snr_db = parse_double(key, value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

SimConfig parse_config_text(std::string_view text, SimConfig base) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

SimConfig load_config_file(const std::filesystem::path& path, SimConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), std::move(base));
}

std::string ber_csv(const std::vector<BerRecord>& table) {
    std::string out = "modulation,snr_db,bits,errors,ber,ci95\n";
    for (const auto& r : table) {
        out += std::string(to_string(r.modulation)) + ',' + format_double(r.snr_db) + ',' +
               std::to_string(r.bits) + ',' + std::to_string(r.errors) + ',' + format_double(r.ber) +
               ',' + format_double(r.ci95) + '\n';
    }
    return out;
}

std::string gain_csv(const std::vector<GainRecord>& gains) {
    std::string out = "modulation,reference,at_snr_db,gain_db,flag\n";
    for (const auto& g : gains) {
        out += std::string(to_string(g.modulation)) + ',' + std::string(to_string(g.reference)) + ',' +
               format_double(g.at_snr_db) + ',' + format_double(g.gain_db) + ',' +
               (g.extrapolation_required ? "extrapolation_required" : "ok") + '\n';
    }
    return out;
}

std::string version_string() { return MIMOCDMA_VERSION; }

std::string manifest_json(const SimConfig& cfg, const std::vector<BerRecord>& table,
                          double wall_time_s) {
    json j;
    j["version"] = version_string();
    j["seed"] = cfg.seed;
    j["wall_time_s"] = wall_time_s;
    j["config"] = config_to_json(cfg);
    j["points"] = json::array();
    for (const auto& r : table) {
        j["points"].push_back({{"modulation", std::string(to_string(r.modulation))},
                               {"snr_db", r.snr_db},
                               {"bits", r.bits},
                               {"errors", r.errors},
                               {"frames", r.frames},
                               {"singular_redraws", r.singular_redraws}});
    }
    return j.dump(2) + '\n';
}

SimConfig config_from_manifest(std::string_view json_text) {
    try {
        return config_from_json(json::parse(json_text).at("config"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

EmittedFiles emit_results(const SimConfig& cfg, const std::vector<BerRecord>& table,
                          const std::vector<GainRecord>& gains, const std::filesystem::path& dir,
                          double wall_time_s) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string());
    EmittedFiles files{dir / "ber.csv", dir / "gains.csv", dir / "manifest.json"};
    write_file(files.ber_csv, ber_csv(table));
    write_file(files.gain_csv, gain_csv(gains));
    write_file(files.manifest, manifest_json(cfg, table, wall_time_s));
    return files;
}

std::string constellation_fixture() {
    std::string out = "scheme,label,real,imag\n";
    for (auto m : kAllModulations) {
        const auto& c = Constellation::get(m);
        for (std::uint32_t label = 0; label < c.size(); ++label) {
            BitStream bits;
            append_label_bits(label, c.bits_per_symbol(), bits);
            std::string lbl;
            for (auto b : bits) lbl += static_cast<char>('0' + b);
            const cd p = c.points()[label];
            out += std::string(to_string(m)) + ',' + lbl + ',' + format_double(p.real()) + ',' +
                   format_double(p.imag()) + '\n';
        }
    }
    return out;
}

}  // namespace mimocdma
