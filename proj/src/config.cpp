#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace msar::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

const std::map<std::string, double>& suffix_table(Dimension dim) {
    static const std::map<std::string, double> freq{
        {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
    static const std::map<std::string, double> time{
        {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
    static const std::map<std::string, double> length{
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}};
    static const std::map<std::string, double> speed{{"m/s", 1.0}};
    static const std::map<std::string, double> none{};
    switch (dim) {
        case Dimension::frequency: return freq;
        case Dimension::time: return time;
        case Dimension::length: return length;
        case Dimension::speed: return speed;
        case Dimension::none: return none;
    }
    return none;
}

}  // namespace

double parse_quantity(const std::string& text, Dimension dim, const std::string& key) {
    std::string t = trim(text);
    if (t.empty()) throw_config(key + ": empty value");
    size_t pos = 0;
    double value;
    try {
        value = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw_config(key + ": cannot parse number from '" + t + "'");
    }
    std::string suffix = trim(t.substr(pos));
    if (dim == Dimension::none) {
        if (!suffix.empty()) throw_config(key + ": unexpected unit suffix '" + suffix + "'");
        return value;
    }
    const auto& table = suffix_table(dim);
    auto it = table.find(suffix);
    if (it == table.end()) {
        std::string expected;
        for (const auto& [name, unused] : table) {
            (void)unused;
            if (!expected.empty()) expected += "|";
            expected += name;
        }
        throw_config(key + ": value '" + t + "' needs an explicit unit (" + expected + ")");
    }
    return value * it->second;
}

bool parse_bool(const std::string& text, const std::string& key) {
    std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    throw_config(key + ": expected a boolean, got '" + t + "'");
}

RunConfig RunConfig::parse(std::istream& in, const std::string& origin) {
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw_config(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw_config(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw_config(origin + ":" + std::to_string(lineno) + ": key '" + key + "' outside any [section]");
        cfg.set(section + "." + key, value);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("config: cannot open " + path);
    RunConfig cfg = parse(in, path);
    cfg.base_dir = std::filesystem::path(path).parent_path().string();
    return cfg;
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
    auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw_config("config key '" + dotted_key + "' must be section.key");
    std::string section = dotted_key.substr(0, dot);
    std::string key = dotted_key.substr(dot + 1);
    const std::string& k = dotted_key;

    if (section == "chirp") {
        if (key == "f0") chirp.f0 = parse_quantity(value, Dimension::frequency, k);
        else if (key == "b") chirp.b = parse_quantity(value, Dimension::frequency, k);
        else if (key == "T") chirp.T = parse_quantity(value, Dimension::time, k);
        else if (key == "fs") chirp.fs = parse_quantity(value, Dimension::frequency, k);
        else if (key == "n_samples") chirp.n_samples = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "c") chirp.c = parse_quantity(value, Dimension::speed, k);
        else throw_config("unknown config key " + k);
    } else if (section == "geometry") {
        if (key == "layout") layout_file = value;
        else if (key == "tdm") tdm = value;
        else if (key == "dedupe") dedupe = parse_bool(value, k);
        else if (key == "dedupe_tol") dedupe_tol = value == "auto" ? -1.0 : parse_quantity(value, Dimension::length, k);
        else throw_config("unknown config key " + k);
    } else if (section == "scan") {
        if (key == "x_count") scan_x_count = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "x_step") scan_x_step = parse_quantity(value, Dimension::length, k);
        else if (key == "y_count") scan_y_count = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "y_step") scan_y_step = parse_quantity(value, Dimension::length, k);
        else throw_config("unknown config key " + k);
    } else if (section == "scene") {
        if (key == "file") scene_file = value;
        else throw_config("unknown config key " + k);
    } else if (section == "errors") {
        if (key == "enabled") errors.enabled = parse_bool(value, k);
        else if (key == "seed") errors.seed = static_cast<uint64_t>(parse_quantity(value, Dimension::none, k));
        else if (key == "gain_min") errors.gain_min = parse_quantity(value, Dimension::none, k);
        else if (key == "gain_max") errors.gain_max = parse_quantity(value, Dimension::none, k);
        else if (key == "phase_max_rad") errors.phase_max_rad = parse_quantity(value, Dimension::none, k);
        else if (key == "range_bins_max") errors.range_bins_max = parse_quantity(value, Dimension::none, k);
        else if (key == "reference_clean") errors.reference_clean = parse_bool(value, k);
        else if (key == "file") errors.file = value;
        else throw_config("unknown config key " + k);
    } else if (section == "nonlinearity") {
        if (key == "file") nonlin_file = value;
        else throw_config("unknown config key " + k);
    } else if (section == "noise") {
        if (key == "enabled") noise_enabled = parse_bool(value, k);
        else if (key == "snr_db") noise_snr_db = parse_quantity(value, Dimension::none, k);
        else throw_config("unknown config key " + k);
    } else if (section == "calibration") {
        if (key == "reflector") {
            auto parts = split(value, ',');
            if (parts.size() != 3) throw_config(k + ": expected `x, y, z` with length units");
            for (int i = 0; i < 3; ++i)
                cal_reflector[static_cast<size_t>(i)] = parse_quantity(parts[static_cast<size_t>(i)], Dimension::length, k);
        } else if (key == "reference") cal_reference = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "azimuth_index") cal_azimuth = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "peak_bin") cal_peak_bin = value == "auto" ? -1 : static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "model_phase_division") cal_model_division = parse_bool(value, k);
        else if (key == "fractional") cal_fractional = parse_bool(value, k);
        else if (key == "residual_weights") cal_weights = parse_bool(value, k);
        else if (key == "angle_count") cal_angle_count = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else throw_config("unknown config key " + k);
    } else if (section == "imaging") {
        if (key == "algorithm") {
            if (value != "rma" && value != "bp") throw_config(k + ": expected rma|bp");
            algorithm = value;
        } else if (key == "z_planes") {
            z_planes.clear();
            for (const auto& part : split(value, ','))
                z_planes.push_back(parse_quantity(part, Dimension::length, k));
        } else if (key == "window") window = rangeproc::window_from_name(value);
        else if (key == "n_fft") n_fft = value == "auto" ? 0 : static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "pad_factor") pad_factor = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "bin_window") bin_window = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else if (key == "phase_model") {
            if (value == "exact") phase_model = geom::PhaseModel::exact;
            else if (value == "quadratic") phase_model = geom::PhaseModel::quadratic;
            else throw_config(k + ": expected exact|quadratic");
        } else if (key == "z_ref") z_ref = value == "auto" ? -1.0 : parse_quantity(value, Dimension::length, k);
        else throw_config("unknown config key " + k);
    } else if (section == "output") {
        if (key == "dir") output_dir = value;
        else if (key == "seed") seed = static_cast<uint64_t>(parse_quantity(value, Dimension::none, k));
        else if (key == "threads") threads = static_cast<int>(parse_quantity(value, Dimension::none, k));
        else throw_config("unknown config key " + k);
    } else {
        throw_config("unknown config section [" + section + "]");
    }
}

std::string RunConfig::resolve_path(const std::string& p) const {
    if (p.empty() || base_dir.empty()) return p;
    std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (std::filesystem::path(base_dir) / fp).string();
}

geom::AntennaLayout RunConfig::load_layout() const {
    if (layout_file.empty()) throw_config("config: geometry.layout is not set");
    return geom::AntennaLayout::load(resolve_path(layout_file));
}

geom::TdmOrder RunConfig::tdm_order(const geom::AntennaLayout& layout) const {
    if (tdm == "full")
        return geom::full_tdm(static_cast<int>(layout.tx.size()), static_cast<int>(layout.rx.size()));
    geom::TdmOrder order;
    for (const auto& pair : split(tdm, ',')) {
        auto colon = pair.find(':');
        if (colon == std::string::npos)
            throw_config("geometry.tdm: expected `tx:rx` pairs, got '" + pair + "'");
        order.emplace_back(std::stoi(pair.substr(0, colon)), std::stoi(pair.substr(colon + 1)));
    }
    if (order.empty()) throw_config("geometry.tdm: empty order");
    return order;
}

double RunConfig::dedupe_tolerance() const {
    if (dedupe_tol >= 0.0) return dedupe_tol;
    return chirp.lambda_center() / 100.0;
}

std::vector<geom::VirtualElement> RunConfig::build_elements(const geom::AntennaLayout& layout) const {
    auto elements = geom::virtual_elements(layout, tdm_order(layout));
    if (dedupe) elements = geom::dedupe_elements(elements, dedupe_tolerance());
    return elements;
}

geom::ApertureScan RunConfig::scan() const {
    return geom::ApertureScan::make(scan_x_count, scan_x_step, scan_y_count, scan_y_step);
}

sim::Scene RunConfig::load_scene() const {
    if (scene_file.empty()) throw_config("config: scene.file is not set");
    return sim::Scene::load(resolve_path(scene_file));
}

double RunConfig::default_bin_scale() const {
    int nf = n_fft > 0 ? n_fft : rangeproc::default_n_fft(chirp.n_samples);
    return chirp.c / (2.0 * chirp.b) * static_cast<double>(chirp.n_samples) / nf;
}

sim::ChannelError RunConfig::draw_errors(int n_chan, double bin_scale_m) const {
    sim::ChannelError err;
    err.gain.assign(static_cast<size_t>(n_chan), cdouble{1.0, 0.0});
    err.range_m.assign(static_cast<size_t>(n_chan), 0.0);
    if (!errors.file.empty()) {
        std::ifstream in(resolve_path(errors.file));
        if (!in) throw_io("errors: cannot open " + errors.file);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            int l;
            double re, im, r;
            if (!(ls >> l)) continue;
            if (!(ls >> re >> im >> r))
                throw_config(errors.file + ":" + std::to_string(lineno) + ": expected `l re(g) im(g) R_m`");
            if (l < 0 || l >= n_chan)
                throw_config(errors.file + ":" + std::to_string(lineno) + ": channel out of range");
            err.gain[static_cast<size_t>(l)] = {re, im};
            err.range_m[static_cast<size_t>(l)] = r;
        }
    } else {
        for (int l = 0; l < n_chan; ++l) {
            double mag = errors.gain_min +
                         (errors.gain_max - errors.gain_min) * uniform01(errors.seed, static_cast<uint64_t>(l), 1);
            double ph = errors.phase_max_rad * (2.0 * uniform01(errors.seed, static_cast<uint64_t>(l), 2) - 1.0);
            double rng = errors.range_bins_max * bin_scale_m *
                         (2.0 * uniform01(errors.seed, static_cast<uint64_t>(l), 3) - 1.0);
            err.gain[static_cast<size_t>(l)] = std::polar(mag, ph);
            err.range_m[static_cast<size_t>(l)] = rng;
        }
    }
    if (errors.reference_clean && cal_reference >= 0 && cal_reference < n_chan) {
        err.gain[static_cast<size_t>(cal_reference)] = {1.0, 0.0};
        err.range_m[static_cast<size_t>(cal_reference)] = 0.0;
    }
    return err;
}

sim::NonlinearityModel RunConfig::load_nonlinearity(int n_chan) const {
    sim::NonlinearityModel model;
    model.coeffs.assign(static_cast<size_t>(n_chan), {});
    if (nonlin_file.empty()) return model;
    std::ifstream in(resolve_path(nonlin_file));
    if (!in) throw_io("nonlinearity: cannot open " + nonlin_file);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int l;
        if (!(ls >> l)) continue;
        if (l < 0 || l >= n_chan)
            throw_config(nonlin_file + ":" + std::to_string(lineno) + ": channel out of range");
        std::array<double, sim::NonlinearityModel::kMaxDegree + 1> c{};
        for (double& ci : c)
            if (!(ls >> ci)) break;
        model.coeffs[static_cast<size_t>(l)] = c;
    }
    return model;
}

}  // namespace msar::config
