#include "wavesim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace msar::sim {

void ChirpConfig::validate() const {
    if (!(b > 0.0)) throw_config("chirp: bandwidth must be positive");
    if (!(T > 0.0)) throw_config("chirp: chirp time must be positive");
    if (!(fs > 0.0)) throw_config("chirp: sampling rate must be positive");
    if (!(f0 > 0.0)) throw_config("chirp: start frequency must be positive");
    if (!(c > 0.0)) throw_config("chirp: speed of light must be positive");
    if (n_samples < 1) throw_config("chirp: n_samples must be positive");
    if (n_samples > static_cast<int>(std::floor(fs * T)))
        throw_config("chirp: n_samples exceeds floor(fs*T) = " +
                     std::to_string(static_cast<long long>(std::floor(fs * T))));
}

uint64_t ChirpConfig::hash() const {
    Fnv1a h;
    h.update_f64(f0);
    h.update_f64(b);
    h.update_f64(T);
    h.update_f64(fs);
    h.update_u64(static_cast<uint64_t>(n_samples));
    h.update_f64(c);
    return h.digest();
}

std::vector<double> wavenumber_grid(const ChirpConfig& chirp) {
    chirp.validate();
    std::vector<double> k(static_cast<size_t>(chirp.n_samples));
    const double beta = chirp.slope();
    for (int n = 0; n < chirp.n_samples; ++n)
        k[static_cast<size_t>(n)] = kTwoPi / chirp.c * (chirp.f0 + beta * n / chirp.fs);
    return k;
}

void Scene::validate() const {
    for (const auto& r : reflectors) {
        if (!(r.z > 0.0)) throw_domain("scene: reflector depth z must be positive");
        if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z) ||
            !std::isfinite(r.p.real()) || !std::isfinite(r.p.imag()))
            throw_domain("scene: non-finite reflector");
    }
}

Scene Scene::parse(std::istream& in, const std::string& origin) {
    Scene scene;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Reflector r;
        double re, im;
        if (!(ls >> r.x)) continue;
        if (!(ls >> r.y >> r.z >> re >> im))
            throw_config(origin + ":" + std::to_string(lineno) + ": expected `x_m y_m z_m re(p) im(p)`");
        r.p = {re, im};
        scene.reflectors.push_back(r);
    }
    scene.validate();
    return scene;
}

Scene Scene::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("scene: cannot open " + path);
    return parse(in, path);
}

void ChannelError::validate() const {
    if (gain.size() != range_m.size()) throw_config("channel errors: gain/range length mismatch");
    for (const auto& g : gain)
        if (!(std::abs(g) > 0.0)) throw_config("channel errors: |g_l| must be positive");
    for (double r : range_m)
        if (!std::isfinite(r)) throw_config("channel errors: R_l must be finite");
}

bool NonlinearityModel::is_zero() const {
    for (const auto& ch : coeffs)
        for (double c : ch)
            if (c != 0.0) return false;
    return true;
}

double NonlinearityModel::phase_at(size_t channel, double t) const {
    const auto& c = coeffs.at(channel);
    // Horner, degree 4.
    return (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0];
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::raw: return "raw";
        case Stage::nonlin_compensated: return "nonlin_compensated";
        case Stage::range_compressed: return "range_compressed";
        case Stage::aligned: return "aligned";
        case Stage::calibrated: return "calibrated";
    }
    return "unknown";
}

uint64_t CubeAxes::hash() const {
    Fnv1a h;
    h.update_u64(rows.size());
    for (const auto& r : rows) {
        h.update_u64(static_cast<uint64_t>(r.element_id));
        h.update_f64(r.tx.x);
        h.update_f64(r.tx.y);
        h.update_f64(r.rx.x);
        h.update_f64(r.rx.y);
    }
    h.update_u64(azimuth_x.size());
    for (double x : azimuth_x) h.update_f64(x);
    return h.digest();
}

CubeAxes build_cube_axes(const std::vector<geom::VirtualElement>& elements,
                         const geom::AntennaLayout& layout, const geom::ApertureScan& scan) {
    layout.validate();
    if (elements.empty()) throw_config("cube axes: element list is empty");
    CubeAxes axes;
    axes.azimuth_x = scan.x_positions;
    axes.x_step = scan.x_step;
    axes.rows.reserve(elements.size() * scan.y_positions.size());
    for (double ys : scan.y_positions) {
        for (const auto& e : elements) {
            const geom::Vec2& pt = layout.tx.at(static_cast<size_t>(e.tx_index));
            const geom::Vec2& pr = layout.rx.at(static_cast<size_t>(e.rx_index));
            ChannelGeom row;
            row.element_id = e.channel_id;
            row.tx = {pt.x, pt.y + ys};
            row.rx = {pr.x, pr.y + ys};
            row.midpoint = {e.midpoint.x, e.midpoint.y + ys};
            row.separation = e.separation;
            axes.rows.push_back(row);
        }
    }
    return axes;
}

void DataCube::require_dims_match(const ChannelError& err) const {
    if (static_cast<int>(err.channels()) != n_chan)
        throw_config("channel errors: " + std::to_string(err.channels()) +
                     " channels, cube has " + std::to_string(n_chan));
}

DataCube simulate_beat(const Scene& scene, const std::vector<geom::VirtualElement>& elements,
                       const geom::AntennaLayout& layout, const geom::ApertureScan& scan,
                       const ChirpConfig& chirp, const SimulateOptions& opts) {
    chirp.validate();
    scene.validate();

    DataCube cube;
    cube.chirp = chirp;
    cube.axes = build_cube_axes(elements, layout, scan);
    cube.n_fast = chirp.n_samples;
    cube.n_chan = static_cast<int>(cube.axes.rows.size());
    cube.n_az = static_cast<int>(cube.axes.azimuth_x.size());
    cube.stage = Stage::raw;
    cube.samples.assign(static_cast<size_t>(cube.n_fast) * cube.n_chan * cube.n_az, cdouble{});

    const std::vector<double> k = wavenumber_grid(chirp);

    // Each (channel, azimuth) cell is owned by exactly one iteration, so the
    // result is deterministic under any schedule.
#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < cube.n_az; ++a) {
        for (int l = 0; l < cube.n_chan; ++l) {
            const ChannelGeom& row = cube.axes.rows[static_cast<size_t>(l)];
            const double xs = cube.axes.azimuth_x[static_cast<size_t>(a)];
            cdouble* cell = &cube.samples[cube.idx(0, l, a)];
            for (const auto& refl : scene.reflectors) {
                const double txx = row.tx.x + xs - refl.x, txy = row.tx.y - refl.y;
                const double rxx = row.rx.x + xs - refl.x, rxy = row.rx.y - refl.y;
                const double dtx = std::sqrt(txx * txx + txy * txy + refl.z * refl.z);
                const double drx = std::sqrt(rxx * rxx + rxy * rxy + refl.z * refl.z);
                const double path = dtx + drx;
                // exp(-j*k_n*path) advances by a constant rotation per sample;
                // recurrence avoids n_fast complex exponentials per reflector.
                const double dphase = -(k.size() > 1 ? (k[1] - k[0]) : 0.0) * path;
                const cdouble step{std::cos(dphase), std::sin(dphase)};
                cdouble ph = std::polar(1.0, -k[0] * path);
                for (int n = 0; n < cube.n_fast; ++n) {
                    cell[n] += refl.p * ph;
                    ph *= step;
                }
            }
            if (opts.noise_snr_db) {
                // Unit-reflector reference power; per-cell counter-based draws.
                double snr = std::pow(10.0, *opts.noise_snr_db / 10.0);
                double sigma = std::sqrt(1.0 / (2.0 * snr));
                uint64_t cellbase = (static_cast<uint64_t>(a) * static_cast<uint64_t>(cube.n_chan) + static_cast<uint64_t>(l))
                                    * static_cast<uint64_t>(cube.n_fast);
                for (int n = 0; n < cube.n_fast; ++n) {
                    auto [gre, gim] = gaussian_pair(opts.seed, cellbase + static_cast<uint64_t>(n), 0x6e6f6973);
                    cell[n] += cdouble{sigma * gre, sigma * gim};
                }
            }
        }
    }
    return cube;
}

DataCube inject_channel_errors(const DataCube& cube, const ChannelError& errors) {
    if (cube.stage != Stage::raw)
        throw_config("inject_channel_errors: cube stage must be raw, got " + std::string(stage_name(cube.stage)));
    errors.validate();
    cube.require_dims_match(errors);

    DataCube out = cube;
    const std::vector<double> k = wavenumber_grid(cube.chirp);
#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < out.n_az; ++a) {
        for (int l = 0; l < out.n_chan; ++l) {
            const cdouble g = errors.gain[static_cast<size_t>(l)];
            const double R = errors.range_m[static_cast<size_t>(l)];
            cdouble* cell = &out.samples[out.idx(0, l, a)];
            for (int n = 0; n < out.n_fast; ++n)
                cell[n] *= g * std::polar(1.0, -2.0 * k[static_cast<size_t>(n)] * R);
        }
    }
    return out;
}

DataCube inject_nonlinearity(const DataCube& cube, const NonlinearityModel& model) {
    if (cube.stage != Stage::raw)
        throw_config("inject_nonlinearity: cube stage must be raw, got " + std::string(stage_name(cube.stage)));
    if (model.channels() != static_cast<size_t>(cube.n_chan))
        throw_config("nonlinearity model: channel count mismatch");

    DataCube out = cube;
#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < out.n_az; ++a) {
        for (int l = 0; l < out.n_chan; ++l) {
            cdouble* cell = &out.samples[out.idx(0, l, a)];
            for (int n = 0; n < out.n_fast; ++n) {
                double t = n / cube.chirp.fs;
                cell[n] *= std::polar(1.0, model.phase_at(static_cast<size_t>(l), t));
            }
        }
    }
    return out;
}

}  // namespace msar::sim
