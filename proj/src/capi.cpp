// extern-C layer: marshals between the public opaque handles and the core
// types, converts exceptions into status codes + a thread-local message.

#include "mimosar/mimosar.h"

#include <string>
#include <variant>

#include "pipeline.hpp"
#include "render.hpp"

using namespace msar;

struct msar_config {
    config::RunConfig cfg;
};

struct msar_cube {
    std::variant<sim::DataCube, rangeproc::RangeProfileSet> data;

    bool is_profiles() const { return std::holds_alternative<rangeproc::RangeProfileSet>(data); }
    const sim::DataCube& cube() const {
        if (is_profiles()) throw_config("operation requires a fast-time cube, got range profiles");
        return std::get<sim::DataCube>(data);
    }
    const rangeproc::RangeProfileSet& profiles() const {
        if (!is_profiles()) throw_config("operation requires range profiles, got a fast-time cube");
        return std::get<rangeproc::RangeProfileSet>(data);
    }
};

struct msar_cal {
    calib::CalibrationProfile profile;
};

struct msar_volume {
    imaging::ImageVolume vol;
};

namespace {

thread_local std::string g_last_error;

msar_status to_status(const Error& e) {
    g_last_error = e.what();
    switch (e.kind()) {
        case ErrorKind::runtime: return MSAR_ERR_RUNTIME;
        case ErrorKind::config: return MSAR_ERR_CONFIG;
        case ErrorKind::calibration: return MSAR_ERR_CALIBRATION;
        case ErrorKind::analysis: return MSAR_ERR_ANALYSIS;
        case ErrorKind::domain: return MSAR_ERR_DOMAIN;
        case ErrorKind::io: return MSAR_ERR_IO;
    }
    return MSAR_ERR_RUNTIME;
}

template <typename Fn>
msar_status guarded(Fn&& fn) {
    try {
        fn();
        return MSAR_OK;
    } catch (const Error& e) {
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MSAR_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return MSAR_ERR_RUNTIME;
    }
}

msar_status require(bool cond, const char* msg) {
    if (cond) return MSAR_OK;
    g_last_error = msg;
    return MSAR_ERR_CONFIG;
}

}  // namespace

extern "C" {

const char* msar_last_error(void) { return g_last_error.c_str(); }

const char* msar_version(void) { return "mimosar 1.0.0"; }

void msar_set_threads(int n) { pipeline::set_threads(n); }

msar_status msar_config_load(const char* path, msar_config** out) {
    if (msar_status s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new msar_config{config::RunConfig::load(path)}; });
}

msar_status msar_config_set(msar_config* cfg, const char* key, const char* value) {
    if (msar_status s = require(cfg && key && value, "null argument")) return s;
    return guarded([&] { cfg->cfg.set(key, value); });
}

void msar_config_free(msar_config* cfg) { delete cfg; }

msar_status msar_simulate(const msar_config* cfg, msar_cube** out) {
    if (msar_status s = require(cfg && out, "null argument")) return s;
    return guarded([&] { *out = new msar_cube{pipeline::simulate(cfg->cfg)}; });
}

msar_status msar_cube_load(const msar_config* cfg, const char* path, msar_cube** out) {
    if (msar_status s = require(cfg && path && out, "null argument")) return s;
    return guarded([&] {
        auto loaded = io::load_cube_any(path, io::CubeContext::from_config(cfg->cfg));
        if (loaded.cube)
            *out = new msar_cube{std::move(*loaded.cube)};
        else
            *out = new msar_cube{std::move(*loaded.profiles)};
    });
}

msar_status msar_cube_save(const msar_cube* cube, const char* path) {
    if (msar_status s = require(cube && path, "null argument")) return s;
    return guarded([&] {
        if (cube->is_profiles())
            io::save_profiles(cube->profiles(), path);
        else
            io::save_cube(cube->cube(), path);
    });
}

int msar_cube_stage(const msar_cube* cube) {
    if (!cube) return -1;
    return cube->is_profiles() ? static_cast<int>(cube->profiles().stage)
                               : static_cast<int>(cube->cube().stage);
}

msar_status msar_cube_dims(const msar_cube* cube, uint64_t* n_fast, uint64_t* n_chan, uint64_t* n_az) {
    if (msar_status s = require(cube && n_fast && n_chan && n_az, "null argument")) return s;
    return guarded([&] {
        if (cube->is_profiles()) {
            const auto& p = cube->profiles();
            *n_fast = static_cast<uint64_t>(p.n_bins);
            *n_chan = static_cast<uint64_t>(p.n_chan);
            *n_az = static_cast<uint64_t>(p.n_az);
        } else {
            const auto& c = cube->cube();
            *n_fast = static_cast<uint64_t>(c.n_fast);
            *n_chan = static_cast<uint64_t>(c.n_chan);
            *n_az = static_cast<uint64_t>(c.n_az);
        }
    });
}

void msar_cube_free(msar_cube* cube) { delete cube; }

msar_status msar_compensate_nonlinearity(const msar_config* cfg, const msar_cube* in, msar_cube** out) {
    if (msar_status s = require(cfg && in && out, "null argument")) return s;
    return guarded([&] { *out = new msar_cube{pipeline::compensate(cfg->cfg, in->cube())}; });
}

msar_status msar_range_compress(const msar_config* cfg, const msar_cube* in, msar_cube** out) {
    if (msar_status s = require(cfg && in && out, "null argument")) return s;
    return guarded([&] { *out = new msar_cube{pipeline::compress(cfg->cfg, in->cube())}; });
}

msar_status msar_range_align(const msar_config* cfg, const msar_cube* in, msar_cube** out,
                             double* shifts) {
    if (msar_status s = require(cfg && in && out, "null argument")) return s;
    return guarded([&] {
        auto [aligned, report] = pipeline::align(cfg->cfg, in->profiles());
        if (shifts)
            for (size_t l = 0; l < report.shift_bins.size(); ++l) shifts[l] = report.shift_bins[l];
        *out = new msar_cube{std::move(aligned)};
    });
}

msar_status msar_calibrate(const msar_config* cfg, const msar_cube* cube, msar_cal** out) {
    if (msar_status s = require(cfg && cube && out, "null argument")) return s;
    return guarded([&] { *out = new msar_cal{pipeline::calibrate(cfg->cfg, cube->cube())}; });
}

msar_status msar_apply_calibration(const msar_cal* cal, const msar_cube* in, msar_cube** out) {
    if (msar_status s = require(cal && in && out, "null argument")) return s;
    return guarded([&] {
        if (in->is_profiles())
            *out = new msar_cube{calib::apply_calibration(in->profiles(), cal->profile)};
        else
            *out = new msar_cube{calib::apply_calibration(in->cube(), cal->profile)};
    });
}

msar_status msar_cal_load(const char* path, msar_cal** out) {
    if (msar_status s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new msar_cal{io::load_profile(path)}; });
}

msar_status msar_cal_save(const msar_cal* cal, const char* path) {
    if (msar_status s = require(cal && path, "null argument")) return s;
    return guarded([&] { io::save_profile(cal->profile, path); });
}

void msar_cal_free(msar_cal* cal) { delete cal; }

msar_status msar_reconstruct(const msar_config* cfg, const msar_cube* cube, const msar_cal* cal,
                             msar_volume** out) {
    if (msar_status s = require(cfg && cube && out, "null argument")) return s;
    return guarded([&] {
        *out = new msar_volume{pipeline::reconstruct(cfg->cfg, cube->cube(),
                                                     cal ? &cal->profile : nullptr)};
    });
}

msar_status msar_volume_load(const char* path, msar_volume** out) {
    if (msar_status s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new msar_volume{io::load_volume(path)}; });
}

msar_status msar_volume_save(const msar_volume* vol, const char* path) {
    if (msar_status s = require(vol && path, "null argument")) return s;
    return guarded([&] { io::save_volume(vol->vol, path); });
}

msar_status msar_volume_dims(const msar_volume* vol, uint64_t* nx, uint64_t* ny, uint64_t* nz) {
    if (msar_status s = require(vol && nx && ny && nz, "null argument")) return s;
    *nx = static_cast<uint64_t>(vol->vol.nx);
    *ny = static_cast<uint64_t>(vol->vol.ny);
    *nz = vol->vol.z_planes.size();
    return MSAR_OK;
}

void msar_volume_free(msar_volume* vol) { delete vol; }

msar_status msar_volume_ipr(const msar_volume* vol, int plane_index, msar_ipr_report* out) {
    if (msar_status s = require(vol && out, "null argument")) return s;
    return guarded([&] {
        const auto& v = vol->vol;
        if (plane_index < 0 || plane_index >= static_cast<int>(v.z_planes.size()))
            throw_config("plane index out of range");
        auto rep = imaging::ipr_metrics_plane(v.plane_magnitude(plane_index), v.nx, v.ny, v.dx, v.dy);
        out->peak_pos_x_m = v.x0 + rep.peak_pos_x;
        out->peak_pos_y_m = v.y0 + rep.peak_pos_y;
        out->peak_magnitude = rep.peak_mag;
        out->width3db_x_m = rep.width3db_x;
        out->width3db_y_m = rep.width3db_y;
        out->pslr_db = rep.pslr_db;
        out->islr_db = rep.islr_db;
    });
}

msar_status msar_profiles_range_ipr(const msar_cube* profiles, int channel, int azimuth,
                                    msar_ipr_report* out) {
    if (msar_status s = require(profiles && out, "null argument")) return s;
    return guarded([&] {
        const auto& p = profiles->profiles();
        if (channel < 0 || channel >= p.n_chan || azimuth < 0 || azimuth >= p.n_az)
            throw_config("channel/azimuth index out of range");
        std::vector<double> mag(static_cast<size_t>(p.n_bins));
        for (int m = 0; m < p.n_bins; ++m) mag[static_cast<size_t>(m)] = std::abs(p.at(m, channel, azimuth));
        auto rep = imaging::ipr_metrics_1d(mag, p.bin_scale_m);
        out->peak_pos_x_m = rep.peak_pos_x;
        out->peak_pos_y_m = 0.0;
        out->peak_magnitude = rep.peak_mag;
        out->width3db_x_m = rep.width3db_x;
        out->width3db_y_m = 0.0;
        out->pslr_db = rep.pslr_db;
        out->islr_db = rep.islr_db;
    });
}

msar_status msar_spectrogram_csv(const msar_cube* cube, int channel, int azimuth, int window_len,
                                 int hop, const char* path) {
    if (msar_status s = require(cube && path, "null argument")) return s;
    return guarded([&] {
        auto sg = rangeproc::spectrogram(cube->cube(), channel, azimuth, window_len, hop);
        render::spectrogram_csv(sg, path);
    });
}

msar_status msar_power_spectrum_csv(const msar_cube* cube, int channel, int azimuth, const char* path) {
    if (msar_status s = require(cube && path, "null argument")) return s;
    return guarded([&] {
        auto ps = rangeproc::power_spectrum(cube->cube(), channel, azimuth);
        render::power_spectrum_csv(ps, path);
    });
}

msar_status msar_range_profile_csv(const msar_cube* profiles, int channel, int azimuth,
                                   const char* path) {
    if (msar_status s = require(profiles && path, "null argument")) return s;
    return guarded([&] { render::range_profile_csv(profiles->profiles(), channel, azimuth, path); });
}

msar_status msar_volume_render_pgm(const msar_volume* vol, int plane_index, double dyn_range_db,
                                   const char* path) {
    if (msar_status s = require(vol && path, "null argument")) return s;
    return guarded([&] { render::volume_plane_pgm(vol->vol, plane_index, path, dyn_range_db); });
}

msar_status msar_volume_peak_cuts_csv(const msar_volume* vol, int plane_index, const char* x_path,
                                      const char* y_path) {
    if (msar_status s = require(vol && x_path && y_path, "null argument")) return s;
    return guarded([&] { render::volume_peak_cuts_csv(vol->vol, plane_index, x_path, y_path); });
}

}  // extern "C"
