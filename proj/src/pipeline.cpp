#include "pipeline.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace msar::pipeline {

sim::DataCube simulate(const config::RunConfig& cfg) {
    cfg.chirp.validate();
    auto layout = cfg.load_layout();
    auto elements = cfg.build_elements(layout);
    auto scan = cfg.scan();
    sim::Scene scene = cfg.load_scene();

    sim::SimulateOptions opts;
    opts.seed = cfg.seed;
    if (cfg.noise_enabled) opts.noise_snr_db = cfg.noise_snr_db;

    sim::DataCube cube = sim::simulate_beat(scene, elements, layout, scan, cfg.chirp, opts);
    if (!cfg.nonlin_file.empty())
        cube = sim::inject_nonlinearity(cube, cfg.load_nonlinearity(cube.n_chan));
    if (cfg.errors.enabled)
        cube = sim::inject_channel_errors(cube, cfg.draw_errors(cube.n_chan, cfg.default_bin_scale()));
    return cube;
}

sim::DataCube compensate(const config::RunConfig& cfg, const sim::DataCube& cube) {
    return rangeproc::compensate_nonlinearity(cube, cfg.load_nonlinearity(cube.n_chan));
}

rangeproc::RangeProfileSet compress(const config::RunConfig& cfg, const sim::DataCube& cube) {
    return rangeproc::range_compress(cube, cfg.n_fft, cfg.window);
}

std::pair<rangeproc::RangeProfileSet, rangeproc::AlignmentReport> align(
    const config::RunConfig& cfg, const rangeproc::RangeProfileSet& profiles) {
    return rangeproc::range_align(profiles, cfg.cal_reference, cfg.cal_fractional);
}

calib::CalibrationProfile calibrate(const config::RunConfig& cfg, const sim::DataCube& cube) {
    sim::DataCube work = cube;
    if (!cfg.nonlin_file.empty() && work.stage == sim::Stage::raw) work = compensate(cfg, work);
    auto profiles = compress(cfg, work);
    auto [aligned, report] = align(cfg, profiles);

    calib::EstimateOptions opts;
    opts.reference = cfg.cal_reference;
    opts.azimuth_index = cfg.cal_azimuth;
    opts.peak_bin = cfg.cal_peak_bin;
    opts.model_phase_division = cfg.cal_model_division;
    opts.reflector = cfg.cal_reflector;
    calib::CalibrationProfile profile = calib::estimate_phase_gain(aligned, report, opts);

    if (cfg.cal_weights) {
        auto calibrated = calib::apply_calibration(aligned, profile);
        int az = cfg.cal_azimuth >= 0 ? cfg.cal_azimuth : calibrated.n_az / 2;
        int bin = cfg.cal_peak_bin;
        if (bin < 0) {
            bin = 0;
            double best = -1.0;
            for (int m = 0; m < calibrated.n_bins; ++m) {
                double v = std::abs(calibrated.at(m, profile.reference, az));
                if (v > best) {
                    best = v;
                    bin = m;
                }
            }
        }
        // Snapshot over the sorted midpoint axis, matching the manifold's
        // element coordinates.
        std::vector<int> order(static_cast<size_t>(calibrated.n_chan));
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return calibrated.axes.rows[static_cast<size_t>(a)].midpoint.y <
                   calibrated.axes.rows[static_cast<size_t>(b)].midpoint.y;
        });
        std::vector<double> element_y(order.size());
        std::vector<cdouble> s(order.size());
        for (size_t i = 0; i < order.size(); ++i) {
            element_y[i] = calibrated.axes.rows[static_cast<size_t>(order[i])].midpoint.y;
            s[i] = calibrated.at(bin, order[i], az);
        }
        auto manifold = calib::build_manifold(element_y, profile.k_c,
                                              calib::uniform_angle_grid(cfg.cal_angle_count));
        auto w_sorted = calib::residual_weights(s, manifold);
        std::vector<cdouble> w(order.size());
        for (size_t i = 0; i < order.size(); ++i) w[static_cast<size_t>(order[i])] = w_sorted[i];
        profile.weights = std::move(w);
    }
    return profile;
}

imaging::ImageVolume reconstruct(const config::RunConfig& cfg, const sim::DataCube& cube,
                                 const calib::CalibrationProfile* profile) {
    if (cfg.z_planes.empty()) throw_config("config: imaging.z_planes is not set");

    sim::DataCube work = cube;
    if (!cfg.nonlin_file.empty() && work.stage == sim::Stage::raw) work = compensate(cfg, work);
    if (profile && work.stage != sim::Stage::calibrated)
        work = calib::apply_calibration(work, *profile);

    imaging::MonoOptions mono_opts;
    mono_opts.phase_model = cfg.phase_model;

    imaging::ImageVolume vol;
    bool first = true;
    for (double z_d : cfg.z_planes) {
        double z_ref = cfg.z_ref > 0.0 ? cfg.z_ref : z_d;
        sim::DataCube mono = imaging::mono_transform(work, z_ref, mono_opts);
        imaging::ImageVolume plane;
        if (cfg.algorithm == "bp") {
            plane = imaging::bp_reconstruct(mono, imaging::VoxelGrid::from_axes(mono.axes, {z_d}));
        } else {
            auto profiles = rangeproc::range_compress(mono, cfg.n_fft, cfg.window);
            imaging::RmaOptions rma_opts;
            rma_opts.pad_factor = cfg.pad_factor;
            rma_opts.bin_window = cfg.bin_window;
            plane = imaging::rma_reconstruct(profiles, {z_d}, rma_opts);
        }
        if (first) {
            vol = std::move(plane);
            first = false;
        } else {
            if (plane.nx != vol.nx || plane.ny != vol.ny)
                throw_runtime("reconstruct: inconsistent plane dimensions across z planes");
            vol.z_planes.push_back(z_d);
            vol.voxels.insert(vol.voxels.end(), plane.voxels.begin(), plane.voxels.end());
        }
    }
    return vol;
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace msar::pipeline
