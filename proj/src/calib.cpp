#include "calib.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace msar::calib {

CalibrationProfile CalibrationProfile::identity(int n_chan) {
    CalibrationProfile p;
    p.n_chan = n_chan;
    p.phase.assign(static_cast<size_t>(n_chan), cdouble{1.0, 0.0});
    p.gain.assign(static_cast<size_t>(n_chan), 1.0);
    p.shift_bins.assign(static_cast<size_t>(n_chan), 0.0);
    return p;
}

void CalibrationProfile::validate() const {
    if (n_chan < 1) throw_config("calibration profile: empty");
    if (static_cast<int>(phase.size()) != n_chan || static_cast<int>(gain.size()) != n_chan ||
        static_cast<int>(shift_bins.size()) != n_chan)
        throw_config("calibration profile: inconsistent per-channel arrays");
    if (reference < 0 || reference >= n_chan)
        throw_config("calibration profile: reference channel out of range");
    for (const auto& c : phase)
        if (std::abs(std::abs(c) - 1.0) > 1e-9)
            throw_config("calibration profile: phase part must be unit magnitude");
    for (double g : gain)
        if (!(g > 0.0) || !std::isfinite(g))
            throw_config("calibration profile: gain must be positive and finite");
    if (weights && static_cast<int>(weights->size()) != n_chan)
        throw_config("calibration profile: weight vector length mismatch");
}

namespace {

double bistatic_path(const sim::ChannelGeom& row, double az_x, const std::array<double, 3>& p) {
    double txx = row.tx.x + az_x - p[0], txy = row.tx.y - p[1];
    double rxx = row.rx.x + az_x - p[0], rxy = row.rx.y - p[1];
    return std::sqrt(txx * txx + txy * txy + p[2] * p[2]) +
           std::sqrt(rxx * rxx + rxy * rxy + p[2] * p[2]);
}

}  // namespace

CalibrationProfile estimate_phase_gain(const rangeproc::RangeProfileSet& aligned,
                                       const rangeproc::AlignmentReport& alignment,
                                       const EstimateOptions& opts) {
    if (aligned.stage != sim::Stage::aligned)
        throw_config("estimate_phase_gain: profiles must be range aligned, got " +
                     std::string(sim::stage_name(aligned.stage)));
    const int n_chan = aligned.n_chan;
    if (static_cast<int>(alignment.shift_bins.size()) != n_chan)
        throw_config("estimate_phase_gain: alignment report channel count mismatch");
    if (opts.reference < 0 || opts.reference >= n_chan)
        throw_config("estimate_phase_gain: reference channel out of range");

    const int az = opts.azimuth_index >= 0 ? opts.azimuth_index : aligned.n_az / 2;
    if (az >= aligned.n_az) throw_config("estimate_phase_gain: azimuth index out of range");

    int bin = opts.peak_bin;
    if (bin < 0) {
        double best = -1.0;
        for (int m = 0; m < aligned.n_bins; ++m) {
            double v = std::abs(aligned.at(m, opts.reference, az));
            if (v > best) {
                best = v;
                bin = m;
            }
        }
    }
    if (bin < 0 || bin >= aligned.n_bins) throw_config("estimate_phase_gain: peak bin out of range");

    // Every channel must show a dominant return at the calibration bin.
    std::vector<int> weak;
    for (int l = 0; l < n_chan; ++l) {
        std::vector<double> mags(static_cast<size_t>(aligned.n_bins));
        for (int m = 0; m < aligned.n_bins; ++m) mags[static_cast<size_t>(m)] = std::abs(aligned.at(m, l, az));
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
        double median = mags[mags.size() / 2];
        if (!(std::abs(aligned.at(bin, l, az)) > median * std::pow(10.0, 6.0 / 20.0)))
            weak.push_back(l);
    }
    if (!weak.empty()) {
        std::ostringstream msg;
        msg << "calibration failed: no dominant peak at bin " << bin << " on channel(s)";
        for (int l : weak) msg << ' ' << l;
        throw_calibration(msg.str());
    }

    const double k_ref = aligned.phase_ref_k();
    const double az_x = aligned.axes.azimuth_x.at(static_cast<size_t>(az));
    auto channel_value = [&](int l) {
        cdouble v = aligned.at(bin, l, az);
        if (opts.model_phase_division) {
            double path = bistatic_path(aligned.axes.rows.at(static_cast<size_t>(l)), az_x, opts.reflector);
            v *= std::polar(1.0, k_ref * path);
        }
        return v;
    };

    CalibrationProfile profile = CalibrationProfile::identity(n_chan);
    profile.reference = opts.reference;
    profile.shift_bins = alignment.shift_bins;
    profile.bin_scale_m = aligned.bin_scale_m;
    profile.k_c = aligned.chirp.k_center();
    profile.reflector = opts.reflector;
    profile.chirp_hash = aligned.chirp.hash();
    profile.geom_hash = aligned.axes.hash();

    const cdouble v_ref = channel_value(opts.reference);
    for (int l = 0; l < n_chan; ++l) {
        cdouble v = channel_value(l);
        profile.phase[static_cast<size_t>(l)] = std::polar(1.0, std::arg(v_ref) - std::arg(v));
        profile.gain[static_cast<size_t>(l)] = std::abs(v_ref) / std::abs(v);
    }
    return profile;
}

rangeproc::RangeProfileSet apply_calibration(const rangeproc::RangeProfileSet& profiles,
                                             const CalibrationProfile& profile) {
    profile.validate();
    if (profiles.stage == sim::Stage::calibrated)
        throw_config("apply_calibration: profiles are already calibrated");
    if (profiles.stage != sim::Stage::aligned)
        throw_config("apply_calibration: profiles must be range aligned first");
    if (profile.n_chan != profiles.n_chan)
        throw_config("apply_calibration: profile has " + std::to_string(profile.n_chan) +
                     " channels, data has " + std::to_string(profiles.n_chan));

    rangeproc::RangeProfileSet out = profiles;
    out.stage = sim::Stage::calibrated;
    for (int l = 0; l < out.n_chan; ++l) {
        cdouble c = profile.correction(l);
        if (profile.weights) c *= (*profile.weights)[static_cast<size_t>(l)];
        for (int a = 0; a < out.n_az; ++a) {
            cdouble* col = &out.at(0, l, a);
            for (int m = 0; m < out.n_bins; ++m) col[m] *= c;
        }
    }
    return out;
}

sim::DataCube apply_calibration(const sim::DataCube& cube, const CalibrationProfile& profile) {
    profile.validate();
    if (cube.stage == sim::Stage::calibrated)
        throw_config("apply_calibration: cube is already calibrated");
    if (cube.stage != sim::Stage::raw && cube.stage != sim::Stage::nonlin_compensated)
        throw_config("apply_calibration: cube stage must be raw or nonlin_compensated");
    if (profile.n_chan != cube.n_chan)
        throw_config("apply_calibration: profile has " + std::to_string(profile.n_chan) +
                     " channels, cube has " + std::to_string(cube.n_chan));

    sim::DataCube out = cube;
    out.stage = sim::Stage::calibrated;
    const std::vector<double> k = sim::wavenumber_grid(cube.chirp);
    // Wavenumber the profile's alignment ramp is referenced to (chirp-center
    // sample), matching the range-compression phase convention.
    const double k_mid = kTwoPi / cube.chirp.c *
                         (cube.chirp.f0 + cube.chirp.slope() * 0.5 * (cube.n_fast - 1) / cube.chirp.fs);
#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < out.n_az; ++a) {
        for (int l = 0; l < out.n_chan; ++l) {
            cdouble c = profile.correction(l);
            if (profile.weights) c *= (*profile.weights)[static_cast<size_t>(l)];
            const double shift_m = profile.shift_bins[static_cast<size_t>(l)] * profile.bin_scale_m;
            cdouble* cell = &out.samples[out.idx(0, l, a)];
            for (int n = 0; n < out.n_fast; ++n)
                cell[n] *= c * std::polar(1.0, -2.0 * (k[static_cast<size_t>(n)] - k_mid) * shift_m);
        }
    }
    return out;
}

std::vector<cdouble> snapshot_at_bin(const rangeproc::RangeProfileSet& profiles, int bin, int azimuth) {
    if (bin < 0 || bin >= profiles.n_bins) throw_config("snapshot: bin out of range");
    if (azimuth < 0 || azimuth >= profiles.n_az) throw_config("snapshot: azimuth out of range");
    std::vector<cdouble> s(static_cast<size_t>(profiles.n_chan));
    for (int l = 0; l < profiles.n_chan; ++l) s[static_cast<size_t>(l)] = profiles.at(bin, l, azimuth);
    return s;
}

ArrayManifold build_manifold(const std::vector<double>& element_y, double k_c,
                             const std::vector<double>& direction_sines) {
    if (element_y.empty() || direction_sines.empty())
        throw_config("build_manifold: element and angle grids must be non-empty");
    for (double u : direction_sines)
        if (std::abs(u) > 1.0) throw_domain("build_manifold: |direction sine| > 1");

    ArrayManifold m;
    m.n_elements = static_cast<int>(element_y.size());
    m.n_angles = static_cast<int>(direction_sines.size());
    m.u = direction_sines;
    m.entries.resize(static_cast<size_t>(m.n_elements) * static_cast<size_t>(m.n_angles));
    for (int l = 0; l < m.n_elements; ++l)
        for (int g = 0; g < m.n_angles; ++g)
            m.entries[static_cast<size_t>(l) * static_cast<size_t>(m.n_angles) + static_cast<size_t>(g)] =
                std::polar(1.0, -2.0 * k_c * direction_sines[static_cast<size_t>(g)] * element_y[static_cast<size_t>(l)]);
    return m;
}

std::vector<double> uniform_angle_grid(int count) {
    if (count < 2) throw_config("angle grid: need at least 2 points");
    std::vector<double> u(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        u[static_cast<size_t>(i)] = -1.0 + 2.0 * i / (count - 1);
    return u;
}

std::vector<cdouble> residual_weights(const std::vector<cdouble>& s, const ArrayManifold& manifold) {
    if (static_cast<int>(s.size()) != manifold.n_elements)
        throw_config("residual_weights: snapshot length does not match manifold");

    std::vector<int> active;
    for (int l = 0; l < manifold.n_elements; ++l) {
        if (std::abs(s[static_cast<size_t>(l)]) > 0.0)
            active.push_back(l);
        else
            std::fprintf(stderr, "warning: residual_weights: s[%d] = 0, leaving w[%d] = 1\n", l, l);
    }
    if (active.empty()) throw_config("residual_weights: snapshot is identically zero");

    const int g_count = manifold.n_angles;
    Eigen::MatrixXcd M(g_count, static_cast<int>(active.size()));
    Eigen::VectorXcd r(g_count);
    for (int g = 0; g < g_count; ++g) {
        cdouble target{};
        for (int l = 0; l < manifold.n_elements; ++l) target += manifold.at(l, g);
        r(g) = target;
        for (size_t j = 0; j < active.size(); ++j) {
            int l = active[j];
            M(g, static_cast<int>(j)) = s[static_cast<size_t>(l)] * manifold.at(l, g);
        }
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(M);
    if (cod.rank() == 0) throw_config("residual_weights: array manifold is degenerate (rank 0)");
    Eigen::VectorXcd w_active = cod.solve(r);

    std::vector<cdouble> w(static_cast<size_t>(manifold.n_elements), cdouble{1.0, 0.0});
    for (size_t j = 0; j < active.size(); ++j)
        w[static_cast<size_t>(active[j])] = w_active(static_cast<int>(j));
    return w;
}

std::vector<cdouble> ipr_after_weights(const std::vector<cdouble>& s, const std::vector<cdouble>& w,
                                       const ArrayManifold& manifold) {
    if (static_cast<int>(s.size()) != manifold.n_elements || w.size() != s.size())
        throw_config("ipr_after_weights: dimension mismatch");
    std::vector<cdouble> response(static_cast<size_t>(manifold.n_angles), cdouble{});
    for (int g = 0; g < manifold.n_angles; ++g) {
        cdouble acc{};
        for (int l = 0; l < manifold.n_elements; ++l)
            acc += w[static_cast<size_t>(l)] * s[static_cast<size_t>(l)] * manifold.at(l, g);
        response[static_cast<size_t>(g)] = acc;
    }
    return response;
}

double weight_objective(const std::vector<cdouble>& s, const std::vector<cdouble>& w,
                        const ArrayManifold& manifold) {
    std::vector<cdouble> resp = ipr_after_weights(s, w, manifold);
    double acc = 0.0;
    for (int g = 0; g < manifold.n_angles; ++g) {
        cdouble target{};
        for (int l = 0; l < manifold.n_elements; ++l) target += manifold.at(l, g);
        cdouble d = resp[static_cast<size_t>(g)] - target;
        acc += std::norm(d);
    }
    return std::sqrt(acc);
}

}  // namespace msar::calib
