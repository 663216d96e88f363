#pragma once

// Virtual-array calibration: per-channel complex gain/phase estimation from a
// corner-reflector snapshot, correction application, and the residual
// least-squares weight optimization over the array manifold.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "rangeproc.hpp"
#include "wavesim.hpp"

namespace msar::calib {

struct CalibrationProfile {
    int n_chan = 0;
    int reference = 0;
    std::vector<cdouble> phase;      // unit-magnitude correction factors
    std::vector<double> gain;        // positive gain corrections
    std::vector<double> shift_bins;  // range-alignment corrections
    double bin_scale_m = 0.0;
    double k_c = 0.0;                // wavenumber at the chirp center frequency
    std::array<double, 3> reflector{0.0, 0.0, 0.0};
    std::optional<std::vector<cdouble>> weights;
    uint64_t chirp_hash = 0;
    uint64_t geom_hash = 0;

    cdouble correction(int l) const {
        return phase[static_cast<size_t>(l)] * gain[static_cast<size_t>(l)];
    }
    static CalibrationProfile identity(int n_chan);
    void validate() const;
};

struct EstimateOptions {
    int reference = 0;
    int azimuth_index = -1;  // -1: middle scan column
    int peak_bin = -1;       // -1: detect from the reference channel
    // Divide out the modeled reflector phase (exact bistatic paths at the
    // compression reference wavenumber) before comparing channels. Off by
    // default: the plain boresight far-field assumption.
    bool model_phase_division = false;
    std::array<double, 3> reflector{0.0, 0.0, 0.0};
};

CalibrationProfile estimate_phase_gain(const rangeproc::RangeProfileSet& aligned,
                                       const rangeproc::AlignmentReport& alignment,
                                       const EstimateOptions& opts);

// Per-channel complex multiply (and optional residual weights) on aligned
// profiles; stage -> calibrated.
rangeproc::RangeProfileSet apply_calibration(const rangeproc::RangeProfileSet& profiles,
                                             const CalibrationProfile& profile);

// Same corrections applied to a fast-time cube; the stored alignment shift
// becomes an exact linear phase ramp across fast time. stage -> calibrated.
sim::DataCube apply_calibration(const sim::DataCube& cube, const CalibrationProfile& profile);

// Array snapshot: complex values of every channel at one (bin, azimuth).
std::vector<cdouble> snapshot_at_bin(const rangeproc::RangeProfileSet& profiles, int bin, int azimuth);

struct ArrayManifold {
    int n_elements = 0;
    int n_angles = 0;
    std::vector<double> u;        // direction sines
    std::vector<cdouble> entries; // element-major: [l * n_angles + g]

    cdouble at(int l, int g) const {
        return entries[static_cast<size_t>(l) * static_cast<size_t>(n_angles) + static_cast<size_t>(g)];
    }
};

// Entry (l, theta) = exp(-j * 2*k_c * u_theta * y_l).
ArrayManifold build_manifold(const std::vector<double>& element_y, double k_c,
                             const std::vector<double>& direction_sines);

std::vector<double> uniform_angle_grid(int count = 181);

// Minimizes ||(w . s) A - 1^T A||_2 over complex w (linear least squares,
// minimum-norm solution when rank-deficient). Zero entries of s are excluded
// with w = 1 there.
std::vector<cdouble> residual_weights(const std::vector<cdouble>& s, const ArrayManifold& manifold);

// Beam response (w . s) A over the manifold's angle grid.
std::vector<cdouble> ipr_after_weights(const std::vector<cdouble>& s, const std::vector<cdouble>& w,
                                       const ArrayManifold& manifold);

double weight_objective(const std::vector<cdouble>& s, const std::vector<cdouble>& w,
                        const ArrayManifold& manifold);

}  // namespace msar::calib
