#pragma once

// Image formation: multistatic-to-monostatic midpoint correction, FFT-based
// range-migration reconstruction (single-wavenumber, no Stolt interpolation),
// a brute-force back-projection oracle, and impulse-response metrics.

#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "rangeproc.hpp"
#include "wavesim.hpp"

namespace msar::imaging {

struct SpectralGrid {
    std::vector<double> kx;  // rad/m, DFT frequency order
    std::vector<double> ky;
    double kc = 0.0;
};

SpectralGrid make_spectral_grid(int nx, double dx, int ny, double dy, double kc);

struct ImageVolume {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0, dx = 0.0;
    double y0 = 0.0, dy = 0.0;
    std::vector<double> z_planes;
    std::vector<cdouble> voxels;  // x fastest: ix + nx*(iy + ny*iz)

    size_t idx(int ix, int iy, int iz) const {
        return static_cast<size_t>(ix) +
               static_cast<size_t>(nx) * (static_cast<size_t>(iy) + static_cast<size_t>(ny) * static_cast<size_t>(iz));
    }
    cdouble& at(int ix, int iy, int iz) { return voxels[idx(ix, iy, iz)]; }
    const cdouble& at(int ix, int iy, int iz) const { return voxels[idx(ix, iy, iz)]; }

    std::vector<double> plane_magnitude(int iz) const;
};

struct MonoOptions {
    geom::PhaseModel phase_model = geom::PhaseModel::exact;
    double grid_tol = 1e-6;  // relative midpoint-pitch tolerance
};

// Multiplies each channel by exp(-j Phi(dx, dy, z_ref)) per wavenumber sample
// and re-indexes the rows onto the sorted virtual-midpoint grid. Errors if the
// midpoints do not form a uniform line (dedupe the elements first).
sim::DataCube mono_transform(const sim::DataCube& cube, double z_ref, const MonoOptions& opts = {});

struct RmaOptions {
    int pad_factor = 2;   // aperture zero-padding before the 2D transforms
    int bin_window = 0;   // coherent sum over +/- bin_window range bins
};

// Per z plane: select the range bin containing z_d, 2D transform over the
// aperture, apply the focusing factor with the evanescent region zeroed,
// inverse transform. Profiles must come from a mono-transformed cube.
ImageVolume rma_reconstruct(const rangeproc::RangeProfileSet& profiles, const std::vector<double>& z_planes,
                            const RmaOptions& opts = {});

struct VoxelGrid {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0, dx = 0.0;
    double y0 = 0.0, dy = 0.0;
    std::vector<double> z_planes;

    // The aperture sampling grid itself, for oracle comparisons.
    static VoxelGrid from_axes(const sim::CubeAxes& axes, std::vector<double> z_planes);
};

// Exact matched-filter sum per voxel over (channel, azimuth, wavenumber),
// with the monostatic midpoint kernel exp(+j 2 k r). O(voxels x samples);
// oracle / reference use.
ImageVolume bp_reconstruct(const sim::DataCube& cube, const VoxelGrid& grid);

// Convenience: invert rect-window range compression back to a cube first.
ImageVolume bp_reconstruct(const rangeproc::RangeProfileSet& profiles, const VoxelGrid& grid);

struct IprReport {
    double peak_pos_x = 0.0;   // meters (or the 1D axis unit)
    double peak_pos_y = 0.0;
    double peak_mag = 0.0;
    int peak_ix = 0;
    int peak_iy = 0;
    double width3db_x = 0.0;   // meters; 0 if the -3 dB points fall outside
    double width3db_y = 0.0;
    double pslr_db = 0.0;
    double islr_db = 0.0;
};

// Metrics on a 1D magnitude cut: peak via quadratic refinement, -3 dB width
// via quadratic interpolation at the crossings, PSLR/ISLR from the first
// nulls outward.
IprReport ipr_metrics_1d(const std::vector<double>& mag, double scale, int peak_hint = -1);

// Metrics on a plane slice through the axis cuts at the peak. PSLR/ISLR are
// the worse (higher) of the two cuts.
IprReport ipr_metrics_plane(const std::vector<double>& mag, int nx, int ny, double dx, double dy,
                            int hint_ix = -1, int hint_iy = -1);

}  // namespace msar::imaging
