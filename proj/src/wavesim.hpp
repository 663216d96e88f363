#pragma once

// Forward simulator: multistatic FMCW beat-signal data cubes from
// point-reflector scenes, with optional per-channel errors, chirp
// non-linearity and additive noise.
//
// The beat signal is expressed directly in wavenumber k (dechirped domain):
// a reflector contributes p * exp(-j*k*(d_tx + d_rx)) with exact Euclidean
// path lengths from the physical antenna positions.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"

namespace msar::sim {

struct ChirpConfig {
    double f0 = 0.0;      // start frequency, Hz
    double b = 0.0;       // bandwidth, Hz
    double T = 0.0;       // chirp time, s
    double fs = 0.0;      // ADC sampling rate, Hz
    int n_samples = 0;
    double c = kSpeedOfLight;

    double slope() const { return b / T; }
    double center_frequency() const { return f0 + 0.5 * b; }
    double k_center() const { return kTwoPi * center_frequency() / c; }
    double lambda_center() const { return c / center_frequency(); }

    void validate() const;
    uint64_t hash() const;
};

// k_n = (2pi/c)(f0 + beta*n/fs), n = 0..n_samples-1.
std::vector<double> wavenumber_grid(const ChirpConfig& chirp);

struct Reflector {
    double x = 0.0, y = 0.0, z = 0.0;
    cdouble p{1.0, 0.0};
};

struct Scene {
    std::vector<Reflector> reflectors;

    void validate() const;

    // Plain-text, one reflector per line: `x_m y_m z_m re(p) im(p)`.
    static Scene parse(std::istream& in, const std::string& origin);
    static Scene load(const std::string& path);
};

struct ChannelError {
    std::vector<cdouble> gain;     // g_l
    std::vector<double> range_m;   // R_l

    size_t channels() const { return gain.size(); }
    void validate() const;
};

// Excess phase vs fast time, per channel: phi_l(t) = sum_d coeff[d]*t^d,
// t in seconds. Zero polynomial = ideal chirp.
struct NonlinearityModel {
    static constexpr int kMaxDegree = 4;
    std::vector<std::array<double, kMaxDegree + 1>> coeffs;

    size_t channels() const { return coeffs.size(); }
    bool is_zero() const;
    double phase_at(size_t channel, double t) const;
};

enum class Stage : int {
    raw = 0,
    nonlin_compensated = 1,
    range_compressed = 2,
    aligned = 3,
    calibrated = 4,
};

const char* stage_name(Stage s);

// One resolved row of the cube's channel axis: a virtual element, with any
// elevation-scan offset folded into the positions.
struct ChannelGeom {
    int element_id = 0;
    geom::Vec2 tx;          // physical positions at scan x = 0
    geom::Vec2 rx;
    geom::Vec2 midpoint;
    geom::Vec2 separation;  // tx - rx
};

struct CubeAxes {
    std::vector<ChannelGeom> rows;
    std::vector<double> azimuth_x;  // scan positions along x
    double x_step = 0.0;

    uint64_t hash() const;
};

CubeAxes build_cube_axes(const std::vector<geom::VirtualElement>& elements,
                         const geom::AntennaLayout& layout, const geom::ApertureScan& scan);

struct DataCube {
    int n_fast = 0;   // fast-time / wavenumber samples
    int n_chan = 0;
    int n_az = 0;
    Stage stage = Stage::raw;
    ChirpConfig chirp;
    CubeAxes axes;
    std::vector<cdouble> samples;  // fast-time fastest: idx = n + n_fast*(l + n_chan*a)

    size_t idx(int n, int l, int a) const {
        return static_cast<size_t>(n) +
               static_cast<size_t>(n_fast) * (static_cast<size_t>(l) + static_cast<size_t>(n_chan) * static_cast<size_t>(a));
    }
    cdouble& at(int n, int l, int a) { return samples[idx(n, l, a)]; }
    const cdouble& at(int n, int l, int a) const { return samples[idx(n, l, a)]; }

    void require_dims_match(const ChannelError& err) const;
};

struct SimulateOptions {
    std::optional<double> noise_snr_db;  // additive complex white noise; off by default
    uint64_t seed = 0;
};

DataCube simulate_beat(const Scene& scene, const std::vector<geom::VirtualElement>& elements,
                       const geom::AntennaLayout& layout, const geom::ApertureScan& scan,
                       const ChirpConfig& chirp, const SimulateOptions& opts = {});

// Channel l multiplied by g_l * exp(-j*2*k_n*R_l); stage must be raw.
DataCube inject_channel_errors(const DataCube& cube, const ChannelError& errors);

// Adds the per-channel excess phase polynomial; stage must be raw.
DataCube inject_nonlinearity(const DataCube& cube, const NonlinearityModel& model);

}  // namespace msar::sim
