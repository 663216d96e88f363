#pragma once

// Declarative run configuration: one sectioned key-value file drives every
// pipeline stage. Dimensioned values carry explicit unit suffixes (GHz, us,
// mm, ...) and are parsed strictly; CLI flags override file keys.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "calib.hpp"
#include "common.hpp"
#include "geometry.hpp"
#include "imaging.hpp"
#include "rangeproc.hpp"
#include "wavesim.hpp"

namespace msar::config {

enum class Dimension { none, frequency, time, length, speed };

// "3.5997 GHz" -> 3.5997e9. The suffix is mandatory for dimensioned values.
double parse_quantity(const std::string& text, Dimension dim, const std::string& key);
bool parse_bool(const std::string& text, const std::string& key);

struct ErrorSpec {
    bool enabled = false;
    uint64_t seed = 1;
    double gain_min = 0.5;
    double gain_max = 2.0;
    double phase_max_rad = kPi;       // phases drawn U(-phase_max, +phase_max)
    double range_bins_max = 5.0;      // |R_l| up to this many default range bins
    bool reference_clean = false;     // leave the calibration reference channel untouched
    std::string file;                 // explicit per-channel table instead of random draws
};

struct RunConfig {
    // [chirp]
    sim::ChirpConfig chirp;

    // [geometry]
    std::string layout_file;
    std::string tdm = "full";     // or explicit "t:r,t:r,..."
    bool dedupe = true;
    double dedupe_tol = -1.0;     // <0: lambda_c/100

    // [scan]
    int scan_x_count = 1;
    double scan_x_step = 1e-3;
    int scan_y_count = 1;
    double scan_y_step = 1e-3;

    // [scene]
    std::string scene_file;

    // [errors], [nonlinearity], [noise]
    ErrorSpec errors;
    std::string nonlin_file;
    bool noise_enabled = false;
    double noise_snr_db = 30.0;

    // [calibration]
    std::array<double, 3> cal_reflector{0.0, 0.0, 2.0};
    int cal_reference = 0;
    int cal_azimuth = -1;
    int cal_peak_bin = -1;
    bool cal_model_division = false;
    bool cal_fractional = true;
    bool cal_weights = false;
    int cal_angle_count = 181;

    // [imaging]
    std::string algorithm = "rma";  // rma | bp
    std::vector<double> z_planes;
    rangeproc::Window window = rangeproc::Window::rect;
    int n_fft = 0;                  // 0: next pow2 >= 4*n_samples
    int pad_factor = 2;
    int bin_window = 0;
    geom::PhaseModel phase_model = geom::PhaseModel::exact;
    double z_ref = -1.0;            // <0: evaluate per reconstruction plane

    // [output]
    std::string output_dir = "out";
    uint64_t seed = 1;
    int threads = 0;

    std::string base_dir;  // config file directory, for relative paths

    static RunConfig parse(std::istream& in, const std::string& origin);
    static RunConfig load(const std::string& path);

    // "section.key" overrides, same parsing rules as the file.
    void set(const std::string& dotted_key, const std::string& value);

    std::string resolve_path(const std::string& p) const;

    geom::AntennaLayout load_layout() const;
    geom::TdmOrder tdm_order(const geom::AntennaLayout& layout) const;
    double dedupe_tolerance() const;
    std::vector<geom::VirtualElement> build_elements(const geom::AntennaLayout& layout) const;
    geom::ApertureScan scan() const;
    sim::Scene load_scene() const;

    // Deterministic per-channel error draw (or the explicit table when
    // errors.file is set).
    sim::ChannelError draw_errors(int n_chan, double bin_scale_m) const;
    sim::NonlinearityModel load_nonlinearity(int n_chan) const;

    // Default range-compression bin width, for error draws in bin units.
    double default_bin_scale() const;
};

}  // namespace msar::config
