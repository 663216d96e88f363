#pragma once

// Fast-time processing: chirp non-linearity compensation, range compression,
// cross-channel range alignment (RCM correction) and time-frequency
// diagnostics.
//
// Range compression uses the DFT kernel e^{+j 2pi m n / N} with the fast-time
// origin at the chirp center, so a target at range R peaks at bin
// 2*R*b*n_fft/(c*n_samples) and the peak complex value carries phase
// -2*k_ref*R with k_ref the wavenumber at the center sample. Alignment shifts
// are implemented as phase ramps in that centered convention, which leaves
// peak complex values untouched.

#include <utility>
#include <vector>

#include "common.hpp"
#include "wavesim.hpp"

namespace msar::rangeproc {

enum class Window { rect, hann, taylor };

Window window_from_name(const std::string& name);
const char* window_name(Window w);
std::vector<double> make_window(Window w, int n);

struct RangeProfileSet {
    int n_bins = 0;
    int n_chan = 0;
    int n_az = 0;
    sim::Stage stage = sim::Stage::range_compressed;
    double bin_scale_m = 0.0;  // meters per bin = c/(2b) * (n_samples/n_fft)
    int n_samples_src = 0;
    Window window = Window::rect;
    sim::ChirpConfig chirp;
    sim::CubeAxes axes;
    std::vector<cdouble> bins;  // bin fastest: idx = m + n_bins*(l + n_chan*a)

    size_t idx(int m, int l, int a) const {
        return static_cast<size_t>(m) +
               static_cast<size_t>(n_bins) * (static_cast<size_t>(l) + static_cast<size_t>(n_chan) * static_cast<size_t>(a));
    }
    cdouble& at(int m, int l, int a) { return bins[idx(m, l, a)]; }
    const cdouble& at(int m, int l, int a) const { return bins[idx(m, l, a)]; }

    // Wavenumber the peak phase is referenced to (center fast-time sample).
    double phase_ref_k() const {
        return kTwoPi / chirp.c * (chirp.f0 + chirp.slope() * 0.5 * (n_samples_src - 1) / chirp.fs);
    }
    int bin_of_range(double range_m) const { return static_cast<int>(std::lround(range_m / bin_scale_m)); }
};

struct AlignmentReport {
    int reference = 0;
    std::vector<double> shift_bins;  // correction applied per channel; reference entry is 0
};

// Subtracts the per-channel excess phase polynomial. raw -> nonlin_compensated.
sim::DataCube compensate_nonlinearity(const sim::DataCube& cube, const sim::NonlinearityModel& model);

// Windowed DFT along fast time per (channel, azimuth). n_fft = 0 selects the
// default: next power of two >= 4*n_samples.
RangeProfileSet range_compress(const sim::DataCube& cube, int n_fft = 0, Window window = Window::rect);

int default_n_fft(int n_samples);

// Circular (integer) or phase-ramp (fractional) shifts so every channel's
// peak cross-correlation with the reference lands at lag zero. Requires a
// dominant scatterer (peak >= 6 dB above the channel's median magnitude).
std::pair<RangeProfileSet, AlignmentReport> range_align(const RangeProfileSet& profiles, int reference,
                                                        bool fractional);

// Shift one channel's profile by the given number of bins (peak moves by
// +shift). Exposed for calibration application.
void shift_channel(RangeProfileSet& profiles, int channel, double shift_bins, bool fractional);

struct Spectrogram {
    int n_frames = 0;
    int n_freq = 0;
    double time_step_s = 0.0;
    double freq_step_hz = 0.0;
    std::vector<double> magnitude;  // frame-major: [frame * n_freq + bin]
};

Spectrogram spectrogram(const sim::DataCube& cube, int channel, int azimuth, int window_len, int hop);

struct PowerSpectrum {
    double freq_step_hz = 0.0;
    std::vector<double> magnitude;
};

PowerSpectrum power_spectrum(const sim::DataCube& cube, int channel, int azimuth);

}  // namespace msar::rangeproc
