#include "rangeproc.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace msar::rangeproc {

Window window_from_name(const std::string& name) {
    if (name == "rect") return Window::rect;
    if (name == "hann") return Window::hann;
    if (name == "taylor") return Window::taylor;
    throw_config("unknown window '" + name + "' (expected rect|hann|taylor)");
}

const char* window_name(Window w) {
    switch (w) {
        case Window::rect: return "rect";
        case Window::hann: return "hann";
        case Window::taylor: return "taylor";
    }
    return "unknown";
}

std::vector<double> make_window(Window w, int n) {
    std::vector<double> win(static_cast<size_t>(n), 1.0);
    if (n == 1 || w == Window::rect) return win;
    if (w == Window::hann) {
        for (int i = 0; i < n; ++i)
            win[static_cast<size_t>(i)] = 0.5 - 0.5 * std::cos(kTwoPi * i / (n - 1));
        return win;
    }
    // Taylor, nbar = 4, -30 dB sidelobes.
    const int nbar = 4;
    const double sll = 30.0;
    const double r = std::pow(10.0, sll / 20.0);
    const double a = std::acosh(r) / kPi;
    const double sigma2 = nbar * nbar / (a * a + (nbar - 0.5) * (nbar - 0.5));
    std::vector<double> fm(static_cast<size_t>(nbar), 0.0);
    for (int m = 1; m < nbar; ++m) {
        double num = 1.0, den = 1.0;
        for (int i = 1; i < nbar; ++i) {
            num *= 1.0 - static_cast<double>(m * m) / (sigma2 * (a * a + (i - 0.5) * (i - 0.5)));
            if (i != m) den *= 1.0 - static_cast<double>(m * m) / (i * i);
        }
        fm[static_cast<size_t>(m)] = ((m % 2 == 0) ? -0.5 : 0.5) * num / den;
    }
    for (int i = 0; i < n; ++i) {
        double s = 1.0;
        for (int m = 1; m < nbar; ++m)
            s += 2.0 * fm[static_cast<size_t>(m)] * std::cos(kTwoPi * m * (i - 0.5 * (n - 1)) / n);
        win[static_cast<size_t>(i)] = s;
    }
    return win;
}

sim::DataCube compensate_nonlinearity(const sim::DataCube& cube, const sim::NonlinearityModel& model) {
    if (cube.stage != sim::Stage::raw)
        throw_config("compensate_nonlinearity: cube stage must be raw, got " +
                     std::string(sim::stage_name(cube.stage)));
    if (model.channels() != static_cast<size_t>(cube.n_chan))
        throw_config("nonlinearity model: channel count mismatch");

    sim::DataCube out = cube;
    out.stage = sim::Stage::nonlin_compensated;
#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < out.n_az; ++a) {
        for (int l = 0; l < out.n_chan; ++l) {
            cdouble* cell = &out.samples[out.idx(0, l, a)];
            for (int n = 0; n < out.n_fast; ++n) {
                double t = n / cube.chirp.fs;
                cell[n] *= std::polar(1.0, -model.phase_at(static_cast<size_t>(l), t));
            }
        }
    }
    return out;
}

int default_n_fft(int n_samples) {
    int n = 1;
    while (n < 4 * n_samples) n *= 2;
    return n;
}

RangeProfileSet range_compress(const sim::DataCube& cube, int n_fft, Window window) {
    if (cube.stage == sim::Stage::range_compressed || cube.stage == sim::Stage::aligned)
        throw_config("range_compress: cube is already range compressed");
    if (n_fft == 0) n_fft = default_n_fft(cube.n_fast);
    if (n_fft < cube.n_fast)
        throw_config("range_compress: n_fft (" + std::to_string(n_fft) + ") < n_samples (" +
                     std::to_string(cube.n_fast) + ")");

    RangeProfileSet out;
    out.n_bins = n_fft;
    out.n_chan = cube.n_chan;
    out.n_az = cube.n_az;
    out.stage = cube.stage == sim::Stage::calibrated ? sim::Stage::calibrated : sim::Stage::range_compressed;
    out.bin_scale_m = cube.chirp.c / (2.0 * cube.chirp.b) * static_cast<double>(cube.n_fast) / n_fft;
    out.n_samples_src = cube.n_fast;
    out.window = window;
    out.chirp = cube.chirp;
    out.axes = cube.axes;
    out.bins.assign(static_cast<size_t>(n_fft) * cube.n_chan * cube.n_az, cdouble{});

    const std::vector<double> win = make_window(window, cube.n_fast);
    // Referencing the fast-time origin to the chirp center keeps the rect
    // window transform real-symmetric around the peak.
    const double n_center = 0.5 * (cube.n_fast - 1);
    std::vector<cdouble> centering(static_cast<size_t>(n_fft));
    for (int m = 0; m < n_fft; ++m)
        centering[static_cast<size_t>(m)] = std::polar(1.0, -kTwoPi * m * n_center / n_fft);

#pragma omp parallel
    {
        fft::Plan plan(n_fft, +1);
        std::vector<cdouble> buf(static_cast<size_t>(n_fft));
#pragma omp for collapse(2) schedule(static)
        for (int a = 0; a < cube.n_az; ++a) {
            for (int l = 0; l < cube.n_chan; ++l) {
                const cdouble* cell = &cube.samples[cube.idx(0, l, a)];
                for (int n = 0; n < cube.n_fast; ++n)
                    buf[static_cast<size_t>(n)] = cell[n] * win[static_cast<size_t>(n)];
                std::fill(buf.begin() + cube.n_fast, buf.end(), cdouble{});
                cdouble* dst = &out.bins[out.idx(0, l, a)];
                plan.transform(buf.data(), buf.size(), dst);
                for (int m = 0; m < n_fft; ++m) dst[m] *= centering[static_cast<size_t>(m)];
            }
        }
    }
    return out;
}

namespace {

// Location of the maximum of a circular series with three-point quadratic
// refinement across the wrap.
double refine_peak_circular(const std::vector<double>& v, int i) {
    const int n = static_cast<int>(v.size());
    double ym = v[static_cast<size_t>((i - 1 + n) % n)];
    double y0 = v[static_cast<size_t>(i)];
    double yp = v[static_cast<size_t>((i + 1) % n)];
    double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return static_cast<double>(i);
    return i + 0.5 * (ym - yp) / denom;
}

void check_dominant_peak(const RangeProfileSet& p, int l, std::vector<double>& mag_scratch) {
    mag_scratch.resize(static_cast<size_t>(p.n_bins));
    double peak = 0.0;
    for (int m = 0; m < p.n_bins; ++m) {
        double v = std::abs(p.at(m, l, 0));
        for (int a = 1; a < p.n_az; ++a) v = std::max(v, std::abs(p.at(m, l, a)));
        mag_scratch[static_cast<size_t>(m)] = v;
        peak = std::max(peak, v);
    }
    std::vector<double> sorted = mag_scratch;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double median = sorted[sorted.size() / 2];
    if (peak < median * std::pow(10.0, 6.0 / 20.0) || peak == 0.0)
        throw_calibration("range_align: channel " + std::to_string(l) +
                          " has no peak >= 6 dB above the median profile level");
}

}  // namespace

void shift_channel(RangeProfileSet& profiles, int channel, double shift_bins, bool fractional) {
    const int n = profiles.n_bins;
    if (!fractional) {
        int s = static_cast<int>(std::lround(shift_bins));
        s = ((s % n) + n) % n;
        if (s == 0) return;
        std::vector<cdouble> tmp(static_cast<size_t>(n));
        for (int a = 0; a < profiles.n_az; ++a) {
            cdouble* col = &profiles.at(0, channel, a);
            for (int m = 0; m < n; ++m) tmp[static_cast<size_t>((m + s) % n)] = col[m];
            std::copy(tmp.begin(), tmp.end(), col);
        }
        return;
    }
    // Band-limited shift: back to the fast-time domain, linear phase ramp
    // referenced to the chirp-center sample, forward again. The source
    // support lies in [0, n_samples_src), so the wrap branch of the ramp is
    // irrelevant there.
    fft::Plan fwd(n, -1), bwd(n, +1);
    const double n_center = 0.5 * (profiles.n_samples_src - 1);
    std::vector<cdouble> undo_center(static_cast<size_t>(n)), redo_center(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        undo_center[static_cast<size_t>(m)] = std::polar(1.0, kTwoPi * m * n_center / n);
        redo_center[static_cast<size_t>(m)] = std::conj(undo_center[static_cast<size_t>(m)]);
    }
    std::vector<cdouble> ramp(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s)
        ramp[static_cast<size_t>(s)] = std::polar(1.0 / n, -kTwoPi * shift_bins * (s - n_center) / n);
    std::vector<cdouble> buf(static_cast<size_t>(n)), time(static_cast<size_t>(n));
    for (int a = 0; a < profiles.n_az; ++a) {
        cdouble* col = &profiles.at(0, channel, a);
        for (int m = 0; m < n; ++m) buf[static_cast<size_t>(m)] = col[m] * undo_center[static_cast<size_t>(m)];
        fwd.transform(buf.data(), buf.size(), time.data());
        for (int s = 0; s < n; ++s) time[static_cast<size_t>(s)] *= ramp[static_cast<size_t>(s)];
        bwd.transform(time.data(), time.size(), buf.data());
        for (int m = 0; m < n; ++m) col[m] = buf[static_cast<size_t>(m)] * redo_center[static_cast<size_t>(m)];
    }
}

std::pair<RangeProfileSet, AlignmentReport> range_align(const RangeProfileSet& profiles, int reference,
                                                        bool fractional) {
    if (profiles.stage != sim::Stage::range_compressed && profiles.stage != sim::Stage::aligned)
        throw_config("range_align: profiles must be range compressed");
    if (reference < 0 || reference >= profiles.n_chan)
        throw_config("range_align: reference channel out of range");

    const int n = profiles.n_bins;

    // Peak validity, then power envelopes (max over azimuth). Correlating
    // powers rather than magnitudes keeps the peak smooth for the quadratic
    // lag refinement.
    std::vector<std::vector<double>> env(static_cast<size_t>(profiles.n_chan));
    {
        std::vector<double> scratch;
        for (int l = 0; l < profiles.n_chan; ++l) {
            check_dominant_peak(profiles, l, scratch);
            for (double& v : scratch) v *= v;
            env[static_cast<size_t>(l)] = scratch;
        }
    }

    // Cross-correlate magnitude envelopes against the reference in the
    // conjugate domain, oversampled for sub-bin lag readout.
    const int oversample = 16;
    const int n_os = n * oversample;
    fft::Plan fwd(n, -1);
    fft::Plan bwd_os(n_os, +1);

    std::vector<cdouble> ref_spec(static_cast<size_t>(n));
    {
        std::vector<cdouble> tmp(env[static_cast<size_t>(reference)].begin(), env[static_cast<size_t>(reference)].end());
        fwd.transform(tmp.data(), tmp.size(), ref_spec.data());
    }

    AlignmentReport report;
    report.reference = reference;
    report.shift_bins.assign(static_cast<size_t>(profiles.n_chan), 0.0);

    RangeProfileSet out = profiles;
    out.stage = sim::Stage::aligned;

    std::vector<cdouble> spec(static_cast<size_t>(n)), prod(static_cast<size_t>(n_os)), corr(static_cast<size_t>(n_os));
    std::vector<double> corr_mag(static_cast<size_t>(n_os));
    for (int l = 0; l < profiles.n_chan; ++l) {
        if (l == reference) continue;
        std::vector<cdouble> tmp(env[static_cast<size_t>(l)].begin(), env[static_cast<size_t>(l)].end());
        fwd.transform(tmp.data(), tmp.size(), spec.data());
        // corr(lag) = sum_m env_l(m) * env_ref(m - lag); the spectrum product,
        // zero-padded between the halves, interpolates the correlation. The
        // shared Nyquist bin is split to keep the embedding Hermitian.
        std::fill(prod.begin(), prod.end(), cdouble{});
        for (int q = 0; q < n; ++q) {
            cdouble v = spec[static_cast<size_t>(q)] * std::conj(ref_spec[static_cast<size_t>(q)]);
            if (n % 2 == 0 && q == n / 2) {
                prod[static_cast<size_t>(q)] = 0.5 * v;
                prod[static_cast<size_t>(n_os - n / 2)] = 0.5 * v;
            } else {
                int dst = q < n / 2 ? q : q + (n_os - n);
                prod[static_cast<size_t>(dst)] = v;
            }
        }
        bwd_os.transform(prod.data(), prod.size(), corr.data());
        for (int i = 0; i < n_os; ++i) corr_mag[static_cast<size_t>(i)] = corr[static_cast<size_t>(i)].real();
        int imax = static_cast<int>(std::max_element(corr_mag.begin(), corr_mag.end()) - corr_mag.begin());
        double pos = refine_peak_circular(corr_mag, imax);
        double lag_os = pos <= n_os / 2.0 ? pos : pos - n_os;
        double correction = -lag_os / oversample;
        if (!fractional) correction = static_cast<double>(std::lround(correction));
        report.shift_bins[static_cast<size_t>(l)] = correction;
        shift_channel(out, l, correction, fractional);
    }
    return {out, report};
}

Spectrogram spectrogram(const sim::DataCube& cube, int channel, int azimuth, int window_len, int hop) {
    if (channel < 0 || channel >= cube.n_chan || azimuth < 0 || azimuth >= cube.n_az)
        throw_config("spectrogram: channel/azimuth index out of range");
    if (window_len < 2 || window_len > cube.n_fast)
        throw_config("spectrogram: window_len must be in [2, n_samples]");
    if (hop < 1) throw_config("spectrogram: hop must be positive");

    Spectrogram sg;
    sg.n_freq = window_len;
    sg.n_frames = (cube.n_fast - window_len) / hop + 1;
    sg.time_step_s = hop / cube.chirp.fs;
    sg.freq_step_hz = cube.chirp.fs / window_len;
    sg.magnitude.assign(static_cast<size_t>(sg.n_frames) * window_len, 0.0);

    const std::vector<double> win = make_window(Window::hann, window_len);
    fft::Plan plan(window_len, +1);
    std::vector<cdouble> buf(static_cast<size_t>(window_len)), spec(static_cast<size_t>(window_len));
    const cdouble* cell = &cube.samples[cube.idx(0, channel, azimuth)];
    for (int f = 0; f < sg.n_frames; ++f) {
        int n0 = f * hop;
        for (int i = 0; i < window_len; ++i)
            buf[static_cast<size_t>(i)] = cell[n0 + i] * win[static_cast<size_t>(i)];
        plan.transform(buf.data(), buf.size(), spec.data());
        for (int q = 0; q < window_len; ++q)
            sg.magnitude[static_cast<size_t>(f) * window_len + static_cast<size_t>(q)] = std::abs(spec[static_cast<size_t>(q)]);
    }
    return sg;
}

PowerSpectrum power_spectrum(const sim::DataCube& cube, int channel, int azimuth) {
    if (channel < 0 || channel >= cube.n_chan || azimuth < 0 || azimuth >= cube.n_az)
        throw_config("power_spectrum: channel/azimuth index out of range");
    PowerSpectrum ps;
    ps.freq_step_hz = cube.chirp.fs / cube.n_fast;
    fft::Plan plan(cube.n_fast, +1);
    std::vector<cdouble> spec(static_cast<size_t>(cube.n_fast));
    plan.transform(&cube.samples[cube.idx(0, channel, azimuth)], static_cast<size_t>(cube.n_fast), spec.data());
    ps.magnitude.resize(spec.size());
    for (size_t i = 0; i < spec.size(); ++i) ps.magnitude[i] = std::abs(spec[i]);
    return ps;
}

}  // namespace msar::rangeproc
