#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace msar::render {

namespace {

std::FILE* open_or_throw(const std::string& path, const char* mode) {
    std::FILE* f = std::fopen(path.c_str(), mode);
    if (!f) throw_io("cannot create " + path);
    return f;
}

void close_or_throw(std::FILE* f, const std::string& path) {
    if (std::fclose(f) != 0) throw_io("write failed: " + path);
}

}  // namespace

void write_pgm(const std::string& path, const std::vector<double>& mag, int nx, int ny,
               double dyn_range_db) {
    if (static_cast<size_t>(nx) * static_cast<size_t>(ny) != mag.size())
        throw_config("pgm: magnitude size does not match dimensions");
    double peak = 0.0;
    for (double v : mag) peak = std::max(peak, v);
    std::FILE* f = open_or_throw(path, "wb");
    std::fprintf(f, "P5\n%d %d\n255\n", nx, ny);
    std::vector<unsigned char> row(static_cast<size_t>(nx));
    for (int iy = ny - 1; iy >= 0; --iy) {  // top row = largest y
        for (int ix = 0; ix < nx; ++ix) {
            double v = mag[static_cast<size_t>(iy) * nx + static_cast<size_t>(ix)];
            double db = peak > 0.0 ? db20(v / peak) : -dyn_range_db;
            double t = std::clamp(1.0 + db / dyn_range_db, 0.0, 1.0);
            row[static_cast<size_t>(ix)] = static_cast<unsigned char>(std::lround(t * 255.0));
        }
        std::fwrite(row.data(), 1, row.size(), f);
    }
    close_or_throw(f, path);
}

void volume_plane_pgm(const imaging::ImageVolume& vol, int iz, const std::string& path,
                      double dyn_range_db) {
    if (iz < 0 || iz >= static_cast<int>(vol.z_planes.size())) throw_config("pgm: plane index out of range");
    write_pgm(path, vol.plane_magnitude(iz), vol.nx, vol.ny, dyn_range_db);
}

void volume_peak_cuts_csv(const imaging::ImageVolume& vol, int iz, const std::string& x_path,
                          const std::string& y_path) {
    if (iz < 0 || iz >= static_cast<int>(vol.z_planes.size())) throw_config("csv: plane index out of range");
    std::vector<double> mag = vol.plane_magnitude(iz);
    int pix = 0, piy = 0;
    double best = -1.0;
    for (int iy = 0; iy < vol.ny; ++iy)
        for (int ix = 0; ix < vol.nx; ++ix)
            if (mag[static_cast<size_t>(iy) * vol.nx + static_cast<size_t>(ix)] > best) {
                best = mag[static_cast<size_t>(iy) * vol.nx + static_cast<size_t>(ix)];
                pix = ix;
                piy = iy;
            }

    std::FILE* fx = open_or_throw(x_path, "w");
    std::fprintf(fx, "x_m,magnitude,magnitude_db\n");
    for (int ix = 0; ix < vol.nx; ++ix) {
        double v = mag[static_cast<size_t>(piy) * vol.nx + static_cast<size_t>(ix)];
        std::fprintf(fx, "%.9g,%.9g,%.4f\n", vol.x0 + ix * vol.dx, v, best > 0 ? db20(v / best) : -300.0);
    }
    close_or_throw(fx, x_path);

    std::FILE* fy = open_or_throw(y_path, "w");
    std::fprintf(fy, "y_m,magnitude,magnitude_db\n");
    for (int iy = 0; iy < vol.ny; ++iy) {
        double v = mag[static_cast<size_t>(iy) * vol.nx + static_cast<size_t>(pix)];
        std::fprintf(fy, "%.9g,%.9g,%.4f\n", vol.y0 + iy * vol.dy, v, best > 0 ? db20(v / best) : -300.0);
    }
    close_or_throw(fy, y_path);
}

void spectrogram_csv(const rangeproc::Spectrogram& sg, const std::string& path) {
    std::FILE* f = open_or_throw(path, "w");
    double peak = 0.0;
    for (double v : sg.magnitude) peak = std::max(peak, v);
    std::fprintf(f, "time_us");
    for (int q = 0; q < sg.n_freq; ++q) std::fprintf(f, ",f%.6g_hz", q * sg.freq_step_hz);
    std::fprintf(f, "\n");
    for (int t = 0; t < sg.n_frames; ++t) {
        std::fprintf(f, "%.6g", t * sg.time_step_s * 1e6);
        for (int q = 0; q < sg.n_freq; ++q) {
            double v = sg.magnitude[static_cast<size_t>(t) * sg.n_freq + static_cast<size_t>(q)];
            std::fprintf(f, ",%.4f", peak > 0 ? db20(v / peak) : -300.0);
        }
        std::fprintf(f, "\n");
    }
    close_or_throw(f, path);
}

void power_spectrum_csv(const rangeproc::PowerSpectrum& ps, const std::string& path) {
    std::FILE* f = open_or_throw(path, "w");
    double peak = 0.0;
    for (double v : ps.magnitude) peak = std::max(peak, v);
    std::fprintf(f, "freq_hz,magnitude,magnitude_db\n");
    for (size_t q = 0; q < ps.magnitude.size(); ++q)
        std::fprintf(f, "%.9g,%.9g,%.4f\n", static_cast<double>(q) * ps.freq_step_hz, ps.magnitude[q],
                     peak > 0 ? db20(ps.magnitude[q] / peak) : -300.0);
    close_or_throw(f, path);
}

void range_profile_csv(const rangeproc::RangeProfileSet& profiles, int channel, int azimuth,
                       const std::string& path) {
    if (channel < 0 || channel >= profiles.n_chan || azimuth < 0 || azimuth >= profiles.n_az)
        throw_config("csv: channel/azimuth index out of range");
    std::FILE* f = open_or_throw(path, "w");
    double peak = 0.0;
    for (int m = 0; m < profiles.n_bins; ++m)
        peak = std::max(peak, std::abs(profiles.at(m, channel, azimuth)));
    std::fprintf(f, "range_m,magnitude,magnitude_db\n");
    for (int m = 0; m < profiles.n_bins; ++m) {
        double v = std::abs(profiles.at(m, channel, azimuth));
        std::fprintf(f, "%.9g,%.9g,%.4f\n", m * profiles.bin_scale_m, v,
                     peak > 0 ? db20(v / peak) : -300.0);
    }
    close_or_throw(f, path);
}

void ipr_report_csv(const imaging::IprReport& rep, const std::string& path) {
    std::FILE* f = open_or_throw(path, "w");
    std::fprintf(f, "metric,value\n");
    std::fprintf(f, "peak_pos_x_m,%.9g\n", rep.peak_pos_x);
    std::fprintf(f, "peak_pos_y_m,%.9g\n", rep.peak_pos_y);
    std::fprintf(f, "peak_magnitude,%.9g\n", rep.peak_mag);
    std::fprintf(f, "width3db_x_m,%.9g\n", rep.width3db_x);
    std::fprintf(f, "width3db_y_m,%.9g\n", rep.width3db_y);
    std::fprintf(f, "pslr_db,%.4f\n", rep.pslr_db);
    std::fprintf(f, "islr_db,%.4f\n", rep.islr_db);
    close_or_throw(f, path);
}

}  // namespace msar::render
