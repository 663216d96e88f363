#pragma once

// dB-scaled grayscale PGM renders and CSV exports for planes, cuts and
// diagnostics. CSV is the canonical machine-readable output.

#include <string>
#include <vector>

#include "common.hpp"
#include "imaging.hpp"
#include "rangeproc.hpp"

namespace msar::render {

// P5 grayscale; magnitudes normalized to the peak and mapped over
// [-dyn_range_db, 0] dB.
void write_pgm(const std::string& path, const std::vector<double>& mag, int nx, int ny,
               double dyn_range_db = 40.0);

void volume_plane_pgm(const imaging::ImageVolume& vol, int iz, const std::string& path,
                      double dyn_range_db = 40.0);

// Cuts through the plane peak: position_m, magnitude, magnitude_db rows.
void volume_peak_cuts_csv(const imaging::ImageVolume& vol, int iz, const std::string& x_path,
                          const std::string& y_path);

void spectrogram_csv(const rangeproc::Spectrogram& sg, const std::string& path);
void power_spectrum_csv(const rangeproc::PowerSpectrum& ps, const std::string& path);

void range_profile_csv(const rangeproc::RangeProfileSet& profiles, int channel, int azimuth,
                       const std::string& path);

void ipr_report_csv(const imaging::IprReport& rep, const std::string& path);

}  // namespace msar::render
