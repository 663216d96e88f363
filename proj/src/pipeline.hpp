#pragma once

// Config-driven composition of the processing chain. The C API and CLI sit
// on top of these entry points.

#include <optional>
#include <utility>

#include "calib.hpp"
#include "config.hpp"
#include "fileio.hpp"
#include "imaging.hpp"

namespace msar::pipeline {

// Scene -> raw cube, with optional injected channel errors, chirp
// non-linearity and noise per the config.
sim::DataCube simulate(const config::RunConfig& cfg);

sim::DataCube compensate(const config::RunConfig& cfg, const sim::DataCube& cube);

rangeproc::RangeProfileSet compress(const config::RunConfig& cfg, const sim::DataCube& cube);

std::pair<rangeproc::RangeProfileSet, rangeproc::AlignmentReport> align(
    const config::RunConfig& cfg, const rangeproc::RangeProfileSet& profiles);

// Full estimation chain from a calibration cube: [compensate] -> compress ->
// align -> estimate (+ residual weights when configured).
calib::CalibrationProfile calibrate(const config::RunConfig& cfg, const sim::DataCube& cube);

// Full imaging chain from a fast-time cube: [compensate] -> [apply profile]
// -> per plane: mono_transform -> compress -> rma (or bp on the aperture
// grid).
imaging::ImageVolume reconstruct(const config::RunConfig& cfg, const sim::DataCube& cube,
                                 const calib::CalibrationProfile* profile);

void set_threads(int n);

}  // namespace msar::pipeline
