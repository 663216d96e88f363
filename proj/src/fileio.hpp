#pragma once

// Binary cube/volume containers and the plain-text calibration profile.
//
// Cube files hold either a fast-time data cube or a range-profile set,
// distinguished by the stage tag. Payloads are little-endian interleaved
// complex float32, fast-time fastest. Headers embed the chirp and geometry
// hashes; loading refuses data whose hashes do not match the active config.

#include <optional>
#include <string>

#include "calib.hpp"
#include "config.hpp"
#include "rangeproc.hpp"
#include "wavesim.hpp"

namespace msar::io {

// Geometry/chirp context a cube file is validated against and rehydrated from.
struct CubeContext {
    sim::ChirpConfig chirp;
    sim::CubeAxes axes;

    static CubeContext from_config(const config::RunConfig& cfg);
};

void save_cube(const sim::DataCube& cube, const std::string& path);
void save_profiles(const rangeproc::RangeProfileSet& profiles, const std::string& path);

struct LoadedCube {
    std::optional<sim::DataCube> cube;
    std::optional<rangeproc::RangeProfileSet> profiles;

    sim::Stage stage() const;
};

LoadedCube load_cube_any(const std::string& path, const CubeContext& ctx);

void save_volume(const imaging::ImageVolume& vol, const std::string& path);
imaging::ImageVolume load_volume(const std::string& path);

void save_profile(const calib::CalibrationProfile& profile, const std::string& path);
calib::CalibrationProfile load_profile(const std::string& path);

bool is_volume_file(const std::string& path);

}  // namespace msar::io
