#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mimosar/mimosar.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("msar_capi_" +
                std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// 4 co-located monostatic pairs along y.
const char* kLayout =
    "tx 0 0.0 0.0\n"
    "tx 1 0.0 1.9\n"
    "tx 2 0.0 3.8\n"
    "tx 3 0.0 5.7\n"
    "rx 0 0.0 0.0\n"
    "rx 1 0.0 1.9\n"
    "rx 2 0.0 3.8\n"
    "rx 3 0.0 5.7\n";

std::string capi_config() {
    return "[chirp]\n"
           "f0 = 77.00015 GHz\n"
           "b = 3.5997 GHz\n"
           "T = 40 us\n"
           "fs = 8 MHz\n"
           "n_samples = 320\n"
           "c = 3e8 m/s\n"
           "[geometry]\n"
           "layout = layout.txt\n"
           "tdm = 0:0,1:1,2:2,3:3\n"
           "dedupe = true\n"
           "[scan]\n"
           "x_count = 4\n"
           "x_step = 1 mm\n"
           "y_count = 1\n"
           "y_step = 1 mm\n"
           "[scene]\n"
           "file = scene.txt\n"
           "[calibration]\n"
           "reflector = 0 m, 0 m, 2 m\n"
           "reference = 0\n"
           "model_phase_division = true\n"
           "[errors]\n"
           "enabled = false\n"
           "seed = 11\n"
           "reference_clean = true\n"
           "[imaging]\n"
           "algorithm = rma\n"
           "z_planes = 50 cm\n"
           "[output]\n"
           "dir = out\n"
           "seed = 3\n";
}

}  // namespace

TEST_CASE("capi: end-to-end simulate, process, calibrate, reconstruct, analyze") {
    TempDir tmp;
    write_file(tmp.file("layout.txt"), kLayout);
    write_file(tmp.file("scene.txt"), "0 0 0.5 1 0\n");
    write_file(tmp.file("cal_scene.txt"), "0 0 2.0 1 0\n");
    write_file(tmp.file("run.ini"), capi_config());

    msar_config* cfg = nullptr;
    REQUIRE(msar_config_load(tmp.file("run.ini").c_str(), &cfg) == MSAR_OK);

    // simulate the target scene
    msar_cube* cube = nullptr;
    REQUIRE(msar_simulate(cfg, &cube) == MSAR_OK);
    CHECK(msar_cube_stage(cube) == 0);
    uint64_t nf = 0, nc = 0, na = 0;
    REQUIRE(msar_cube_dims(cube, &nf, &nc, &na) == MSAR_OK);
    CHECK(nf == 320);
    CHECK(nc == 4);
    CHECK(na == 4);

    // cube file round trip
    REQUIRE(msar_cube_save(cube, tmp.file("cube.bin").c_str()) == MSAR_OK);
    msar_cube* loaded = nullptr;
    REQUIRE(msar_cube_load(cfg, tmp.file("cube.bin").c_str(), &loaded) == MSAR_OK);
    CHECK(msar_cube_stage(loaded) == 0);
    msar_cube_free(loaded);

    // compress + align
    msar_cube* profiles = nullptr;
    REQUIRE(msar_range_compress(cfg, cube, &profiles) == MSAR_OK);
    CHECK(msar_cube_stage(profiles) == 2);
    std::vector<double> shifts(nc, -1.0);
    msar_cube* aligned = nullptr;
    REQUIRE(msar_range_align(cfg, profiles, &aligned, shifts.data()) == MSAR_OK);
    CHECK(msar_cube_stage(aligned) == 3);
    CHECK(shifts[0] == 0.0);

    // calibrate on the corner-reflector scene
    REQUIRE(msar_config_set(cfg, "scene.file", "cal_scene.txt") == MSAR_OK);
    msar_cube* cal_cube = nullptr;
    REQUIRE(msar_simulate(cfg, &cal_cube) == MSAR_OK);
    msar_cal* cal = nullptr;
    REQUIRE(msar_calibrate(cfg, cal_cube, &cal) == MSAR_OK);
    REQUIRE(msar_cal_save(cal, tmp.file("profile.txt").c_str()) == MSAR_OK);
    msar_cal* cal_loaded = nullptr;
    REQUIRE(msar_cal_load(tmp.file("profile.txt").c_str(), &cal_loaded) == MSAR_OK);

    // apply to the raw cube, reconstruct, analyze, render
    msar_cube* calibrated = nullptr;
    REQUIRE(msar_apply_calibration(cal_loaded, cube, &calibrated) == MSAR_OK);
    CHECK(msar_cube_stage(calibrated) == 4);

    msar_volume* vol = nullptr;
    REQUIRE(msar_reconstruct(cfg, cube, cal_loaded, &vol) == MSAR_OK);
    uint64_t nx = 0, ny = 0, nz = 0;
    REQUIRE(msar_volume_dims(vol, &nx, &ny, &nz) == MSAR_OK);
    CHECK(nx == 4);
    CHECK(ny == 4);
    CHECK(nz == 1);
    REQUIRE(msar_volume_save(vol, tmp.file("vol.bin").c_str()) == MSAR_OK);
    msar_volume* vol_loaded = nullptr;
    REQUIRE(msar_volume_load(tmp.file("vol.bin").c_str(), &vol_loaded) == MSAR_OK);

    msar_ipr_report rep{};
    REQUIRE(msar_volume_ipr(vol_loaded, 0, &rep) == MSAR_OK);
    CHECK(rep.peak_magnitude > 0.0);

    msar_ipr_report range_rep{};
    REQUIRE(msar_profiles_range_ipr(profiles, 0, 0, &range_rep) == MSAR_OK);
    CHECK(range_rep.peak_pos_x_m == doctest::Approx(0.5).epsilon(0.02));
    CHECK(range_rep.width3db_x_m == doctest::Approx(0.037086).epsilon(0.05));

    REQUIRE(msar_volume_render_pgm(vol, 0, 40.0, tmp.file("plane.pgm").c_str()) == MSAR_OK);
    REQUIRE(msar_volume_peak_cuts_csv(vol, 0, tmp.file("x.csv").c_str(),
                                      tmp.file("y.csv").c_str()) == MSAR_OK);
    REQUIRE(msar_spectrogram_csv(cube, 0, 0, 64, 16, tmp.file("sg.csv").c_str()) == MSAR_OK);
    REQUIRE(msar_power_spectrum_csv(cube, 0, 0, tmp.file("ps.csv").c_str()) == MSAR_OK);
    REQUIRE(msar_range_profile_csv(profiles, 0, 0, tmp.file("rp.csv").c_str()) == MSAR_OK);

    // PGM header sanity
    std::ifstream pgm(tmp.file("plane.pgm"), std::ios::binary);
    std::string magic;
    pgm >> magic;
    CHECK(magic == "P5");

    msar_volume_free(vol_loaded);
    msar_volume_free(vol);
    msar_cube_free(calibrated);
    msar_cal_free(cal_loaded);
    msar_cal_free(cal);
    msar_cube_free(cal_cube);
    msar_cube_free(aligned);
    msar_cube_free(profiles);
    msar_cube_free(cube);
    msar_config_free(cfg);
}

TEST_CASE("capi: status codes and error messages") {
    TempDir tmp;

    // null arguments
    CHECK(msar_config_load(nullptr, nullptr) == MSAR_ERR_CONFIG);
    CHECK(std::strlen(msar_last_error()) > 0);

    // missing config file
    msar_config* cfg = nullptr;
    CHECK(msar_config_load(tmp.file("absent.ini").c_str(), &cfg) == MSAR_ERR_IO);

    // bad override on a real config
    write_file(tmp.file("layout.txt"), kLayout);
    write_file(tmp.file("scene.txt"), "0 0 0.5 1 0\n");
    write_file(tmp.file("run.ini"), capi_config());
    REQUIRE(msar_config_load(tmp.file("run.ini").c_str(), &cfg) == MSAR_OK);
    CHECK(msar_config_set(cfg, "chirp.b", "3.5997") == MSAR_ERR_CONFIG);  // missing unit
    CHECK(msar_config_set(cfg, "bogus.key", "1") == MSAR_ERR_CONFIG);

    // wrong-type operand: range_align needs profiles, not a raw cube
    msar_cube* cube = nullptr;
    REQUIRE(msar_simulate(cfg, &cube) == MSAR_OK);
    msar_cube* out = nullptr;
    CHECK(msar_range_align(cfg, cube, &out, nullptr) == MSAR_ERR_CONFIG);

    // calibration failure surfaces as MSAR_ERR_CALIBRATION: no dominant peak
    // anywhere (empty scene)
    write_file(tmp.file("empty.txt"), "\n");
    REQUIRE(msar_config_set(cfg, "scene.file", "empty.txt") == MSAR_OK);
    msar_cube* empty_cube = nullptr;
    REQUIRE(msar_simulate(cfg, &empty_cube) == MSAR_OK);
    msar_cal* cal = nullptr;
    CHECK(msar_calibrate(cfg, empty_cube, &cal) == MSAR_ERR_CALIBRATION);
    CHECK(std::strlen(msar_last_error()) > 0);

    // volume load on a non-volume file
    msar_volume* vol = nullptr;
    CHECK(msar_volume_load(tmp.file("run.ini").c_str(), &vol) == MSAR_ERR_IO);

    msar_cube_free(empty_cube);
    msar_cube_free(cube);
    msar_config_free(cfg);
}

TEST_CASE("capi: determinism - same config and seed give identical cube files") {
    TempDir tmp;
    write_file(tmp.file("layout.txt"), kLayout);
    write_file(tmp.file("scene.txt"), "0 0 0.5 1 0\n0.01 0 0.6 0.5 0.5\n");
    write_file(tmp.file("run.ini"), capi_config());
    msar_config* cfg = nullptr;
    REQUIRE(msar_config_load(tmp.file("run.ini").c_str(), &cfg) == MSAR_OK);
    REQUIRE(msar_config_set(cfg, "errors.enabled", "true") == MSAR_OK);

    for (int run = 0; run < 2; ++run) {
        msar_cube* cube = nullptr;
        REQUIRE(msar_simulate(cfg, &cube) == MSAR_OK);
        REQUIRE(msar_cube_save(cube, tmp.file("cube" + std::to_string(run) + ".bin").c_str()) == MSAR_OK);
        msar_cube_free(cube);
    }
    std::ifstream a(tmp.file("cube0.bin"), std::ios::binary), b(tmp.file("cube1.bin"), std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
    msar_config_free(cfg);
}
