#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wavesim.hpp"

using namespace msar;
using namespace msar::sim;

namespace {

ChirpConfig paper_chirp(double c = 3e8) {
    ChirpConfig chirp;
    chirp.f0 = 78.8e9 - 3.5997e9 / 2.0;
    chirp.b = 3.5997e9;
    chirp.T = 40e-6;
    chirp.fs = 8e6;
    chirp.n_samples = 320;
    chirp.c = c;
    return chirp;
}

geom::AntennaLayout monostatic_layout() {
    geom::AntennaLayout l;
    l.tx.push_back({0.0, 0.0});
    l.rx.push_back({0.0, 0.0});
    return l;
}

DataCube simulate_single(const Scene& scene, const ChirpConfig& chirp) {
    auto layout = monostatic_layout();
    auto elements = geom::virtual_elements(layout, geom::full_tdm(1, 1));
    auto scan = geom::ApertureScan::make(1, 1e-3, 1, 1e-3);
    return simulate_beat(scene, elements, layout, scan, chirp);
}

}  // namespace

TEST_CASE("wavenumber grid matches the linear chirp relation") {
    ChirpConfig chirp = paper_chirp();
    auto k = wavenumber_grid(chirp);
    REQUIRE(k.size() == 320);
    // start: k = 2*pi*f0/c; with f0 = 77 GHz and c = 3e8 this is 1612.68 rad/m
    ChirpConfig at77 = chirp;
    at77.f0 = 77e9;
    auto k77 = wavenumber_grid(at77);
    CHECK(k77[0] == doctest::Approx(1612.6841).epsilon(1e-6));
    // center frequency 78.8 GHz
    CHECK(chirp.center_frequency() == doctest::Approx(78.8e9).epsilon(1e-12));
    CHECK(chirp.k_center() == doctest::Approx(kTwoPi * 78.8e9 / 3e8).epsilon(1e-12));
    // uniform spacing 2*pi*beta/(c*fs)
    double dk_expected = kTwoPi * chirp.slope() / (chirp.c * chirp.fs);
    for (size_t n = 1; n < k.size(); ++n)
        CHECK(k[n] - k[n - 1] == doctest::Approx(dk_expected).epsilon(1e-9));
}

TEST_CASE("chirp config invariants are enforced") {
    ChirpConfig chirp = paper_chirp();
    CHECK_NOTHROW(chirp.validate());
    ChirpConfig bad = chirp;
    bad.n_samples = 321;  // floor(fs*T) = 320
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = chirp;
    bad.b = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = chirp;
    bad.T = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("empty scene simulates to an all-zero cube") {
    Scene scene;
    auto cube = simulate_single(scene, paper_chirp());
    CHECK(cube.stage == Stage::raw);
    for (const auto& s : cube.samples) CHECK(s == cdouble{0.0, 0.0});
}

TEST_CASE("single boresight reflector with co-located pair: phase is exactly -2 k z") {
    const double z_d = 0.3;
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, z_d, {1.0, 0.0}});
    ChirpConfig chirp = paper_chirp();
    auto cube = simulate_single(scene, chirp);
    auto k = wavenumber_grid(chirp);
    for (int n = 0; n < cube.n_fast; ++n) {
        cdouble expected = std::polar(1.0, -2.0 * k[static_cast<size_t>(n)] * z_d);
        CHECK(std::abs(cube.at(n, 0, 0) - expected) < 1e-12);
    }
}

TEST_CASE("superposition: two-reflector cube equals the sum of singles") {
    ChirpConfig chirp = paper_chirp();
    Scene a, b, both;
    a.reflectors.push_back({0.01, -0.02, 0.31, {1.0, 0.5}});
    b.reflectors.push_back({-0.03, 0.015, 0.28, {-0.7, 0.2}});
    both.reflectors = {a.reflectors[0], b.reflectors[0]};
    auto ca = simulate_single(a, chirp);
    auto cb = simulate_single(b, chirp);
    auto cab = simulate_single(both, chirp);
    double max_rel = 0.0;
    for (size_t i = 0; i < cab.samples.size(); ++i) {
        double diff = std::abs(cab.samples[i] - (ca.samples[i] + cb.samples[i]));
        max_rel = std::max(max_rel, diff / std::max(1.0, std::abs(cab.samples[i])));
    }
    CHECK(max_rel < 1e-12);
}

TEST_CASE("reciprocity: swapping tx and rx positions leaves samples unchanged") {
    ChirpConfig chirp = paper_chirp();
    Scene scene;
    scene.reflectors.push_back({0.02, 0.01, 0.4, {1.0, -0.3}});

    geom::AntennaLayout fwd, rev;
    fwd.tx.push_back({0.004, 0.010});
    fwd.rx.push_back({-0.002, 0.030});
    rev.tx.push_back({-0.002, 0.030});
    rev.rx.push_back({0.004, 0.010});
    auto scan = geom::ApertureScan::make(3, 2e-3, 1, 1e-3);
    auto cf = simulate_beat(scene, geom::virtual_elements(fwd, geom::full_tdm(1, 1)), fwd, scan, chirp);
    auto cr = simulate_beat(scene, geom::virtual_elements(rev, geom::full_tdm(1, 1)), rev, scan, chirp);
    for (size_t i = 0; i < cf.samples.size(); ++i)
        CHECK(std::abs(cf.samples[i] - cr.samples[i]) < 1e-12);
}

TEST_CASE("reflector behind the aperture is a domain error") {
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, -0.1, {1.0, 0.0}});
    CHECK_THROWS_AS(scene.validate(), Error);
    scene.reflectors[0].z = 0.0;
    CHECK_THROWS_AS(scene.validate(), Error);
}

TEST_CASE("channel error injection: identity errors leave the cube unchanged") {
    ChirpConfig chirp = paper_chirp();
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, 0.5, {1.0, 0.0}});
    auto cube = simulate_single(scene, chirp);
    ChannelError err;
    err.gain = {cdouble{1.0, 0.0}};
    err.range_m = {0.0};
    auto injected = inject_channel_errors(cube, err);
    for (size_t i = 0; i < cube.samples.size(); ++i) CHECK(injected.samples[i] == cube.samples[i]);
}

TEST_CASE("channel error injection: pure gain doubles magnitude, keeps phase") {
    ChirpConfig chirp = paper_chirp();
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, 0.5, {1.0, 0.0}});
    auto cube = simulate_single(scene, chirp);
    ChannelError err;
    err.gain = {cdouble{2.0, 0.0}};
    err.range_m = {0.0};
    auto injected = inject_channel_errors(cube, err);
    for (size_t i = 0; i < cube.samples.size(); ++i) {
        CHECK(std::abs(injected.samples[i]) == doctest::Approx(2.0 * std::abs(cube.samples[i])).epsilon(1e-12));
        CHECK(std::arg(injected.samples[i]) == doctest::Approx(std::arg(cube.samples[i])).epsilon(1e-9));
    }
}

TEST_CASE("error injection is exactly invertible by the conjugate correction") {
    ChirpConfig chirp = paper_chirp();
    Scene scene;
    scene.reflectors.push_back({0.01, 0.0, 0.45, {0.8, 0.1}});
    auto cube = simulate_single(scene, chirp);
    ChannelError err;
    err.gain = {std::polar(1.7, 0.9)};
    err.range_m = {0.013};
    auto injected = inject_channel_errors(cube, err);
    // conjugate correction: divide by g and remove the range ramp
    ChannelError inverse;
    inverse.gain = {1.0 / err.gain[0]};
    inverse.range_m = {-err.range_m[0]};
    auto restored = inject_channel_errors(injected, inverse);
    double max_rel = 0.0;
    for (size_t i = 0; i < cube.samples.size(); ++i)
        max_rel = std::max(max_rel, std::abs(restored.samples[i] - cube.samples[i]) /
                                        std::max(1e-30, std::abs(cube.samples[i])));
    CHECK(max_rel < 1e-12);
}

TEST_CASE("error injection requires a raw cube and matching channel count") {
    ChirpConfig chirp = paper_chirp();
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, 0.5, {1.0, 0.0}});
    auto cube = simulate_single(scene, chirp);
    ChannelError wrong;
    wrong.gain = {cdouble{1.0, 0.0}, cdouble{1.0, 0.0}};
    wrong.range_m = {0.0, 0.0};
    CHECK_THROWS_AS(inject_channel_errors(cube, wrong), Error);
}

TEST_CASE("nonlinearity injection: zero polynomial is the identity") {
    ChirpConfig chirp = paper_chirp();
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, 0.6, {1.0, 0.0}});
    auto cube = simulate_single(scene, chirp);
    NonlinearityModel model;
    model.coeffs.assign(1, {});
    CHECK(model.is_zero());
    auto injected = inject_nonlinearity(cube, model);
    for (size_t i = 0; i < cube.samples.size(); ++i) CHECK(injected.samples[i] == cube.samples[i]);
}

TEST_CASE("scene file parsing round-trips reflectors") {
    std::istringstream in("# scene\n0.01 -0.02 0.30 1.0 0.5\n0 0 8.95 2 0\n");
    auto scene = Scene::parse(in, "test");
    REQUIRE(scene.reflectors.size() == 2);
    CHECK(scene.reflectors[0].x == 0.01);
    CHECK(scene.reflectors[0].p == cdouble{1.0, 0.5});
    CHECK(scene.reflectors[1].z == 8.95);
    std::istringstream bad("0.01 -0.02\n");
    CHECK_THROWS_AS(Scene::parse(bad, "test"), Error);
}

TEST_CASE("cube axes fold the elevation scan into the channel rows") {
    // 86 virtual elements in y times 197 scan steps in x gives the 86x197
    // effective 2D aperture; a 3-step y scan would triple the rows.
    geom::AntennaLayout layout =
        geom::AntennaLayout::load(std::string(MSAR_TEST_DATA_DIR) + "/tidep01012_layout.txt");
    auto elements = geom::dedupe_elements(geom::virtual_elements(layout, geom::full_tdm(12, 16)),
                                          (3e8 / 78.8e9) / 100.0);
    REQUIRE(elements.size() == 86);
    auto scan = geom::ApertureScan::make(197, 1e-3, 1, 1e-3);
    auto axes = build_cube_axes(elements, layout, scan);
    CHECK(axes.rows.size() == 86);
    CHECK(axes.azimuth_x.size() == 197);

    auto scan3 = geom::ApertureScan::make(197, 1e-3, 3, 2e-3);
    auto axes3 = build_cube_axes(elements, layout, scan3);
    CHECK(axes3.rows.size() == 3 * 86);
}

TEST_CASE("deterministic noise: same seed gives identical cubes") {
    ChirpConfig chirp = paper_chirp();
    chirp.n_samples = 64;
    chirp.fs = 1.6e6;
    Scene scene;
    scene.reflectors.push_back({0.0, 0.0, 0.5, {1.0, 0.0}});
    SimulateOptions opts;
    opts.noise_snr_db = 20.0;
    opts.seed = 99;
    auto layout = monostatic_layout();
    auto elements = geom::virtual_elements(layout, geom::full_tdm(1, 1));
    auto scan = geom::ApertureScan::make(4, 1e-3, 1, 1e-3);
    auto c1 = simulate_beat(scene, elements, layout, scan, chirp, opts);
    auto c2 = simulate_beat(scene, elements, layout, scan, chirp, opts);
    CHECK(c1.samples == c2.samples);
    SimulateOptions other = opts;
    other.seed = 100;
    auto c3 = simulate_beat(scene, elements, layout, scan, chirp, other);
    CHECK(c1.samples != c3.samples);
}
