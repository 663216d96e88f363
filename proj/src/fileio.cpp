#include "fileio.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace msar::io {

namespace {

constexpr char kCubeMagic[8] = {'M', 'S', 'A', 'R', 'C', 'U', 'B', 'E'};
constexpr char kVolumeMagic[8] = {'M', 'S', 'A', 'R', 'V', 'O', 'L', 'M'};
constexpr uint32_t kFormatVersion = 1;

struct CubeHeader {
    char magic[8];
    uint32_t version;
    uint32_t stage;
    uint64_t n_fast;
    uint64_t n_chan;
    uint64_t n_az;
    uint64_t chirp_hash;
    uint64_t geom_hash;
    double bin_scale_m;
    uint32_t n_samples_src;
    uint32_t window;
};
static_assert(sizeof(CubeHeader) == 72);

void write_exact(std::ofstream& out, const void* data, size_t len, const std::string& path) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) throw_io("write failed: " + path);
}

void read_exact(std::ifstream& in, void* data, size_t len, const std::string& path) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
    if (in.gcount() != static_cast<std::streamsize>(len)) throw_io("truncated file: " + path);
}

void write_payload(std::ofstream& out, const std::vector<cdouble>& samples, const std::string& path) {
    std::vector<float> buf(samples.size() * 2);
    for (size_t i = 0; i < samples.size(); ++i) {
        buf[2 * i] = static_cast<float>(samples[i].real());
        buf[2 * i + 1] = static_cast<float>(samples[i].imag());
    }
    write_exact(out, buf.data(), buf.size() * sizeof(float), path);
}

void read_payload(std::ifstream& in, std::vector<cdouble>& samples, size_t count, const std::string& path) {
    std::vector<float> buf(count * 2);
    read_exact(in, buf.data(), buf.size() * sizeof(float), path);
    samples.resize(count);
    for (size_t i = 0; i < count; ++i) samples[i] = cdouble{buf[2 * i], buf[2 * i + 1]};
}

void save_cube_file(const CubeHeader& h, const std::vector<cdouble>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot create " + path);
    write_exact(out, &h, sizeof h, path);
    write_payload(out, samples, path);
}

}  // namespace

CubeContext CubeContext::from_config(const config::RunConfig& cfg) {
    CubeContext ctx;
    ctx.chirp = cfg.chirp;
    ctx.chirp.validate();
    auto layout = cfg.load_layout();
    auto elements = cfg.build_elements(layout);
    ctx.axes = sim::build_cube_axes(elements, layout, cfg.scan());
    return ctx;
}

void save_cube(const sim::DataCube& cube, const std::string& path) {
    CubeHeader h{};
    std::memcpy(h.magic, kCubeMagic, sizeof h.magic);
    h.version = kFormatVersion;
    h.stage = static_cast<uint32_t>(cube.stage);
    h.n_fast = static_cast<uint64_t>(cube.n_fast);
    h.n_chan = static_cast<uint64_t>(cube.n_chan);
    h.n_az = static_cast<uint64_t>(cube.n_az);
    h.chirp_hash = cube.chirp.hash();
    h.geom_hash = cube.axes.hash();
    h.bin_scale_m = 0.0;
    h.n_samples_src = static_cast<uint32_t>(cube.n_fast);
    h.window = 0;
    save_cube_file(h, cube.samples, path);
}

void save_profiles(const rangeproc::RangeProfileSet& profiles, const std::string& path) {
    CubeHeader h{};
    std::memcpy(h.magic, kCubeMagic, sizeof h.magic);
    h.version = kFormatVersion;
    h.stage = static_cast<uint32_t>(profiles.stage);
    h.n_fast = static_cast<uint64_t>(profiles.n_bins);
    h.n_chan = static_cast<uint64_t>(profiles.n_chan);
    h.n_az = static_cast<uint64_t>(profiles.n_az);
    h.chirp_hash = profiles.chirp.hash();
    h.geom_hash = profiles.axes.hash();
    h.bin_scale_m = profiles.bin_scale_m;
    h.n_samples_src = static_cast<uint32_t>(profiles.n_samples_src);
    h.window = static_cast<uint32_t>(profiles.window);
    save_cube_file(h, profiles.bins, path);
}

sim::Stage LoadedCube::stage() const {
    if (cube) return cube->stage;
    if (profiles) return profiles->stage;
    throw_io("empty cube container");
}

LoadedCube load_cube_any(const std::string& path, const CubeContext& ctx) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open " + path);
    CubeHeader h{};
    read_exact(in, &h, sizeof h, path);
    if (std::memcmp(h.magic, kCubeMagic, sizeof h.magic) != 0) throw_io(path + ": not a mimosar cube file");
    if (h.version != kFormatVersion) throw_io(path + ": unsupported cube format version");
    if (h.chirp_hash != ctx.chirp.hash())
        throw_io(path + ": chirp hash mismatch (file written with a different chirp config)");
    if (h.geom_hash != ctx.axes.hash())
        throw_io(path + ": geometry hash mismatch (file written with a different layout/scan)");
    if (h.n_chan != ctx.axes.rows.size() || h.n_az != ctx.axes.azimuth_x.size())
        throw_io(path + ": dimensions do not match the active geometry");

    const size_t count = static_cast<size_t>(h.n_fast) * h.n_chan * h.n_az;
    LoadedCube loaded;
    auto stage = static_cast<sim::Stage>(h.stage);
    if (stage == sim::Stage::range_compressed || stage == sim::Stage::aligned ||
        (stage == sim::Stage::calibrated && h.bin_scale_m > 0.0)) {
        rangeproc::RangeProfileSet p;
        p.n_bins = static_cast<int>(h.n_fast);
        p.n_chan = static_cast<int>(h.n_chan);
        p.n_az = static_cast<int>(h.n_az);
        p.stage = stage;
        p.bin_scale_m = h.bin_scale_m;
        p.n_samples_src = static_cast<int>(h.n_samples_src);
        p.window = static_cast<rangeproc::Window>(h.window);
        p.chirp = ctx.chirp;
        p.axes = ctx.axes;
        read_payload(in, p.bins, count, path);
        loaded.profiles = std::move(p);
    } else {
        sim::DataCube c;
        c.n_fast = static_cast<int>(h.n_fast);
        c.n_chan = static_cast<int>(h.n_chan);
        c.n_az = static_cast<int>(h.n_az);
        c.stage = stage;
        c.chirp = ctx.chirp;
        c.axes = ctx.axes;
        read_payload(in, c.samples, count, path);
        loaded.cube = std::move(c);
    }
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0) throw_io(path + ": trailing bytes after payload");
    return loaded;
}

void save_volume(const imaging::ImageVolume& vol, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_io("cannot create " + path);
    write_exact(out, kVolumeMagic, sizeof kVolumeMagic, path);
    uint32_t version = kFormatVersion, reserved = 0;
    write_exact(out, &version, sizeof version, path);
    write_exact(out, &reserved, sizeof reserved, path);
    uint64_t nx = static_cast<uint64_t>(vol.nx), ny = static_cast<uint64_t>(vol.ny),
             nz = vol.z_planes.size();
    write_exact(out, &nx, sizeof nx, path);
    write_exact(out, &ny, sizeof ny, path);
    write_exact(out, &nz, sizeof nz, path);
    double axes[4] = {vol.x0, vol.dx, vol.y0, vol.dy};
    write_exact(out, axes, sizeof axes, path);
    write_exact(out, vol.z_planes.data(), vol.z_planes.size() * sizeof(double), path);
    write_payload(out, vol.voxels, path);
}

imaging::ImageVolume load_volume(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open " + path);
    char magic[8];
    read_exact(in, magic, sizeof magic, path);
    if (std::memcmp(magic, kVolumeMagic, sizeof magic) != 0) throw_io(path + ": not a mimosar volume file");
    uint32_t version, reserved;
    read_exact(in, &version, sizeof version, path);
    read_exact(in, &reserved, sizeof reserved, path);
    if (version != kFormatVersion) throw_io(path + ": unsupported volume format version");
    uint64_t nx, ny, nz;
    read_exact(in, &nx, sizeof nx, path);
    read_exact(in, &ny, sizeof ny, path);
    read_exact(in, &nz, sizeof nz, path);
    imaging::ImageVolume vol;
    vol.nx = static_cast<int>(nx);
    vol.ny = static_cast<int>(ny);
    double axes[4];
    read_exact(in, axes, sizeof axes, path);
    vol.x0 = axes[0];
    vol.dx = axes[1];
    vol.y0 = axes[2];
    vol.dy = axes[3];
    vol.z_planes.resize(nz);
    read_exact(in, vol.z_planes.data(), nz * sizeof(double), path);
    read_payload(in, vol.voxels, static_cast<size_t>(nx) * ny * nz, path);
    return vol;
}

bool is_volume_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    return in.gcount() == sizeof magic && std::memcmp(magic, kVolumeMagic, sizeof magic) == 0;
}

void save_profile(const calib::CalibrationProfile& profile, const std::string& path) {
    profile.validate();
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw_io("cannot create " + path);
    std::fprintf(f, "mimosar-profile v1\n");
    std::fprintf(f, "channels %d\n", profile.n_chan);
    std::fprintf(f, "reference %d\n", profile.reference);
    std::fprintf(f, "reflector %.17g %.17g %.17g\n", profile.reflector[0], profile.reflector[1],
                 profile.reflector[2]);
    std::fprintf(f, "k_c %.17g\n", profile.k_c);
    std::fprintf(f, "bin_scale_m %.17g\n", profile.bin_scale_m);
    std::fprintf(f, "chirp_hash %" PRIu64 "\n", profile.chirp_hash);
    std::fprintf(f, "geom_hash %" PRIu64 "\n", profile.geom_hash);
    for (int l = 0; l < profile.n_chan; ++l)
        std::fprintf(f, "%d %.17g %.17g %.17g %.17g\n", l, profile.phase[static_cast<size_t>(l)].real(),
                     profile.phase[static_cast<size_t>(l)].imag(), profile.gain[static_cast<size_t>(l)],
                     profile.shift_bins[static_cast<size_t>(l)]);
    if (profile.weights) {
        std::fprintf(f, "weights\n");
        for (int l = 0; l < profile.n_chan; ++l)
            std::fprintf(f, "%d %.17g %.17g\n", l, (*profile.weights)[static_cast<size_t>(l)].real(),
                         (*profile.weights)[static_cast<size_t>(l)].imag());
    }
    if (std::fclose(f) != 0) throw_io("write failed: " + path);
}

calib::CalibrationProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "mimosar-profile v1")
        throw_io(path + ": not a mimosar profile file");

    calib::CalibrationProfile p;
    auto expect_kv = [&](const char* key) -> std::istringstream {
        if (!std::getline(in, line)) throw_io(path + ": truncated header");
        std::istringstream ls(line);
        std::string k;
        ls >> k;
        if (k != key) throw_io(path + ": expected header key '" + key + "', got '" + k + "'");
        return ls;
    };
    expect_kv("channels") >> p.n_chan;
    expect_kv("reference") >> p.reference;
    {
        auto ls = expect_kv("reflector");
        ls >> p.reflector[0] >> p.reflector[1] >> p.reflector[2];
    }
    expect_kv("k_c") >> p.k_c;
    expect_kv("bin_scale_m") >> p.bin_scale_m;
    expect_kv("chirp_hash") >> p.chirp_hash;
    expect_kv("geom_hash") >> p.geom_hash;
    if (p.n_chan < 1) throw_io(path + ": invalid channel count");

    p.phase.resize(static_cast<size_t>(p.n_chan));
    p.gain.resize(static_cast<size_t>(p.n_chan));
    p.shift_bins.resize(static_cast<size_t>(p.n_chan));
    for (int i = 0; i < p.n_chan; ++i) {
        if (!std::getline(in, line)) throw_io(path + ": truncated channel table");
        std::istringstream ls(line);
        int l;
        double re, im, gain, shift;
        if (!(ls >> l >> re >> im >> gain >> shift) || l != i)
            throw_io(path + ": malformed channel row " + std::to_string(i));
        p.phase[static_cast<size_t>(i)] = {re, im};
        p.gain[static_cast<size_t>(i)] = gain;
        p.shift_bins[static_cast<size_t>(i)] = shift;
    }
    if (std::getline(in, line) && line == "weights") {
        std::vector<cdouble> w(static_cast<size_t>(p.n_chan));
        for (int i = 0; i < p.n_chan; ++i) {
            if (!std::getline(in, line)) throw_io(path + ": truncated weight block");
            std::istringstream ls(line);
            int l;
            double re, im;
            if (!(ls >> l >> re >> im) || l != i) throw_io(path + ": malformed weight row " + std::to_string(i));
            w[static_cast<size_t>(i)] = {re, im};
        }
        p.weights = std::move(w);
    }
    p.validate();
    return p;
}

}  // namespace msar::io
