// mimosar command-line front end. Drives the shared library through the
// public C API only; one declarative config file plus flag overrides runs
// every stage.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mimosar/mimosar.h"

namespace {

int exit_code_for(msar_status s) {
    switch (s) {
        case MSAR_OK: return 0;
        case MSAR_ERR_CONFIG:
        case MSAR_ERR_DOMAIN:
        case MSAR_ERR_IO: return 2;
        case MSAR_ERR_CALIBRATION: return 3;
        case MSAR_ERR_ANALYSIS: return 4;
        case MSAR_ERR_RUNTIME: return 1;
    }
    return 1;
}

[[noreturn]] void fail(msar_status s) {
    std::fprintf(stderr, "error: %s\n", msar_last_error());
    std::exit(exit_code_for(s));
}

void check(msar_status s) {
    if (s != MSAR_OK) fail(s);
}

struct ConfigDeleter { void operator()(msar_config* p) const { msar_config_free(p); } };
struct CubeDeleter { void operator()(msar_cube* p) const { msar_cube_free(p); } };
struct CalDeleter { void operator()(msar_cal* p) const { msar_cal_free(p); } };
struct VolumeDeleter { void operator()(msar_volume* p) const { msar_volume_free(p); } };

using ConfigPtr = std::unique_ptr<msar_config, ConfigDeleter>;
using CubePtr = std::unique_ptr<msar_cube, CubeDeleter>;
using CalPtr = std::unique_ptr<msar_cal, CalDeleter>;
using VolumePtr = std::unique_ptr<msar_volume, VolumeDeleter>;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;  // section.key=value
    std::string output_dir;              // flag-level override
    int threads = -1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* opt = cmd->add_option("-c,--config", args.config_path, "run configuration file");
    if (config_required) opt->required();
    cmd->add_option("--set", args.overrides, "override a config key: section.key=value")
        ->type_name("KEY=VALUE");
    cmd->add_option("--output-dir", args.output_dir, "output directory (overrides config and env)");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware parallelism)");
    cmd->add_option("--seed", args.seed, "override output.seed");
}

ConfigPtr load_config(const CommonArgs& args) {
    msar_config* cfg = nullptr;
    check(msar_config_load(args.config_path.c_str(), &cfg));
    ConfigPtr ptr(cfg);
    for (const auto& ov : args.overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n", ov.c_str());
            std::exit(2);
        }
        check(msar_config_set(ptr.get(), ov.substr(0, eq).c_str(), ov.substr(eq + 1).c_str()));
    }
    if (args.seed >= 0)
        check(msar_config_set(ptr.get(), "output.seed", std::to_string(args.seed).c_str()));
    if (args.threads >= 0) {
        check(msar_config_set(ptr.get(), "output.threads", std::to_string(args.threads).c_str()));
        msar_set_threads(args.threads);
    }
    return ptr;
}

std::string resolve_output_dir(const CommonArgs& args, const char* config_dir_hint) {
    if (!args.output_dir.empty()) return args.output_dir;
    if (const char* env = std::getenv("MIMOSAR_OUTPUT_DIR"); env && *env) return env;
    return config_dir_hint && *config_dir_hint ? config_dir_hint : "out";
}

std::string output_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

CubePtr load_cube(const ConfigPtr& cfg, const std::string& path) {
    msar_cube* cube = nullptr;
    check(msar_cube_load(cfg.get(), path.c_str(), &cube));
    return CubePtr(cube);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mimosar - near-field virtual MIMO-SAR imaging toolkit"};
    app.require_subcommand(1);

    // simulate
    CommonArgs sim_args;
    std::string sim_out;
    auto* sim_cmd = app.add_subcommand("simulate", "synthesize a beat-signal cube from the configured scene");
    add_common(sim_cmd, sim_args);
    sim_cmd->add_option("-o,--out", sim_out, "cube file (default <outdir>/cube.bin)");

    // calibrate
    CommonArgs cal_args;
    std::string cal_in, cal_out;
    auto* cal_cmd = app.add_subcommand("calibrate", "estimate a calibration profile from a reflector cube");
    add_common(cal_cmd, cal_args);
    cal_cmd->add_option("-i,--in", cal_in, "calibration-scene cube file")->required();
    cal_cmd->add_option("-o,--out", cal_out, "profile file (default <outdir>/profile.txt)");

    // apply-cal
    CommonArgs ap_args;
    std::string ap_in, ap_profile, ap_out;
    auto* ap_cmd = app.add_subcommand("apply-cal", "apply a calibration profile to a cube or profile set");
    add_common(ap_cmd, ap_args);
    ap_cmd->add_option("-i,--in", ap_in, "input cube/profiles file")->required();
    ap_cmd->add_option("-p,--profile", ap_profile, "calibration profile file")->required();
    ap_cmd->add_option("-o,--out", ap_out, "output file (default <outdir>/calibrated.bin)");

    // range-compress
    CommonArgs rc_args;
    std::string rc_in, rc_out;
    auto* rc_cmd = app.add_subcommand("range-compress", "windowed fast-time DFT to range profiles");
    add_common(rc_cmd, rc_args);
    rc_cmd->add_option("-i,--in", rc_in, "raw cube file")->required();
    rc_cmd->add_option("-o,--out", rc_out, "profiles file (default <outdir>/profiles.bin)");

    // align
    CommonArgs al_args;
    std::string al_in, al_out;
    bool al_print = false;
    auto* al_cmd = app.add_subcommand("align", "range alignment against the reference channel");
    add_common(al_cmd, al_args);
    al_cmd->add_option("-i,--in", al_in, "range-profiles file")->required();
    al_cmd->add_option("-o,--out", al_out, "aligned profiles file (default <outdir>/aligned.bin)");
    al_cmd->add_flag("--print-shifts", al_print, "print per-channel corrections");

    // reconstruct
    CommonArgs re_args;
    std::string re_in, re_profile, re_out;
    bool re_render = false;
    auto* re_cmd = app.add_subcommand("reconstruct", "form the 3D image volume (rma, or bp per config)");
    add_common(re_cmd, re_args);
    re_cmd->add_option("-i,--in", re_in, "beat-signal cube file")->required();
    re_cmd->add_option("-p,--profile", re_profile, "calibration profile to apply first");
    re_cmd->add_option("-o,--out", re_out, "volume file (default <outdir>/volume.bin)");
    re_cmd->add_flag("--render", re_render, "also write per-plane PGM renders and peak-cut CSVs");

    // analyze
    CommonArgs an_args;
    std::string an_in, an_what, an_out;
    int an_channel = 0, an_azimuth = 0, an_window = 64, an_hop = 8, an_plane = -1;
    auto* an_cmd = app.add_subcommand("analyze", "impulse-response metrics and spectral diagnostics");
    add_common(an_cmd, an_args);
    an_cmd->add_option("-i,--in", an_in, "volume, cube, or profiles file")->required();
    an_cmd->add_option("--what", an_what, "ipr | spectrogram | spectrum")->required();
    an_cmd->add_option("--channel", an_channel, "channel index");
    an_cmd->add_option("--azimuth", an_azimuth, "azimuth index");
    an_cmd->add_option("--window-len", an_window, "spectrogram window length");
    an_cmd->add_option("--hop", an_hop, "spectrogram hop");
    an_cmd->add_option("--plane", an_plane, "volume plane index (default: brightest)");
    an_cmd->add_option("-o,--out", an_out, "output CSV (default <outdir>/<what>.csv)");

    // render
    CommonArgs rd_args;
    std::string rd_in, rd_out;
    int rd_plane = 0;
    double rd_dyn = 40.0;
    auto* rd_cmd = app.add_subcommand("render", "write dB-scaled PGM and peak-cut CSVs for a volume plane");
    add_common(rd_cmd, rd_args, /*config_required=*/false);
    rd_cmd->add_option("-i,--in", rd_in, "volume file")->required();
    rd_cmd->add_option("--plane", rd_plane, "plane index");
    rd_cmd->add_option("--dynamic-range", rd_dyn, "display dynamic range in dB");
    rd_cmd->add_option("-o,--out", rd_out, "PGM path (default <outdir>/plane<N>.pgm)");

    CLI11_PARSE(app, argc, argv);

    if (sim_cmd->parsed()) {
        auto cfg = load_config(sim_args);
        std::string outdir = resolve_output_dir(sim_args, "out");
        msar_cube* cube = nullptr;
        check(msar_simulate(cfg.get(), &cube));
        CubePtr ptr(cube);
        std::string path = sim_out.empty() ? output_path(outdir, "cube.bin") : sim_out;
        check(msar_cube_save(ptr.get(), path.c_str()));
        uint64_t nf, nc, na;
        check(msar_cube_dims(ptr.get(), &nf, &nc, &na));
        std::printf("wrote %s (%llu samples x %llu channels x %llu azimuth)\n", path.c_str(),
                    static_cast<unsigned long long>(nf), static_cast<unsigned long long>(nc),
                    static_cast<unsigned long long>(na));
        return 0;
    }

    if (cal_cmd->parsed()) {
        auto cfg = load_config(cal_args);
        std::string outdir = resolve_output_dir(cal_args, "out");
        auto cube = load_cube(cfg, cal_in);
        msar_cal* cal = nullptr;
        check(msar_calibrate(cfg.get(), cube.get(), &cal));
        CalPtr ptr(cal);
        std::string path = cal_out.empty() ? output_path(outdir, "profile.txt") : cal_out;
        check(msar_cal_save(ptr.get(), path.c_str()));
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (ap_cmd->parsed()) {
        auto cfg = load_config(ap_args);
        std::string outdir = resolve_output_dir(ap_args, "out");
        auto cube = load_cube(cfg, ap_in);
        msar_cal* cal = nullptr;
        check(msar_cal_load(ap_profile.c_str(), &cal));
        CalPtr cal_ptr(cal);
        msar_cube* out = nullptr;
        check(msar_apply_calibration(cal_ptr.get(), cube.get(), &out));
        CubePtr out_ptr(out);
        std::string path = ap_out.empty() ? output_path(outdir, "calibrated.bin") : ap_out;
        check(msar_cube_save(out_ptr.get(), path.c_str()));
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (rc_cmd->parsed()) {
        auto cfg = load_config(rc_args);
        std::string outdir = resolve_output_dir(rc_args, "out");
        auto cube = load_cube(cfg, rc_in);
        msar_cube* out = nullptr;
        check(msar_range_compress(cfg.get(), cube.get(), &out));
        CubePtr out_ptr(out);
        std::string path = rc_out.empty() ? output_path(outdir, "profiles.bin") : rc_out;
        check(msar_cube_save(out_ptr.get(), path.c_str()));
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (al_cmd->parsed()) {
        auto cfg = load_config(al_args);
        std::string outdir = resolve_output_dir(al_args, "out");
        auto cube = load_cube(cfg, al_in);
        uint64_t nf, nc, na;
        check(msar_cube_dims(cube.get(), &nf, &nc, &na));
        std::vector<double> shifts(nc, 0.0);
        msar_cube* out = nullptr;
        check(msar_range_align(cfg.get(), cube.get(), &out, shifts.data()));
        CubePtr out_ptr(out);
        std::string path = al_out.empty() ? output_path(outdir, "aligned.bin") : al_out;
        check(msar_cube_save(out_ptr.get(), path.c_str()));
        if (al_print)
            for (uint64_t l = 0; l < nc; ++l)
                std::printf("channel %llu: %+.4f bins\n", static_cast<unsigned long long>(l), shifts[l]);
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (re_cmd->parsed()) {
        auto cfg = load_config(re_args);
        std::string outdir = resolve_output_dir(re_args, "out");
        auto cube = load_cube(cfg, re_in);
        CalPtr cal_ptr;
        if (!re_profile.empty()) {
            msar_cal* cal = nullptr;
            check(msar_cal_load(re_profile.c_str(), &cal));
            cal_ptr.reset(cal);
        }
        msar_volume* vol = nullptr;
        check(msar_reconstruct(cfg.get(), cube.get(), cal_ptr.get(), &vol));
        VolumePtr vol_ptr(vol);
        std::string path = re_out.empty() ? output_path(outdir, "volume.bin") : re_out;
        check(msar_volume_save(vol_ptr.get(), path.c_str()));
        std::printf("wrote %s\n", path.c_str());
        if (re_render) {
            uint64_t nx, ny, nz;
            check(msar_volume_dims(vol_ptr.get(), &nx, &ny, &nz));
            for (uint64_t iz = 0; iz < nz; ++iz) {
                std::string base = "plane" + std::to_string(iz);
                check(msar_volume_render_pgm(vol_ptr.get(), static_cast<int>(iz), 40.0,
                                             output_path(outdir, base + ".pgm").c_str()));
                check(msar_volume_peak_cuts_csv(vol_ptr.get(), static_cast<int>(iz),
                                                output_path(outdir, base + "_xcut.csv").c_str(),
                                                output_path(outdir, base + "_ycut.csv").c_str()));
            }
            std::printf("rendered %llu plane(s) into %s\n", static_cast<unsigned long long>(nz),
                        outdir.c_str());
        }
        return 0;
    }

    if (an_cmd->parsed()) {
        auto cfg = load_config(an_args);
        std::string outdir = resolve_output_dir(an_args, "out");
        if (an_what == "ipr") {
            // Volume first, then range profiles.
            msar_volume* vol = nullptr;
            if (msar_volume_load(an_in.c_str(), &vol) == MSAR_OK) {
                VolumePtr vol_ptr(vol);
                uint64_t nx, ny, nz;
                check(msar_volume_dims(vol_ptr.get(), &nx, &ny, &nz));
                int plane = an_plane;
                msar_ipr_report rep{};
                if (plane < 0) {
                    double best = -1.0;
                    for (uint64_t iz = 0; iz < nz; ++iz) {
                        msar_ipr_report r{};
                        msar_status s = msar_volume_ipr(vol_ptr.get(), static_cast<int>(iz), &r);
                        if (s == MSAR_OK && r.peak_magnitude > best) {
                            best = r.peak_magnitude;
                            plane = static_cast<int>(iz);
                            rep = r;
                        } else if (s != MSAR_OK && nz == 1) {
                            fail(s);
                        }
                    }
                    if (plane < 0) {
                        std::fprintf(stderr, "error: no peak in any plane\n");
                        return 4;
                    }
                } else {
                    check(msar_volume_ipr(vol_ptr.get(), plane, &rep));
                }
                std::printf("plane %d: peak (%.4g, %.4g) m, mag %.6g\n", plane, rep.peak_pos_x_m,
                            rep.peak_pos_y_m, rep.peak_magnitude);
                std::printf("width3db x %.6g m (%.4f cm), y %.6g m\n", rep.width3db_x_m,
                            rep.width3db_x_m * 100.0, rep.width3db_y_m);
                std::printf("pslr %.2f dB, islr %.2f dB\n", rep.pslr_db, rep.islr_db);
                // CSV export path
                std::string path = an_out.empty() ? output_path(outdir, "ipr.csv") : an_out;
                std::FILE* f = std::fopen(path.c_str(), "w");
                if (f) {
                    std::fprintf(f, "metric,value\npeak_pos_x_m,%.9g\npeak_pos_y_m,%.9g\n"
                                    "peak_magnitude,%.9g\nwidth3db_x_m,%.9g\nwidth3db_y_m,%.9g\n"
                                    "pslr_db,%.4f\nislr_db,%.4f\n",
                                 rep.peak_pos_x_m, rep.peak_pos_y_m, rep.peak_magnitude,
                                 rep.width3db_x_m, rep.width3db_y_m, rep.pslr_db, rep.islr_db);
                    std::fclose(f);
                }
                return 0;
            }
            auto cube = load_cube(cfg, an_in);
            msar_ipr_report rep{};
            check(msar_profiles_range_ipr(cube.get(), an_channel, an_azimuth, &rep));
            std::printf("range peak at %.6g m, width3db %.6g m (%.4f cm), pslr %.2f dB, islr %.2f dB\n",
                        rep.peak_pos_x_m, rep.width3db_x_m, rep.width3db_x_m * 100.0, rep.pslr_db,
                        rep.islr_db);
            std::string path = an_out.empty() ? output_path(outdir, "ipr.csv") : an_out;
            std::FILE* f = std::fopen(path.c_str(), "w");
            if (f) {
                std::fprintf(f, "metric,value\npeak_range_m,%.9g\nwidth3db_m,%.9g\npslr_db,%.4f\nislr_db,%.4f\n",
                             rep.peak_pos_x_m, rep.width3db_x_m, rep.pslr_db, rep.islr_db);
                std::fclose(f);
            }
            return 0;
        }
        if (an_what == "spectrogram") {
            auto cube = load_cube(cfg, an_in);
            std::string path = an_out.empty() ? output_path(outdir, "spectrogram.csv") : an_out;
            check(msar_spectrogram_csv(cube.get(), an_channel, an_azimuth, an_window, an_hop, path.c_str()));
            std::printf("wrote %s\n", path.c_str());
            return 0;
        }
        if (an_what == "spectrum") {
            auto cube = load_cube(cfg, an_in);
            std::string path = an_out.empty() ? output_path(outdir, "spectrum.csv") : an_out;
            check(msar_power_spectrum_csv(cube.get(), an_channel, an_azimuth, path.c_str()));
            std::printf("wrote %s\n", path.c_str());
            return 0;
        }
        std::fprintf(stderr, "error: --what must be ipr|spectrogram|spectrum\n");
        return 2;
    }

    if (rd_cmd->parsed()) {
        std::string outdir = resolve_output_dir(rd_args, "out");
        msar_volume* vol = nullptr;
        check(msar_volume_load(rd_in.c_str(), &vol));
        VolumePtr vol_ptr(vol);
        std::string base = "plane" + std::to_string(rd_plane);
        std::string path = rd_out.empty() ? output_path(outdir, base + ".pgm") : rd_out;
        check(msar_volume_render_pgm(vol_ptr.get(), rd_plane, rd_dyn, path.c_str()));
        check(msar_volume_peak_cuts_csv(vol_ptr.get(), rd_plane,
                                        output_path(outdir, base + "_xcut.csv").c_str(),
                                        output_path(outdir, base + "_ycut.csv").c_str()));
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    return 0;
}
