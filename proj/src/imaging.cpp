#include "imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fft.hpp"

namespace msar::imaging {

SpectralGrid make_spectral_grid(int nx, double dx, int ny, double dy, double kc) {
    if (nx < 1 || ny < 1 || dx <= 0.0 || dy <= 0.0) throw_config("spectral grid: invalid dimensions");
    SpectralGrid g;
    g.kc = kc;
    g.kx.resize(static_cast<size_t>(nx));
    g.ky.resize(static_cast<size_t>(ny));
    for (int q = 0; q < nx; ++q) {
        int qs = q <= nx / 2 ? q : q - nx;
        g.kx[static_cast<size_t>(q)] = kTwoPi * qs / (nx * dx);
    }
    for (int q = 0; q < ny; ++q) {
        int qs = q <= ny / 2 ? q : q - ny;
        g.ky[static_cast<size_t>(q)] = kTwoPi * qs / (ny * dy);
    }
    return g;
}

std::vector<double> ImageVolume::plane_magnitude(int iz) const {
    std::vector<double> mag(static_cast<size_t>(nx) * static_cast<size_t>(ny));
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            mag[static_cast<size_t>(iy) * static_cast<size_t>(nx) + static_cast<size_t>(ix)] =
                std::abs(at(ix, iy, iz));
    return mag;
}

sim::DataCube mono_transform(const sim::DataCube& cube, double z_ref, const MonoOptions& opts) {
    if (z_ref <= 0.0) throw_domain("mono_transform: z_ref must be positive");
    if (cube.stage == sim::Stage::range_compressed || cube.stage == sim::Stage::aligned)
        throw_config("mono_transform: requires a fast-time cube, not range profiles");

    const int n_chan = cube.n_chan;
    std::vector<int> order(static_cast<size_t>(n_chan));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return cube.axes.rows[static_cast<size_t>(a)].midpoint.y < cube.axes.rows[static_cast<size_t>(b)].midpoint.y;
    });

    // The re-indexed rows must form a uniform line: common x, uniform y pitch.
    if (n_chan > 1) {
        double pitch = (cube.axes.rows[static_cast<size_t>(order.back())].midpoint.y -
                        cube.axes.rows[static_cast<size_t>(order.front())].midpoint.y) /
                       (n_chan - 1);
        if (!(pitch > 0.0))
            throw_config("mono_transform: duplicate virtual midpoints; dedupe the elements first");
        double x_common = cube.axes.rows[static_cast<size_t>(order.front())].midpoint.x;
        for (int i = 1; i < n_chan; ++i) {
            double dyi = cube.axes.rows[static_cast<size_t>(order[static_cast<size_t>(i)])].midpoint.y -
                         cube.axes.rows[static_cast<size_t>(order[static_cast<size_t>(i - 1)])].midpoint.y;
            double dxi = cube.axes.rows[static_cast<size_t>(order[static_cast<size_t>(i)])].midpoint.x - x_common;
            if (std::abs(dyi - pitch) > opts.grid_tol * pitch || std::abs(dxi) > opts.grid_tol * pitch)
                throw_config("mono_transform: virtual midpoints are not a uniform line "
                             "(resample required; only uniform grids are supported)");
        }
    }

    sim::DataCube out;
    out.n_fast = cube.n_fast;
    out.n_chan = n_chan;
    out.n_az = cube.n_az;
    out.stage = cube.stage;
    out.chirp = cube.chirp;
    out.axes.azimuth_x = cube.axes.azimuth_x;
    out.axes.x_step = cube.axes.x_step;
    out.axes.rows.resize(static_cast<size_t>(n_chan));
    for (int i = 0; i < n_chan; ++i)
        out.axes.rows[static_cast<size_t>(i)] = cube.axes.rows[static_cast<size_t>(order[static_cast<size_t>(i)])];
    out.samples.resize(cube.samples.size());

    const std::vector<double> k = sim::wavenumber_grid(cube.chirp);
#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < out.n_az; ++a) {
        for (int i = 0; i < n_chan; ++i) {
            const int src = order[static_cast<size_t>(i)];
            const auto& row = out.axes.rows[static_cast<size_t>(i)];
            geom::VirtualElement e;
            e.separation = {row.separation.x, row.separation.y};
            const cdouble* in = &cube.samples[cube.idx(0, src, a)];
            cdouble* dst = &out.samples[out.idx(0, i, a)];
            // Phi scales linearly with k for both phase models, so evaluate
            // once at unit wavenumber. The beat signal carries the bistatic
            // path excess as e^{-j k delta}; multiplying by e^{+j Phi}
            // collapses the pair onto its midpoint.
            const double phi_per_k = geom::midpoint_phase(e, 1.0, z_ref, opts.phase_model);
            for (int n = 0; n < out.n_fast; ++n)
                dst[n] = in[n] * std::polar(1.0, k[static_cast<size_t>(n)] * phi_per_k);
        }
    }
    return out;
}

namespace {

void fft2_inplace(std::vector<cdouble>& data, int nx, int ny, int sign) {
    fft::Plan px(nx, sign);
    for (int iy = 0; iy < ny; ++iy) {
        cdouble* r = &data[static_cast<size_t>(iy) * static_cast<size_t>(nx)];
        px.transform(r, static_cast<size_t>(nx), r);
    }
    fft::Plan py(ny, sign);
    std::vector<cdouble> col(static_cast<size_t>(ny)), out(static_cast<size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) col[static_cast<size_t>(iy)] = data[static_cast<size_t>(iy) * nx + static_cast<size_t>(ix)];
        py.transform(col.data(), col.size(), out.data());
        for (int iy = 0; iy < ny; ++iy) data[static_cast<size_t>(iy) * nx + static_cast<size_t>(ix)] = out[static_cast<size_t>(iy)];
    }
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

}  // namespace

ImageVolume rma_reconstruct(const rangeproc::RangeProfileSet& profiles, const std::vector<double>& z_planes,
                            const RmaOptions& opts) {
    if (z_planes.empty()) throw_config("rma: no z planes requested");
    for (double z : z_planes)
        if (!(z > 0.0)) throw_domain("rma: z planes must be positive");
    if (opts.pad_factor < 1) throw_config("rma: pad factor must be >= 1");

    const int nx = profiles.n_az;
    const int ny = profiles.n_chan;
    if (nx < 1 || ny < 1) throw_config("rma: empty aperture");

    // Aperture axes; rows must already be the uniform midpoint grid.
    const double dx = profiles.axes.x_step > 0.0 ? profiles.axes.x_step : 1.0;
    double y0 = profiles.axes.rows.front().midpoint.y;
    double dy = dx;
    if (ny > 1) {
        dy = (profiles.axes.rows.back().midpoint.y - y0) / (ny - 1);
        if (!(dy > 0.0)) throw_config("rma: profiles are not on the sorted midpoint grid (run mono_transform)");
        for (int i = 1; i < ny; ++i) {
            double d = profiles.axes.rows[static_cast<size_t>(i)].midpoint.y -
                       profiles.axes.rows[static_cast<size_t>(i - 1)].midpoint.y;
            if (std::abs(d - dy) > 1e-6 * dy)
                throw_config("rma: non-uniform midpoint grid (resample required)");
        }
    }
    const double x_offset = profiles.axes.rows.front().midpoint.x;

    const double kc = profiles.chirp.k_center();
    const double lambda_c = profiles.chirp.lambda_center();
    if (nx > 1 && dx > lambda_c / 4.0 + 1e-12)
        std::fprintf(stderr, "warning: rma: azimuth pitch %.4g m exceeds lambda_c/4 = %.4g m, expect aliasing\n",
                     dx, lambda_c / 4.0);
    if (ny > 1 && dy > lambda_c / 4.0 + 1e-12)
        std::fprintf(stderr, "warning: rma: element pitch %.4g m exceeds lambda_c/4 = %.4g m, expect aliasing\n",
                     dy, lambda_c / 4.0);

    const int px = nx > 1 ? next_pow2(opts.pad_factor * nx) : 1;
    const int py = ny > 1 ? next_pow2(opts.pad_factor * ny) : 1;
    const SpectralGrid grid = make_spectral_grid(px, dx, py, dy, kc);

    ImageVolume vol;
    vol.nx = nx;
    vol.ny = ny;
    vol.x0 = profiles.axes.azimuth_x.front() + x_offset;
    vol.dx = dx;
    vol.y0 = y0;
    vol.dy = dy;
    vol.z_planes = z_planes;
    vol.voxels.assign(static_cast<size_t>(nx) * ny * z_planes.size(), cdouble{});

    const int nz = static_cast<int>(z_planes.size());
    std::vector<int> plane_bin(static_cast<size_t>(nz));
    for (int iz = 0; iz < nz; ++iz) {
        int bin = profiles.bin_of_range(z_planes[static_cast<size_t>(iz)]);
        if (bin < 0 || bin >= profiles.n_bins)
            throw_analysis("rma: z plane " + std::to_string(z_planes[static_cast<size_t>(iz)]) +
                           " m is outside the range swath");
        plane_bin[static_cast<size_t>(iz)] = bin;
    }

#pragma omp parallel for schedule(dynamic)
    for (int iz = 0; iz < nz; ++iz) {
        const double z_d = z_planes[static_cast<size_t>(iz)];
        const int bin = plane_bin[static_cast<size_t>(iz)];
        const int w = opts.bin_window;

        std::vector<cdouble> plane(static_cast<size_t>(px) * static_cast<size_t>(py), cdouble{});
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                cdouble acc{};
                for (int m = std::max(0, bin - w); m <= std::min(profiles.n_bins - 1, bin + w); ++m)
                    acc += profiles.at(m, iy, ix);
                plane[static_cast<size_t>(iy) * px + static_cast<size_t>(ix)] = acc;
            }
        }

        fft2_inplace(plane, px, py, +1);
        for (int qy = 0; qy < py; ++qy) {
            for (int qx = 0; qx < px; ++qx) {
                double kz2 = 4.0 * kc * kc - grid.kx[static_cast<size_t>(qx)] * grid.kx[static_cast<size_t>(qx)] -
                             grid.ky[static_cast<size_t>(qy)] * grid.ky[static_cast<size_t>(qy)];
                cdouble& v = plane[static_cast<size_t>(qy) * px + static_cast<size_t>(qx)];
                if (kz2 <= 0.0)
                    v = cdouble{};  // evanescent region carries no propagating energy
                else
                    v *= std::polar(1.0, z_d * std::sqrt(kz2));
            }
        }
        fft2_inplace(plane, px, py, -1);

        const double scale = 1.0 / (static_cast<double>(px) * py);
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                vol.at(ix, iy, iz) = plane[static_cast<size_t>(iy) * px + static_cast<size_t>(ix)] * scale;
    }
    return vol;
}

VoxelGrid VoxelGrid::from_axes(const sim::CubeAxes& axes, std::vector<double> z_planes) {
    VoxelGrid g;
    g.nx = static_cast<int>(axes.azimuth_x.size());
    g.dx = axes.x_step > 0.0 ? axes.x_step : 1.0;
    g.x0 = axes.azimuth_x.front() + axes.rows.front().midpoint.x;
    g.ny = static_cast<int>(axes.rows.size());
    std::vector<double> ys(axes.rows.size());
    for (size_t i = 0; i < axes.rows.size(); ++i) ys[i] = axes.rows[i].midpoint.y;
    std::sort(ys.begin(), ys.end());
    g.y0 = ys.front();
    g.dy = ys.size() > 1 ? (ys.back() - ys.front()) / (static_cast<int>(ys.size()) - 1) : g.dx;
    g.z_planes = std::move(z_planes);
    return g;
}

ImageVolume bp_reconstruct(const sim::DataCube& cube, const VoxelGrid& grid) {
    if (grid.nx < 1 || grid.ny < 1 || grid.z_planes.empty()) throw_config("bp: empty voxel grid");
    for (double z : grid.z_planes)
        if (!(z > 0.0)) throw_domain("bp: z planes must be positive");
    if (cube.stage == sim::Stage::range_compressed || cube.stage == sim::Stage::aligned)
        throw_config("bp: requires a fast-time cube");

    ImageVolume vol;
    vol.nx = grid.nx;
    vol.ny = grid.ny;
    vol.x0 = grid.x0;
    vol.dx = grid.dx;
    vol.y0 = grid.y0;
    vol.dy = grid.dy;
    vol.z_planes = grid.z_planes;
    vol.voxels.assign(static_cast<size_t>(grid.nx) * grid.ny * grid.z_planes.size(), cdouble{});

    const std::vector<double> k = sim::wavenumber_grid(cube.chirp);
    const double k0 = k.front();
    const double dk = k.size() > 1 ? k[1] - k[0] : 0.0;
    const int nz = static_cast<int>(grid.z_planes.size());

#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int iz = 0; iz < nz; ++iz) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            const double z = grid.z_planes[static_cast<size_t>(iz)];
            const double yv = grid.y0 + iy * grid.dy;
            for (int ix = 0; ix < grid.nx; ++ix) {
                const double xv = grid.x0 + ix * grid.dx;
                cdouble acc{};
                for (int a = 0; a < cube.n_az; ++a) {
                    const double az_x = cube.axes.azimuth_x[static_cast<size_t>(a)];
                    for (int l = 0; l < cube.n_chan; ++l) {
                        const auto& row = cube.axes.rows[static_cast<size_t>(l)];
                        const double mx = row.midpoint.x + az_x - xv;
                        const double my = row.midpoint.y - yv;
                        const double r = std::sqrt(mx * mx + my * my + z * z);
                        // exp(+j 2 k_n r), advanced by recurrence over n.
                        const cdouble step = std::polar(1.0, 2.0 * dk * r);
                        cdouble ph = std::polar(1.0, 2.0 * k0 * r);
                        const cdouble* cell = &cube.samples[cube.idx(0, l, a)];
                        for (int n = 0; n < cube.n_fast; ++n) {
                            acc += cell[n] * ph;
                            ph *= step;
                        }
                    }
                }
                vol.at(ix, iy, iz) = acc;
            }
        }
    }
    return vol;
}

ImageVolume bp_reconstruct(const rangeproc::RangeProfileSet& profiles, const VoxelGrid& grid) {
    if (profiles.window != rangeproc::Window::rect)
        throw_config("bp: profile inversion is only defined for the rect window");
    // Invert the centered +j DFT back to fast time, drop the zero padding.
    sim::DataCube cube;
    cube.n_fast = profiles.n_samples_src;
    cube.n_chan = profiles.n_chan;
    cube.n_az = profiles.n_az;
    cube.stage = profiles.stage == sim::Stage::calibrated ? sim::Stage::calibrated : sim::Stage::raw;
    cube.chirp = profiles.chirp;
    cube.axes = profiles.axes;
    cube.samples.assign(static_cast<size_t>(cube.n_fast) * cube.n_chan * cube.n_az, cdouble{});

    const int n = profiles.n_bins;
    const double n_center = 0.5 * (profiles.n_samples_src - 1);
    fft::Plan fwd(n, -1);
    std::vector<cdouble> buf(static_cast<size_t>(n)), time(static_cast<size_t>(n));
    for (int a = 0; a < profiles.n_az; ++a) {
        for (int l = 0; l < profiles.n_chan; ++l) {
            const cdouble* col = &profiles.at(0, l, a);
            for (int m = 0; m < n; ++m)
                buf[static_cast<size_t>(m)] = col[m] * std::polar(1.0, kTwoPi * m * n_center / n);
            fwd.transform(buf.data(), buf.size(), time.data());
            for (int s = 0; s < cube.n_fast; ++s)
                cube.at(s, l, a) = time[static_cast<size_t>(s)] / static_cast<double>(n);
        }
    }
    return bp_reconstruct(cube, grid);
}

namespace {

double quad_refine_pos(const std::vector<double>& v, int i) {
    const int n = static_cast<int>(v.size());
    if (i <= 0 || i >= n - 1) return static_cast<double>(i);
    double ym = v[static_cast<size_t>(i - 1)], y0 = v[static_cast<size_t>(i)], yp = v[static_cast<size_t>(i + 1)];
    double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return static_cast<double>(i);
    return i + 0.5 * (ym - yp) / denom;
}

double quad_refine_val(const std::vector<double>& v, int i) {
    const int n = static_cast<int>(v.size());
    if (i <= 0 || i >= n - 1) return v[static_cast<size_t>(i)];
    double ym = v[static_cast<size_t>(i - 1)], y0 = v[static_cast<size_t>(i)], yp = v[static_cast<size_t>(i + 1)];
    double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return y0;
    double delta = 0.5 * (ym - yp) / denom;
    return y0 - 0.25 * (ym - yp) * delta;
}

// Fractional index where mag crosses `threshold` walking away from the peak;
// quadratic interpolation through the straddling samples. Returns -1 if the
// crossing leaves the array.
double crossing_pos(const std::vector<double>& mag, int peak, int dir, double threshold) {
    const int n = static_cast<int>(mag.size());
    int i = peak;
    while (true) {
        int j = i + dir;
        if (j < 0 || j >= n) return -1.0;
        if (mag[static_cast<size_t>(j)] <= threshold) {
            // Quadratic through (i-dir, i, j) when available, else linear.
            double y0 = mag[static_cast<size_t>(i)], y1 = mag[static_cast<size_t>(j)];
            int h = i - dir;
            if (h >= 0 && h < n) {
                double ym = mag[static_cast<size_t>(h)];
                // Parabola through three consecutive samples centered on i.
                double a = 0.5 * (ym - 2.0 * y0 + y1);
                double b = 0.5 * (y1 - ym) * dir;  // derivative toward j
                double c = y0 - threshold;
                if (std::abs(a) > 1e-300) {
                    double disc = b * b - 4.0 * a * c;
                    if (disc >= 0.0) {
                        double t1 = (-b + std::sqrt(disc)) / (2.0 * a);
                        double t2 = (-b - std::sqrt(disc)) / (2.0 * a);
                        double t = -1.0;
                        if (t1 >= 0.0 && t1 <= 1.0) t = t1;
                        if (t2 >= 0.0 && t2 <= 1.0 && (t < 0.0 || t2 < t)) t = t2;
                        if (t >= 0.0) return i + dir * t;
                    }
                }
            }
            double t = (y0 - threshold) / (y0 - y1);
            return i + dir * t;
        }
        i = j;
    }
}

// First local minimum away from the peak (main-lobe edge).
int first_null(const std::vector<double>& mag, int peak, int dir) {
    const int n = static_cast<int>(mag.size());
    int i = peak;
    while (true) {
        int j = i + dir;
        if (j < 0 || j >= n) return i;
        if (mag[static_cast<size_t>(j)] > mag[static_cast<size_t>(i)]) return i;
        i = j;
    }
}

}  // namespace

IprReport ipr_metrics_1d(const std::vector<double>& mag, double scale, int peak_hint) {
    if (mag.size() < 3) throw_analysis("ipr: need at least 3 samples");
    int peak = 0;
    if (peak_hint >= 0 && peak_hint < static_cast<int>(mag.size())) {
        // Hill-climb from the hint to the local maximum.
        peak = peak_hint;
        while (peak + 1 < static_cast<int>(mag.size()) && mag[static_cast<size_t>(peak + 1)] > mag[static_cast<size_t>(peak)]) ++peak;
        while (peak > 0 && mag[static_cast<size_t>(peak - 1)] > mag[static_cast<size_t>(peak)]) --peak;
    } else {
        peak = static_cast<int>(std::max_element(mag.begin(), mag.end()) - mag.begin());
    }
    double peak_val = quad_refine_val(mag, peak);
    if (!(peak_val > 0.0)) throw_analysis("ipr: no peak present (input is zero)");

    IprReport rep;
    rep.peak_ix = peak;
    rep.peak_pos_x = quad_refine_pos(mag, peak) * scale;
    rep.peak_mag = peak_val;

    const double th = peak_val * std::pow(10.0, -3.0 / 20.0);
    double left = crossing_pos(mag, peak, -1, th);
    double right = crossing_pos(mag, peak, +1, th);
    rep.width3db_x = (left >= 0.0 && right >= 0.0) ? (right - left) * scale : 0.0;

    int null_l = first_null(mag, peak, -1);
    int null_r = first_null(mag, peak, +1);
    double side = 0.0;
    for (int i = 0; i < null_l; ++i) side = std::max(side, mag[static_cast<size_t>(i)]);
    for (int i = null_r + 1; i < static_cast<int>(mag.size()); ++i) side = std::max(side, mag[static_cast<size_t>(i)]);
    // Refine the sidelobe peaks too; otherwise PSLR is biased high on coarse grids.
    if (side > 0.0) {
        for (int i = 1; i + 1 < static_cast<int>(mag.size()); ++i) {
            if ((i < null_l || i > null_r) && mag[static_cast<size_t>(i)] >= mag[static_cast<size_t>(i - 1)] &&
                mag[static_cast<size_t>(i)] >= mag[static_cast<size_t>(i + 1)])
                side = std::max(side, quad_refine_val(mag, i));
        }
        rep.pslr_db = db20(side / peak_val);
    } else {
        rep.pslr_db = -300.0;
    }

    double main_e = 0.0, side_e = 0.0;
    for (int i = 0; i < static_cast<int>(mag.size()); ++i) {
        double e = mag[static_cast<size_t>(i)] * mag[static_cast<size_t>(i)];
        if (i >= null_l && i <= null_r)
            main_e += e;
        else
            side_e += e;
    }
    rep.islr_db = main_e > 0.0 ? 10.0 * std::log10(std::max(side_e, 1e-300) / main_e) : 0.0;
    return rep;
}

IprReport ipr_metrics_plane(const std::vector<double>& mag, int nx, int ny, double dx, double dy,
                            int hint_ix, int hint_iy) {
    if (static_cast<size_t>(nx) * static_cast<size_t>(ny) != mag.size())
        throw_config("ipr: magnitude size does not match dimensions");
    int pix = 0, piy = 0;
    double best = -1.0;
    if (hint_ix >= 0 && hint_ix < nx && hint_iy >= 0 && hint_iy < ny) {
        // Hill-climb from the hint to the nearest local maximum.
        pix = hint_ix;
        piy = hint_iy;
        bool moved = true;
        while (moved) {
            moved = false;
            best = mag[static_cast<size_t>(piy) * nx + static_cast<size_t>(pix)];
            for (int sy = -1; sy <= 1; ++sy) {
                for (int sx = -1; sx <= 1; ++sx) {
                    int jx = pix + sx, jy = piy + sy;
                    if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                    double v = mag[static_cast<size_t>(jy) * nx + static_cast<size_t>(jx)];
                    if (v > best) {
                        best = v;
                        pix = jx;
                        piy = jy;
                        moved = true;
                    }
                }
            }
        }
    } else {
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                double v = mag[static_cast<size_t>(iy) * nx + static_cast<size_t>(ix)];
                if (v > best) {
                    best = v;
                    pix = ix;
                    piy = iy;
                }
            }
        }
    }
    if (!(best > 0.0)) throw_analysis("ipr: no peak present (plane is zero)");

    std::vector<double> xcut(static_cast<size_t>(nx)), ycut(static_cast<size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) xcut[static_cast<size_t>(ix)] = mag[static_cast<size_t>(piy) * nx + static_cast<size_t>(ix)];
    for (int iy = 0; iy < ny; ++iy) ycut[static_cast<size_t>(iy)] = mag[static_cast<size_t>(iy) * nx + static_cast<size_t>(pix)];

    IprReport rx = nx >= 3 ? ipr_metrics_1d(xcut, dx, pix) : IprReport{};
    IprReport ry = ny >= 3 ? ipr_metrics_1d(ycut, dy, piy) : IprReport{};

    IprReport rep;
    rep.peak_ix = pix;
    rep.peak_iy = piy;
    rep.peak_mag = best;
    rep.peak_pos_x = nx >= 3 ? rx.peak_pos_x : pix * dx;
    rep.peak_pos_y = ny >= 3 ? ry.peak_pos_x : piy * dy;
    rep.width3db_x = rx.width3db_x;
    rep.width3db_y = ry.width3db_x;
    rep.pslr_db = std::max(nx >= 3 ? rx.pslr_db : -300.0, ny >= 3 ? ry.pslr_db : -300.0);
    rep.islr_db = std::max(nx >= 3 ? rx.islr_db : -300.0, ny >= 3 ? ry.islr_db : -300.0);
    return rep;
}

}  // namespace msar::imaging
