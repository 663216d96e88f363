#pragma once

// Array layouts, TDM virtual-element synthesis, overlap removal, scan grids
// and the multistatic-to-monostatic midpoint phase term.
//
// Conventions: the aperture plane is z = 0; a virtual element sits at the
// tx/rx midpoint; separation is the full vector d = pos_tx - pos_rx so the
// physical antennas are at midpoint +/- d/2.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace msar::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct AntennaLayout {
    std::vector<Vec2> tx;
    std::vector<Vec2> rx;

    void validate() const;

    // Plain-text format, one antenna per line: `tx|rx index x_mm y_mm`.
    static AntennaLayout parse(std::istream& in, const std::string& origin);
    static AntennaLayout load(const std::string& path);
};

struct VirtualElement {
    int channel_id = 0;
    int tx_index = 0;
    int rx_index = 0;
    Vec2 midpoint;
    Vec2 separation;  // tx - rx
};

struct ApertureScan {
    std::vector<double> x_positions;
    std::vector<double> y_positions;
    double x_step = 0.0;
    double y_step = 0.0;

    // Uniform grids centered on zero.
    static ApertureScan make(int x_count, double x_step, int y_count, double y_step);

    double x_extent() const { return x_positions.empty() ? 0.0 : x_positions.back() - x_positions.front(); }
    double y_extent() const { return y_positions.empty() ? 0.0 : y_positions.back() - y_positions.front(); }
};

using TdmOrder = std::vector<std::pair<int, int>>;  // (tx_index, rx_index)

TdmOrder full_tdm(int n_tx, int n_rx);

std::vector<VirtualElement> virtual_elements(const AntennaLayout& layout, const TdmOrder& order);

// Keeps the first element of each midpoint-equivalence class (distance <= tol),
// preserving input order.
std::vector<VirtualElement> dedupe_elements(const std::vector<VirtualElement>& elements, double tol);

enum class PhaseModel {
    quadratic,  // k*((dx/2)^2+(dy/2)^2)/z_ref, second-order two-path expansion
    exact,      // k*(2*sqrt((dx/2)^2+(dy/2)^2+z_ref^2) - 2*z_ref)
};

// Extra phase picked up by moving a tx/rx pair to its midpoint, for a
// boresight reference point at depth z_ref.
double midpoint_phase(const VirtualElement& elem, double k, double z_ref,
                      PhaseModel model = PhaseModel::quadratic);

uint64_t layout_hash(const AntennaLayout& layout);

}  // namespace msar::geom
