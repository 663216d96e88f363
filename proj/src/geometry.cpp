#include "geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace msar::geom {

void AntennaLayout::validate() const {
    if (tx.empty() || rx.empty())
        throw_config("layout: need at least one tx and one rx antenna");
    for (const auto& p : tx)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw_config("layout: non-finite tx position");
    for (const auto& p : rx)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw_config("layout: non-finite rx position");
}

AntennaLayout AntennaLayout::parse(std::istream& in, const std::string& origin) {
    AntennaLayout layout;
    std::vector<std::pair<int, Vec2>> tx_entries, rx_entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;  // blank line
        int index;
        double x_mm, y_mm;
        if (!(ls >> index >> x_mm >> y_mm))
            throw_config(origin + ":" + std::to_string(lineno) + ": expected `tx|rx index x_mm y_mm`");
        Vec2 pos{x_mm * 1e-3, y_mm * 1e-3};
        if (kind == "tx")
            tx_entries.emplace_back(index, pos);
        else if (kind == "rx")
            rx_entries.emplace_back(index, pos);
        else
            throw_config(origin + ":" + std::to_string(lineno) + ": unknown antenna kind '" + kind + "'");
    }
    auto place = [&](std::vector<std::pair<int, Vec2>>& entries, std::vector<Vec2>& out, const char* what) {
        out.resize(entries.size());
        std::vector<bool> seen(entries.size(), false);
        for (const auto& [index, pos] : entries) {
            if (index < 0 || static_cast<size_t>(index) >= entries.size() || seen[static_cast<size_t>(index)])
                throw_config(origin + ": " + what + " indices must be a permutation of 0.." +
                             std::to_string(entries.size() - 1));
            out[static_cast<size_t>(index)] = pos;
            seen[static_cast<size_t>(index)] = true;
        }
    };
    place(tx_entries, layout.tx, "tx");
    place(rx_entries, layout.rx, "rx");
    layout.validate();
    return layout;
}

AntennaLayout AntennaLayout::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("layout: cannot open " + path);
    return parse(in, path);
}

ApertureScan ApertureScan::make(int x_count, double x_step, int y_count, double y_step) {
    if (x_count < 1 || y_count < 1) throw_config("scan: counts must be positive");
    if (x_step <= 0.0 || y_step <= 0.0) throw_config("scan: steps must be positive");
    ApertureScan scan;
    scan.x_step = x_step;
    scan.y_step = y_step;
    scan.x_positions.reserve(static_cast<size_t>(x_count));
    scan.y_positions.reserve(static_cast<size_t>(y_count));
    for (int i = 0; i < x_count; ++i)
        scan.x_positions.push_back((i - 0.5 * (x_count - 1)) * x_step);
    for (int i = 0; i < y_count; ++i)
        scan.y_positions.push_back((i - 0.5 * (y_count - 1)) * y_step);
    return scan;
}

TdmOrder full_tdm(int n_tx, int n_rx) {
    TdmOrder order;
    order.reserve(static_cast<size_t>(n_tx) * static_cast<size_t>(n_rx));
    for (int t = 0; t < n_tx; ++t)
        for (int r = 0; r < n_rx; ++r)
            order.emplace_back(t, r);
    return order;
}

std::vector<VirtualElement> virtual_elements(const AntennaLayout& layout, const TdmOrder& order) {
    layout.validate();
    std::vector<VirtualElement> elements;
    elements.reserve(order.size());
    int id = 0;
    for (const auto& [t, r] : order) {
        if (t < 0 || static_cast<size_t>(t) >= layout.tx.size() ||
            r < 0 || static_cast<size_t>(r) >= layout.rx.size())
            throw_config("tdm order references antenna (" + std::to_string(t) + "," +
                         std::to_string(r) + ") outside the layout");
        const Vec2& pt = layout.tx[static_cast<size_t>(t)];
        const Vec2& pr = layout.rx[static_cast<size_t>(r)];
        VirtualElement e;
        e.channel_id = id++;
        e.tx_index = t;
        e.rx_index = r;
        e.midpoint = {0.5 * (pt.x + pr.x), 0.5 * (pt.y + pr.y)};
        e.separation = {pt.x - pr.x, pt.y - pr.y};
        elements.push_back(e);
    }
    return elements;
}

std::vector<VirtualElement> dedupe_elements(const std::vector<VirtualElement>& elements, double tol) {
    if (tol < 0.0) throw_config("dedupe: tolerance must be non-negative");
    std::vector<VirtualElement> kept;
    kept.reserve(elements.size());
    for (const auto& e : elements) {
        bool duplicate = false;
        for (const auto& k : kept) {
            double dx = e.midpoint.x - k.midpoint.x;
            double dy = e.midpoint.y - k.midpoint.y;
            if (std::hypot(dx, dy) <= tol) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(e);
    }
    return kept;
}

double midpoint_phase(const VirtualElement& elem, double k, double z_ref, PhaseModel model) {
    if (z_ref <= 0.0) throw_domain("midpoint_phase: z_ref must be positive");
    double hx = 0.5 * elem.separation.x;
    double hy = 0.5 * elem.separation.y;
    double r2 = hx * hx + hy * hy;
    if (model == PhaseModel::quadratic) return k * r2 / z_ref;
    return k * 2.0 * (std::sqrt(r2 + z_ref * z_ref) - z_ref);
}

uint64_t layout_hash(const AntennaLayout& layout) {
    Fnv1a h;
    h.update_u64(layout.tx.size());
    for (const auto& p : layout.tx) {
        h.update_f64(p.x);
        h.update_f64(p.y);
    }
    h.update_u64(layout.rx.size());
    for (const auto& p : layout.rx) {
        h.update_f64(p.x);
        h.update_f64(p.y);
    }
    return h.digest();
}

}  // namespace msar::geom
