#include "oamsim/hologram.hpp"

#include <cmath>
#include <stdexcept>

namespace oamsim {

void HologramSpec::validate() const {
    if (!(line_density > 0.0) || !std::isfinite(line_density)) {
        throw std::invalid_argument("hologram: line_density must be positive");
    }
    if (!(blaze_depth > 0.0) || blaze_depth > kTwoPi + 1e-12) {
        throw std::invalid_argument("hologram: blaze_depth must lie in (0, 2pi]");
    }
    if (!(first_order_efficiency >= 0.0 && first_order_efficiency <= 1.0)) {
        throw std::invalid_argument("hologram: first_order_efficiency must lie in [0, 1]");
    }
    if (!(aperture > 0.0)) throw std::invalid_argument("hologram: aperture must be positive");
    if (!std::isfinite(dislocation_offset.x) || !std::isfinite(dislocation_offset.y)) {
        throw std::invalid_argument("hologram: dislocation_offset must be finite");
    }
}

double fork_phase(const HologramSpec& spec, double x, double y) {
    const double spiral = spec.delta_m == 0
                              ? 0.0
                              : spec.delta_m * std::atan2(y - spec.dislocation_offset.y,
                                                          x - spec.dislocation_offset.x);
    return spiral + kTwoPi * x * spec.line_density;
}

namespace {

bool inside_aperture(const HologramSpec& spec, double x, double y) {
    const double half = 0.5 * spec.aperture;
    return std::abs(x) <= half && std::abs(y) <= half;
}

double blazed_phase(const HologramSpec& spec, double x, double y) {
    const double t = fork_phase(spec, x, y);
    const double wrapped = t - kTwoPi * std::floor(t / kTwoPi);
    return spec.blaze_depth * (wrapped / kTwoPi);
}

} // namespace

ComplexField transmittance(const HologramSpec& spec, const GridSpec& grid) {
    spec.validate();
    return ComplexField::from_function(grid, [&](double x, double y) -> cplx {
        if (!inside_aperture(spec, x, y)) return {};
        return std::polar(1.0, blazed_phase(spec, x, y));
    });
}

std::vector<double> mask_phase(const HologramSpec& spec, const GridSpec& grid) {
    spec.validate();
    std::vector<double> out(grid.size(), 0.0);
    for (int iy = 0; iy < grid.n(); ++iy) {
        for (int ix = 0; ix < grid.n(); ++ix) {
            const double x = grid.coord(ix), y = grid.coord(iy);
            if (inside_aperture(spec, x, y)) {
                out[static_cast<std::size_t>(iy) * grid.n() + ix] = blazed_phase(spec, x, y);
            }
        }
    }
    return out;
}

HologramSpec rotate_180(const HologramSpec& spec) {
    HologramSpec out = spec;
    out.delta_m = -spec.delta_m;
    out.dislocation_offset.x = -spec.dislocation_offset.x;
    return out;
}

ComplexField apply_first_order(const ComplexField& f, const HologramSpec& spec) {
    spec.validate();
    const double amp = std::sqrt(spec.first_order_efficiency);
    const GridSpec& g = f.grid();
    std::vector<cplx> out(f.samples().begin(), f.samples().end());
    for (int iy = 0; iy < g.n(); ++iy) {
        const double dy = g.coord(iy) - spec.dislocation_offset.y;
        for (int ix = 0; ix < g.n(); ++ix) {
            const double dx = g.coord(ix) - spec.dislocation_offset.x;
            const double phase = spec.delta_m == 0 ? 0.0 : spec.delta_m * std::atan2(dy, dx);
            out[static_cast<std::size_t>(iy) * g.n() + ix] *= std::polar(amp, phase);
        }
    }
    return ComplexField(g, std::move(out));
}

} // namespace oamsim
