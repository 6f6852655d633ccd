#include "oamsim/fieldgrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oamsim {

GridSpec::GridSpec(int n, double extent) : n_(n), extent_(extent) {
    if (n < kMinSamples) {
        throw std::invalid_argument("grid: n must be >= " + std::to_string(kMinSamples) +
                                    ", got " + std::to_string(n));
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw std::invalid_argument("grid: extent must be positive and finite");
    }
}

GridSpec make_grid(int n, double extent) { return GridSpec(n, extent); }

ComplexField::ComplexField(GridSpec grid) : grid_(grid), samples_(grid.size()) {}

ComplexField::ComplexField(GridSpec grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw std::invalid_argument("field: sample count " + std::to_string(samples_.size()) +
                                    " does not match grid " + std::to_string(grid_.n()) + "^2");
    }
    for (const cplx& v : samples_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("field: non-finite sample");
        }
    }
}

double ComplexField::max_abs() const {
    double m = 0.0;
    for (const cplx& v : samples_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexField::power() const {
    double s = 0.0;
    for (const cplx& v : samples_) s += std::norm(v);
    return s * grid_.pitch() * grid_.pitch();
}

ComplexField ComplexField::scaled(cplx factor) const {
    std::vector<cplx> out(samples_);
    for (cplx& v : out) v *= factor;
    return ComplexField(grid_, std::move(out));
}

namespace {
void require_same_grid(const ComplexField& a, const ComplexField& b, const char* what) {
    if (!(a.grid() == b.grid())) {
        throw GridMismatch(std::string(what) + ": fields live on different grids");
    }
}
} // namespace

ComplexField ComplexField::multiplied(const ComplexField& other) const {
    require_same_grid(*this, other, "multiply");
    std::vector<cplx> out(samples_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= other.samples_[i];
    return ComplexField(grid_, std::move(out));
}

ComplexField ComplexField::conjugated() const {
    std::vector<cplx> out(samples_);
    for (cplx& v : out) v = std::conj(v);
    return ComplexField(grid_, std::move(out));
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b, "add");
    std::vector<cplx> out(a.samples_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.samples_[i];
    return ComplexField(a.grid_, std::move(out));
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a, b, "subtract");
    std::vector<cplx> out(a.samples_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.samples_[i];
    return ComplexField(a.grid_, std::move(out));
}

cplx inner_product(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f, g, "inner_product");
    const auto fs = f.samples();
    const auto gs = g.samples();
    // Split accumulation keeps the compiler from serializing on one complex add.
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const double a = fs[i].real(), b = fs[i].imag();
        const double c = gs[i].real(), d = gs[i].imag();
        re += a * c + b * d;
        im += a * d - b * c;
    }
    const double h = f.grid().pitch();
    return cplx(re, im) * (h * h);
}

double norm(const ComplexField& f) { return std::sqrt(f.power()); }

namespace {

constexpr int kStencil = 6;

// Lagrange weights for nodes 0..5 evaluated at fractional position t.
std::array<double, kStencil> lagrange_weights(double t) {
    std::array<double, kStencil> w{};
    for (int i = 0; i < kStencil; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < kStencil; ++j) {
            if (j == i) continue;
            num *= (t - j);
            den *= (i - j);
        }
        w[static_cast<std::size_t>(i)] = num / den;
    }
    return w;
}

// First stencil node for fractional index u, clamped so the stencil stays on the grid.
int stencil_start(double u, int n) {
    int s = static_cast<int>(std::floor(u)) - (kStencil / 2 - 1);
    return std::clamp(s, 0, n - kStencil);
}

double phase_step(cplx from, cplx to) { return std::arg(to * std::conj(from)); }

} // namespace

cplx interpolate(const ComplexField& f, Point2 p) {
    const GridSpec& g = f.grid();
    const int n = g.n();
    const double u = g.index_of(p.x);
    const double v = g.index_of(p.y);
    constexpr double kSlack = 1e-9;
    if (u < -kSlack || v < -kSlack || u > n - 1 + kSlack || v > n - 1 + kSlack) {
        throw std::domain_error("interpolate: point outside the sampled grid");
    }
    const int sx = stencil_start(u, n);
    const int sy = stencil_start(v, n);
    const auto wx = lagrange_weights(u - sx);
    const auto wy = lagrange_weights(v - sy);
    cplx acc{};
    for (int j = 0; j < kStencil; ++j) {
        cplx row{};
        for (int i = 0; i < kStencil; ++i) row += wx[static_cast<std::size_t>(i)] * f(sx + i, sy + j);
        acc += wy[static_cast<std::size_t>(j)] * row;
    }
    return acc;
}

int winding_number(const ComplexField& f, Point2 c, double r, double amplitude_floor) {
    const GridSpec& g = f.grid();
    if (!(r > 0.0)) throw std::invalid_argument("winding_number: loop radius must be positive");
    const double lo = g.coord(0);
    const double hi = g.coord(g.n() - 1);
    if (c.x - r < lo || c.x + r > hi || c.y - r < lo || c.y + r > hi) {
        throw std::domain_error("winding_number: loop leaves the grid");
    }
    const double floor_abs = amplitude_floor * f.max_abs();
    // Half-pixel arc spacing keeps per-step phase changes far below pi.
    const int m = std::max(64, static_cast<int>(std::ceil(kTwoPi * r / (0.5 * g.pitch()))));
    double total = 0.0;
    cplx first{}, prev{};
    for (int k = 0; k <= m; ++k) {
        cplx v;
        if (k == m) {
            v = first;
        } else {
            const double t = kTwoPi * k / m;
            v = interpolate(f, {c.x + r * std::cos(t), c.y + r * std::sin(t)});
            if (!(std::abs(v) > floor_abs)) {
                throw std::domain_error("winding_number: amplitude below floor on the loop");
            }
        }
        if (k == 0) {
            first = v;
        } else {
            total += phase_step(prev, v);
        }
        prev = v;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<Singularity> find_singularities(const ComplexField& f, double amplitude_floor) {
    if (amplitude_floor < 0.0) {
        throw std::invalid_argument("find_singularities: amplitude floor must be >= 0");
    }
    const GridSpec& g = f.grid();
    const int n = g.n();
    const double floor_abs = amplitude_floor * f.max_abs();
    const auto idx = [n](int ix, int iy) { return static_cast<std::size_t>(iy) * n + ix; };

    // Phase increment along one edge, refined through the cubic midpoint when
    // the 4-point stencil fits. NaN marks an edge with undefined phase.
    const auto edge_step = [&](cplx a, cplx b, const cplx* before, const cplx* after) {
        if (!(std::abs(a) > floor_abs) || !(std::abs(b) > floor_abs)) return std::nan("");
        if (before == nullptr || after == nullptr) return phase_step(a, b);
        const cplx mid = (9.0 * (a + b) - (*before + *after)) / 16.0;
        if (!(std::abs(mid) > floor_abs)) return std::nan("");
        return phase_step(a, mid) + phase_step(mid, b);
    };

    std::vector<double> horiz(g.size(), std::nan(""));
    std::vector<double> vert(g.size(), std::nan(""));
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix + 1 < n; ++ix) {
            cplx before, after;
            const bool stencil = ix >= 1 && ix + 2 < n;
            if (stencil) {
                before = f(ix - 1, iy);
                after = f(ix + 2, iy);
            }
            horiz[idx(ix, iy)] = edge_step(f(ix, iy), f(ix + 1, iy), stencil ? &before : nullptr,
                                           stencil ? &after : nullptr);
        }
    }
    for (int iy = 0; iy + 1 < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            cplx before, after;
            const bool stencil = iy >= 1 && iy + 2 < n;
            if (stencil) {
                before = f(ix, iy - 1);
                after = f(ix, iy + 2);
            }
            vert[idx(ix, iy)] = edge_step(f(ix, iy), f(ix, iy + 1), stencil ? &before : nullptr,
                                          stencil ? &after : nullptr);
        }
    }

    std::vector<Singularity> out;
    const double h = g.pitch();
    for (int iy = 0; iy + 1 < n; ++iy) {
        for (int ix = 0; ix + 1 < n; ++ix) {
            // Counterclockwise: bottom edge, right edge, top edge reversed, left edge reversed.
            const double circ = horiz[idx(ix, iy)] + vert[idx(ix + 1, iy)] -
                                horiz[idx(ix, iy + 1)] - vert[idx(ix, iy)];
            if (std::isnan(circ)) continue;
            const int charge = static_cast<int>(std::lround(circ / kTwoPi));
            if (charge != 0) {
                out.push_back({{g.coord(ix) + 0.5 * h, g.coord(iy) + 0.5 * h}, charge});
            }
        }
    }
    return out;
}

} // namespace oamsim
