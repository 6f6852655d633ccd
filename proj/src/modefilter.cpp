#include "oamsim/modefilter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oamsim/optics.hpp"
#include "parallel.hpp"

namespace oamsim {

void FilterConfig::validate() const {
    if (!(fiber_waist > 0.0)) throw std::invalid_argument("filter: fiber_waist must be positive");
    if (hologram) hologram->validate();
}

ProjectionVector::ProjectionVector(int L, std::vector<cplx> amplitudes)
    : L_(L), amplitudes_(std::move(amplitudes)) {
    if (L < 0 || amplitudes_.size() != static_cast<std::size_t>(2 * L + 1)) {
        throw std::invalid_argument("ProjectionVector: need 2L+1 amplitudes");
    }
}

ProjectionVector ProjectionVector::pure(int L, int l, cplx amplitude) {
    const std::pair<int, cplx> term{l, amplitude};
    return superposition(L, std::span(&term, 1));
}

ProjectionVector ProjectionVector::superposition(int L, std::span<const std::pair<int, cplx>> terms) {
    std::vector<cplx> a(static_cast<std::size_t>(2 * L + 1));
    for (const auto& [l, amp] : terms) {
        if (l < -L || l > L) {
            throw std::out_of_range("ProjectionVector: charge " + std::to_string(l) +
                                    " outside truncation " + std::to_string(L));
        }
        a[static_cast<std::size_t>(l + L)] += amp;
    }
    return ProjectionVector(L, std::move(a));
}

cplx ProjectionVector::operator[](int l) const {
    if (l < -L_ || l > L_) return {};
    return amplitudes_[static_cast<std::size_t>(l + L_)];
}

double ProjectionVector::total_weight() const {
    double s = 0.0;
    for (const cplx& a : amplitudes_) s += std::norm(a);
    return s;
}

ComplexField fiber_mode(const FilterConfig& filter, const GridSpec& grid) {
    filter.validate();
    return eval_lg({0, 0}, BeamParams(filter.fiber_waist), grid, filter.fiber_offset);
}

ComplexField detection_mode(const FilterConfig& filter, const GridSpec& grid) {
    ComplexField g = fiber_mode(filter, grid);
    if (!filter.hologram) return g;
    HologramSpec conj = *filter.hologram;
    conj.delta_m = -conj.delta_m;
    return apply_first_order(g, conj);
}

namespace {

void check_truncation(int L) {
    if (L < 0) throw std::invalid_argument("projector: truncation L must be >= 0");
}

ComplexField through_filter(const ComplexField& mode, const FilterConfig& filter, FilterModel model) {
    if (!filter.hologram) return mode;
    const HologramSpec& h = *filter.hologram;
    if (model == FilterModel::first_order) return apply_first_order(mode, h);
    const ComplexField after = mode.multiplied(transmittance(h, mode.grid()));
    return extract_order(after, h, 1).scaled(std::sqrt(h.first_order_efficiency));
}

std::vector<ComplexField> filtered_modes(const FilterConfig& filter, const BeamParams& beam,
                                         const GridSpec& grid, int L, FilterModel model) {
    std::vector<ComplexField> modes(static_cast<std::size_t>(2 * L + 1), ComplexField(grid));
    detail::parallel_for(modes.size(), [&](std::size_t i) {
        const int l = static_cast<int>(i) - L;
        modes[i] = through_filter(eval_lg({l, 0}, beam, grid), filter, model);
    });
    return modes;
}

} // namespace

ProjectionVector effective_projector(const FilterConfig& filter, const BeamParams& beam,
                                     const GridSpec& grid, int L, FilterModel model) {
    check_truncation(L);
    const ComplexField fiber = fiber_mode(filter, grid);
    const auto modes = filtered_modes(filter, beam, grid, L, model);
    std::vector<cplx> a(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) a[i] = inner_product(fiber, modes[i]);
    return ProjectionVector(L, std::move(a));
}

ProjectionVector reciprocal_projector(const FilterConfig& filter, const BeamParams& beam,
                                      const GridSpec& grid, int L) {
    check_truncation(L);
    const ComplexField d = detection_mode(filter, grid);
    std::vector<cplx> a(static_cast<std::size_t>(2 * L + 1));
    for (int l = -L; l <= L; ++l) {
        a[static_cast<std::size_t>(l + L)] = inner_product(d, eval_lg({l, 0}, beam, grid));
    }
    return ProjectionVector(L, std::move(a));
}

std::vector<ProjectionVector> scan_projectors(const FilterConfig& filter,
                                              std::span<const Point2> offsets,
                                              const BeamParams& beam, const GridSpec& grid, int L) {
    check_truncation(L);
    filter.validate();
    const double lo = grid.coord(0), hi = grid.coord(grid.n() - 1);
    for (const Point2& p : offsets) {
        if (p.x < lo || p.x > hi || p.y < lo || p.y > hi) {
            throw std::domain_error("scan_projectors: fiber offset outside the grid");
        }
    }
    const auto modes = filtered_modes(filter, beam, grid, L, FilterModel::first_order);
    std::vector<ProjectionVector> out(offsets.size(), ProjectionVector(L, std::vector<cplx>(modes.size())));
    detail::parallel_for(offsets.size(), [&](std::size_t k) {
        FilterConfig at = filter;
        at.fiber_offset = offsets[k];
        const ComplexField fiber = fiber_mode(at, grid);
        std::vector<cplx> a(modes.size());
        for (std::size_t i = 0; i < modes.size(); ++i) a[i] = inner_product(fiber, modes[i]);
        out[k] = ProjectionVector(L, std::move(a));
    });
    return out;
}

} // namespace oamsim
