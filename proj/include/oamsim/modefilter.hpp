#pragma once

#include <optional>
#include <span>
#include <vector>

#include "oamsim/fieldgrid.hpp"
#include "oamsim/hologram.hpp"
#include "oamsim/lgmodes.hpp"

namespace oamsim {

/// Hologram followed by a mono-mode fiber coupler.
///
/// No hologram means the beam passes the plain grating border (no change of
/// OAM, no efficiency factor). The fiber mode is a Gaussian of waist
/// `fiber_waist` centered at `fiber_offset`.
struct FilterConfig {
    std::optional<HologramSpec> hologram;
    double fiber_waist = 0.25;
    Point2 fiber_offset{};

    void validate() const;
};

/// Detection amplitudes a_l = <filter | l> for l in [-L, L].
class ProjectionVector {
  public:
    ProjectionVector(int L, std::vector<cplx> amplitudes);

    /// Ideal projector onto a single charge.
    static ProjectionVector pure(int L, int l, cplx amplitude = 1.0);
    /// Ideal projector onto a superposition given as (l, amplitude) pairs.
    static ProjectionVector superposition(int L, std::span<const std::pair<int, cplx>> terms);

    int truncation() const { return L_; }
    /// Zero outside [-L, L].
    cplx operator[](int l) const;
    double total_weight() const;
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }

  private:
    int L_;
    std::vector<cplx> amplitudes_;
};

enum class FilterModel {
    /// apply_first_order: ideal blazed phase, carrier removed, sqrt(efficiency).
    first_order,
    /// transmittance -> extract_order(n = 1) -> sqrt(efficiency).
    wave_optics,
};

/// Normalized fiber Gaussian of the filter, on the grid.
ComplexField fiber_mode(const FilterConfig& filter, const GridSpec& grid);

/// The fiber mode sent backwards through the conjugate first-order filter.
/// Its overlap with an input mode equals the forward detection amplitude.
ComplexField detection_mode(const FilterConfig& filter, const GridSpec& grid);

ProjectionVector effective_projector(const FilterConfig& filter, const BeamParams& beam,
                                     const GridSpec& grid, int L,
                                     FilterModel model = FilterModel::first_order);

/// Same amplitudes computed as <detection_mode, LG_l>.
ProjectionVector reciprocal_projector(const FilterConfig& filter, const BeamParams& beam,
                                      const GridSpec& grid, int L);

/// effective_projector at each fiber offset, in input order.
std::vector<ProjectionVector> scan_projectors(const FilterConfig& filter,
                                              std::span<const Point2> offsets,
                                              const BeamParams& beam, const GridSpec& grid, int L);

} // namespace oamsim
