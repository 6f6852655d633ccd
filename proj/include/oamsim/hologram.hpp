#pragma once

#include "oamsim/fieldgrid.hpp"

namespace oamsim {

/// Blazed fork phase grating.
///
/// Grating lines run along y; the carrier phase is 2 pi x / period with x
/// measured from the grid center. The dislocation (delta_m edge
/// dislocations) sits at `dislocation_offset`, so sliding the hologram
/// across the beam moves only the spiral term. A hologram whose dislocation
/// is moved far out of the beam acts as a plain grating; use delta_m = 0 for
/// that limit.
struct HologramSpec {
    int delta_m = 0;
    /// Lines per mm.
    double line_density = 20.0;
    Point2 dislocation_offset{};
    /// Phase modulation depth in radians, (0, 2pi].
    double blaze_depth = kTwoPi;
    /// Power diffracted into the first order, applied as a scalar.
    double first_order_efficiency = 0.18;
    /// Side of the square hologram, mm.
    double aperture = 5.0;

    double period() const { return 1.0 / line_density; }
    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    friend bool operator==(const HologramSpec&, const HologramSpec&) = default;
};

/// Unblazed phase of the fork at (x, y): delta_m * phi' + 2 pi x / period.
double fork_phase(const HologramSpec& spec, double x, double y);

/// Phase-only mask exp(i blaze * saw(fork_phase)), saw(t) = mod(t, 2pi) / 2pi.
/// Samples outside the aperture are zero.
ComplexField transmittance(const HologramSpec& spec, const GridSpec& grid);

/// Mask phase in [0, blaze_depth) at each sample (0 outside the aperture),
/// row-major like ComplexField.
std::vector<double> mask_phase(const HologramSpec& spec, const GridSpec& grid);

/// Hologram turned over about the axis perpendicular to its lines: the
/// dislocation handedness flips (delta_m -> -delta_m) and the x offset is
/// mirrored. Involution.
HologramSpec rotate_180(const HologramSpec& spec);

/// Idealized first-order channel with the carrier removed:
/// f * exp(i delta_m phi') * sqrt(first_order_efficiency).
ComplexField apply_first_order(const ComplexField& f, const HologramSpec& spec);

} // namespace oamsim
