#pragma once

#include "oamsim/fieldgrid.hpp"
#include "oamsim/hologram.hpp"

namespace oamsim {

/// Exact scalar free-space propagation by the angular-spectrum method.
///
/// Transfer function exp(i 2 pi z sqrt(1/lambda^2 - nu^2)); evanescent
/// components are zeroed. Negative distances propagate backwards. Throws
/// std::domain_error when the grid Nyquist frequency reaches 1/lambda.
ComplexField angular_spectrum(const ComplexField& f, double distance, double wavelength);

/// Centered, energy-preserving continuous Fourier transform sampled on the
/// frequency grid GridSpec(n, 1 / pitch): F(nu) ~ sum f(x) exp(-2 pi i nu.x) pitch^2.
/// Output coordinates are spatial frequencies in 1/mm.
ComplexField far_field(const ComplexField& f);

/// Complex envelope of diffraction order n after a grating.
///
/// Demodulates the n-th carrier exp(i n 2 pi x / period), then keeps the
/// spatial frequencies within line_density / 2 of it (circular pass band).
/// Throws std::domain_error if |n| * line_density exceeds the grid Nyquist
/// frequency.
ComplexField extract_order(const ComplexField& after_mask, const HologramSpec& spec, int order);

} // namespace oamsim
