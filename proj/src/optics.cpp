#include "oamsim/optics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fft.hpp"

namespace oamsim {

namespace {

using detail::FftDirection;
using detail::fft2;

// Spatial frequency (1/mm) of unshifted DFT bin k.
double bin_frequency(int k, const GridSpec& g) {
    const int n = g.n();
    const int signed_k = k < n / 2 ? k : k - n;
    return signed_k / g.extent();
}

double nyquist(const GridSpec& g) { return 0.5 / g.pitch(); }

std::vector<cplx> copy_samples(const ComplexField& f) {
    return {f.samples().begin(), f.samples().end()};
}

} // namespace

ComplexField angular_spectrum(const ComplexField& f, double distance, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("angular_spectrum: wavelength must be positive");
    const GridSpec& g = f.grid();
    const double inv_lambda = 1.0 / wavelength;
    if (nyquist(g) >= inv_lambda) {
        throw std::domain_error("angular_spectrum: grid Nyquist frequency exceeds 1/lambda; pitch too fine");
    }
    if (distance == 0.0) return f;
    const int n = g.n();
    auto data = copy_samples(f);
    fft2(data, n, FftDirection::forward);
    const double inv_l2 = inv_lambda * inv_lambda;
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (int ky = 0; ky < n; ++ky) {
        const double vy = bin_frequency(ky, g);
        for (int kx = 0; kx < n; ++kx) {
            const double vx = bin_frequency(kx, g);
            const double arg = inv_l2 - vx * vx - vy * vy;
            cplx& v = data[static_cast<std::size_t>(ky) * n + kx];
            if (arg <= 0.0) {
                v = 0.0;
            } else {
                v *= std::polar(scale, kTwoPi * distance * std::sqrt(arg));
            }
        }
    }
    fft2(data, n, FftDirection::inverse);
    return ComplexField(g, std::move(data));
}

ComplexField far_field(const ComplexField& f) {
    const GridSpec& g = f.grid();
    const int n = g.n();
    const int half = n / 2;
    // Half-sample offsets on both grids turn into per-axis twiddles around a plain FFT.
    std::vector<cplx> pre(static_cast<std::size_t>(n)), post(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        pre[static_cast<std::size_t>(j)] = std::polar(sign, -kPi * (j - half) / n);
        const double sign_b = ((j - half) % 2 == 0) ? 1.0 : -1.0;
        post[static_cast<std::size_t>(j)] =
            std::polar(sign_b, -kPi * (j - half) / n - kPi / (2.0 * n));
    }
    auto data = copy_samples(f);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            data[static_cast<std::size_t>(iy) * n + ix] *=
                pre[static_cast<std::size_t>(ix)] * pre[static_cast<std::size_t>(iy)];
        }
    }
    fft2(data, n, FftDirection::forward);
    const double h2 = g.pitch() * g.pitch();
    for (int ky = 0; ky < n; ++ky) {
        for (int kx = 0; kx < n; ++kx) {
            data[static_cast<std::size_t>(ky) * n + kx] *=
                h2 * post[static_cast<std::size_t>(kx)] * post[static_cast<std::size_t>(ky)];
        }
    }
    return ComplexField(GridSpec(n, 1.0 / g.pitch()), std::move(data));
}

ComplexField extract_order(const ComplexField& after_mask, const HologramSpec& spec, int order) {
    spec.validate();
    const GridSpec& g = after_mask.grid();
    const double carrier = order * spec.line_density;
    if (std::abs(carrier) > nyquist(g)) {
        throw std::domain_error("extract_order: order carrier exceeds the grid Nyquist frequency");
    }
    const int n = g.n();
    auto data = copy_samples(after_mask);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            data[static_cast<std::size_t>(iy) * n + ix] *= std::polar(1.0, -kTwoPi * carrier * g.coord(ix));
        }
    }
    fft2(data, n, FftDirection::forward);
    const double cutoff2 = 0.25 * spec.line_density * spec.line_density;
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (int ky = 0; ky < n; ++ky) {
        const double vy = bin_frequency(ky, g);
        for (int kx = 0; kx < n; ++kx) {
            const double vx = bin_frequency(kx, g);
            cplx& v = data[static_cast<std::size_t>(ky) * n + kx];
            v = (vx * vx + vy * vy <= cutoff2) ? v * scale : cplx{};
        }
    }
    fft2(data, n, FftDirection::inverse);
    return ComplexField(g, std::move(data));
}

} // namespace oamsim
