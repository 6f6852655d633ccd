#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

/// Complex scalar fields sampled on centered square grids.
///
/// All lengths in this library are in millimetres unless a name says
/// otherwise. Samples are stored row-major with y as the slow index, so
/// sample (ix, iy) lives at x = coord(ix), y = coord(iy).
namespace oamsim {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Thrown when two fields that must share a grid do not.
class GridMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class GridSpec {
  public:
    static constexpr int kMinSamples = 16;

    GridSpec(int n, double extent);

    int n() const { return n_; }
    double extent() const { return extent_; }
    double pitch() const { return extent_ / n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

    /// Physical coordinate of sample index j: (j - n/2 + 1/2) * pitch.
    double coord(int j) const { return (j - n_ / 2 + 0.5) * pitch(); }
    /// Fractional sample index of a physical coordinate (inverse of coord).
    double index_of(double x) const { return x / pitch() + n_ / 2 - 0.5; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

  private:
    int n_;
    double extent_;
};

GridSpec make_grid(int n, double extent);

class ComplexField {
  public:
    /// Zero field.
    explicit ComplexField(GridSpec grid);
    /// Takes ownership of samples; throws on size mismatch or non-finite values.
    ComplexField(GridSpec grid, std::vector<cplx> samples);

    /// Samples fn(x, y) at every grid point.
    template <class Fn>
    static ComplexField from_function(const GridSpec& grid, Fn&& fn) {
        std::vector<cplx> s(grid.size());
        const int n = grid.n();
        for (int iy = 0; iy < n; ++iy) {
            const double y = grid.coord(iy);
            for (int ix = 0; ix < n; ++ix) {
                s[static_cast<std::size_t>(iy) * n + ix] = fn(grid.coord(ix), y);
            }
        }
        return ComplexField(grid, std::move(s));
    }

    const GridSpec& grid() const { return grid_; }
    std::span<const cplx> samples() const { return samples_; }
    cplx operator()(int ix, int iy) const {
        return samples_[static_cast<std::size_t>(iy) * grid_.n() + ix];
    }

    double max_abs() const;
    /// Sum |f|^2 * pitch^2.
    double power() const;

    ComplexField scaled(cplx factor) const;
    /// Pointwise product; grids must match.
    ComplexField multiplied(const ComplexField& other) const;
    ComplexField conjugated() const;

    friend ComplexField operator+(const ComplexField& a, const ComplexField& b);
    friend ComplexField operator-(const ComplexField& a, const ComplexField& b);

  private:
    GridSpec grid_;
    std::vector<cplx> samples_;
};

/// Discrete <f, g> = sum conj(f) g pitch^2.
cplx inner_product(const ComplexField& f, const ComplexField& g);

/// L2 norm sqrt(<f, f>).
double norm(const ComplexField& f);

/// Field value at an arbitrary point by separable 6-point Lagrange
/// interpolation. Points outside the sampled square throw.
cplx interpolate(const ComplexField& f, Point2 p);

inline constexpr double kDefaultAmplitudeFloor = 1e-8;

/// Integer phase winding (1/2pi) of f around a circle.
///
/// Throws std::domain_error when the loop leaves the grid or crosses a
/// point whose amplitude is below floor * max|f|.
int winding_number(const ComplexField& f, Point2 loop_center, double loop_radius,
                   double amplitude_floor = kDefaultAmplitudeFloor);

struct Singularity {
    Point2 position;
    int charge = 0;
};

/// Phase vortices found by plaquette circulation.
///
/// Each 2x2 plaquette whose edge phase increments sum to a nonzero multiple
/// of 2pi is reported at its center. Edge increments are split at a
/// 4-point interpolated midpoint so that a charge-2 vortex centered in a
/// plaquette (two half-turn steps per edge) is still counted correctly.
/// Plaquettes touching samples below amplitude_floor * max|f| are skipped.
std::vector<Singularity> find_singularities(const ComplexField& f,
                                            double amplitude_floor = kDefaultAmplitudeFloor);

} // namespace oamsim
