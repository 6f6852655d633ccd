#include "oamsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace oamsim::io {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

std::uint8_t to_byte(double unit) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
}

} // namespace

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<std::string>> rows) {
    auto os = open_for_write(path);
    const auto line = [&os](std::span<const std::string> cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> pixels) {
    if (width <= 0 || height <= 0 ||
        pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
    }
    auto os = open_for_write(path);
    os << "P5\n" << width << ' ' << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<std::uint8_t> flip_rows(std::span<const std::uint8_t> grid_order, int width, int height) {
    std::vector<std::uint8_t> out(grid_order.size());
    for (int r = 0; r < height; ++r) {
        std::copy_n(grid_order.begin() + static_cast<std::ptrdiff_t>(r) * width, width,
                    out.begin() + static_cast<std::ptrdiff_t>(height - 1 - r) * width);
    }
    return out;
}

std::vector<std::uint8_t> intensity_gray(const ComplexField& f) {
    std::vector<double> v;
    v.reserve(f.samples().size());
    for (const cplx& s : f.samples()) v.push_back(std::norm(s));
    return value_gray(v);
}

std::vector<std::uint8_t> phase_gray(const ComplexField& f) {
    std::vector<std::uint8_t> out;
    out.reserve(f.samples().size());
    for (const cplx& s : f.samples()) out.push_back(to_byte((std::arg(s) + kPi) / kTwoPi));
    return out;
}

std::vector<std::uint8_t> value_gray(std::span<const double> values) {
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, v);
    std::vector<std::uint8_t> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(mx > 0.0 ? to_byte(v / mx) : 0);
    return out;
}

std::vector<std::uint8_t> mask_gray(std::span<const double> phase) {
    std::vector<std::uint8_t> out;
    out.reserve(phase.size());
    for (double p : phase) out.push_back(to_byte(p / kTwoPi));
    return out;
}

} // namespace oamsim::io
