#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "oamsim/fieldgrid.hpp"

/// CSV and binary PGM writers used by the command-line tool.
namespace oamsim::io {

/// Decimal, 9 significant digits.
std::string format_number(double v);

/// Header plus rows, comma separated, LF line endings. Throws std::runtime_error on I/O failure.
void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<std::string>> rows);

/// 8-bit P5 graymap. `pixels` is row-major with the first row at the top.
void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> pixels);

/// Grid-ordered values (y slow, y increasing) flipped so +y is up in the image.
std::vector<std::uint8_t> flip_rows(std::span<const std::uint8_t> grid_order, int width, int height);

/// |f|^2 normalized to its maximum, 0..255.
std::vector<std::uint8_t> intensity_gray(const ComplexField& f);

/// arg f mapped [-pi, pi] -> [0, 255].
std::vector<std::uint8_t> phase_gray(const ComplexField& f);

/// Non-negative values normalized to their maximum, 0..255.
std::vector<std::uint8_t> value_gray(std::span<const double> values);

/// Mask phase mapped [0, 2pi] -> [0, 255].
std::vector<std::uint8_t> mask_gray(std::span<const double> phase);

} // namespace oamsim::io
