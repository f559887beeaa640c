#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace varmesh {

/// Grayscale raster with row 0 at the top of the picture. Samples are kept
/// exactly as read; intensity() maps them to [0, 1] by dividing by maxval.
struct GrayImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint16_t> samples;  // row-major, width * height entries

    double intensity(int row, int col) const;
};

/// Reads P2 (ASCII) and P5 (binary) portable graymaps. Header tokens may be
/// separated by whitespace and '#' comments. maxval up to 65535; P5 payloads
/// use one byte per sample, or two big-endian bytes when maxval > 255.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm_file(const std::filesystem::path& path);

/// Writes P5, two big-endian bytes per sample when maxval > 255.
void write_pgm_file(const GrayImage& image, const std::filesystem::path& path);

}  // namespace varmesh
