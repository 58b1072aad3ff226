#pragma once

#include <string>
#include <vector>

#include "arnca/grid.hpp"
#include "arnca/metrics.hpp"

namespace arnca {

/// Binary PPM (P6). rgb holds 3 bytes per pixel, row-major.
void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb);

/// Palette-colored state image of one frame.
std::vector<uint8_t> render_states(const Grid& grid);

/// Grayscale probability heatmap; 0 maps to 0, 1 maps to 255.
std::vector<uint8_t> render_probabilities(const ProbMap& map);

} // namespace arnca
