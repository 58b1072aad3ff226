#include "arnca/render.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace arnca {

namespace {

uint8_t channel_byte(float v) {
    float clamped = std::min(1.0f, std::max(0.0f, v));
    return static_cast<uint8_t>(std::lround(clamped * 255.0f));
}

} // namespace

void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb) {
    if (rgb.size() != static_cast<size_t>(width) * height * 3)
        throw std::invalid_argument("write_ppm: payload size mismatch");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "P6\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()),
              static_cast<std::streamsize>(rgb.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<uint8_t> render_states(const Grid& grid) {
    const Palette& palette = palette_for(grid.env);
    std::vector<uint8_t> rgb(grid.states.size() * 3);
    for (size_t c = 0; c < grid.states.size(); ++c) {
        const Rgb& col = palette.colors[grid.states[c]];
        rgb[3 * c + 0] = channel_byte(col.r);
        rgb[3 * c + 1] = channel_byte(col.g);
        rgb[3 * c + 2] = channel_byte(col.b);
    }
    return rgb;
}

std::vector<uint8_t> render_probabilities(const ProbMap& map) {
    std::vector<uint8_t> rgb(map.p.size() * 3);
    for (size_t c = 0; c < map.p.size(); ++c) {
        uint8_t v = channel_byte(map.p[c]);
        rgb[3 * c + 0] = v;
        rgb[3 * c + 1] = v;
        rgb[3 * c + 2] = v;
    }
    return rgb;
}

} // namespace arnca
