#include "arnca/grid.hpp"

#include <numeric>
#include <stdexcept>

namespace arnca {

const char* env_name(Env env) {
    switch (env) {
    case Env::Forest: return "forest";
    case Env::HostPathogen: return "host_pathogen";
    case Env::Stock: return "stock";
    }
    return "?";
}

Env env_from_name(const std::string& name) {
    if (name == "forest") return Env::Forest;
    if (name == "host_pathogen" || name == "host") return Env::HostPathogen;
    if (name == "stock") return Env::Stock;
    throw std::invalid_argument("unknown environment: " + name);
}

Grid Grid::empty(Env env, int n) {
    Grid g;
    g.env = env;
    g.n = n;
    g.states.assign(static_cast<size_t>(n) * n, 0);
    if (env == Env::Forest) g.heat.assign(static_cast<size_t>(n) * n, 0.0f);
    if (env == Env::Stock) g.buy_streak.assign(static_cast<size_t>(n) * n, 0);
    return g;
}

bool operator==(const Grid& a, const Grid& b) {
    return a.env == b.env && a.n == b.n && a.states == b.states &&
           a.heat == b.heat && a.buy_streak == b.buy_streak;
}

namespace {

const Palette kForestPalette{
    Env::Forest,
    {Rgb{0, 0, 0}, Rgb{0, 1, 0}, Rgb{1, 0, 0}, Rgb{1, 0.5f, 0}}};
const Palette kHostPalette{
    Env::HostPathogen,
    {Rgb{0, 0, 0}, Rgb{0.5f, 0.5f, 0.5f}, Rgb{0, 1, 0}, Rgb{1, 0, 0}}};
const Palette kStockPalette{
    Env::Stock,
    {Rgb{0.5f, 0.5f, 0.5f}, Rgb{1, 0, 0}, Rgb{0, 1, 0}, Rgb{0, 0, 1}}};

} // namespace

const Palette& palette_for(Env env) {
    switch (env) {
    case Env::Forest: return kForestPalette;
    case Env::HostPathogen: return kHostPalette;
    case Env::Stock: return kStockPalette;
    }
    throw std::invalid_argument("unknown environment code");
}

int TargetMask::popcount() const {
    return std::accumulate(bits.begin(), bits.end(), 0);
}

bool is_target_state(Env env, uint8_t code) {
    switch (env) {
    case Env::Forest:
        return code == forest_state::kFire || code == forest_state::kEmber;
    case Env::HostPathogen:
        return code == host_state::kHealthy;
    case Env::Stock:
        return code == stock_state::kBuy;
    }
    return false;
}

TargetMask target_mask(const Grid& grid) {
    TargetMask mask;
    mask.n = grid.n;
    mask.bits.resize(grid.states.size());
    for (size_t c = 0; c < grid.states.size(); ++c)
        mask.bits[c] = is_target_state(grid.env, grid.states[c]) ? 1 : 0;
    return mask;
}

std::vector<float> encode_rgb(const Grid& grid, const Palette& palette) {
    if (palette.env != grid.env)
        throw std::invalid_argument(
            std::string("encode_rgb: palette for ") + env_name(palette.env) +
            " applied to a " + env_name(grid.env) + " grid");
    std::vector<float> rgb(grid.states.size() * 3);
    for (size_t c = 0; c < grid.states.size(); ++c) {
        uint8_t code = grid.states[c];
        if (code >= kStatesPerEnv)
            throw std::invalid_argument("encode_rgb: state code out of range");
        const Rgb& col = palette.colors[code];
        rgb[3 * c + 0] = col.r;
        rgb[3 * c + 1] = col.g;
        rgb[3 * c + 2] = col.b;
    }
    return rgb;
}

std::vector<float> extract_neighborhoods(const std::vector<float>& field,
                                         int n, int d, int radius) {
    if (radius < 1)
        throw std::invalid_argument("extract_neighborhoods: radius must be >= 1");
    if (field.size() != static_cast<size_t>(n) * n * d)
        throw std::invalid_argument("extract_neighborhoods: field size mismatch");
    const int k = 2 * radius + 1;
    const int win = k * k;
    std::vector<float> out(static_cast<size_t>(n) * n * win * d, 0.0f);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            float* cell = &out[(static_cast<size_t>(i) * n + j) * win * d];
            int w = 0;
            for (int di = -radius; di <= radius; ++di) {
                for (int dj = -radius; dj <= radius; ++dj, ++w) {
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                    const float* src = &field[(static_cast<size_t>(ii) * n + jj) * d];
                    float* dst = cell + static_cast<size_t>(w) * d;
                    for (int c = 0; c < d; ++c) dst[c] = src[c];
                }
            }
        }
    }
    return out;
}

bool operator==(const SequenceChunk& a, const SequenceChunk& b) {
    return a.env == b.env && a.stochastic == b.stochastic && a.n == b.n &&
           a.T == b.T && a.seed == b.seed && a.params_json == b.params_json &&
           a.frames == b.frames;
}

} // namespace arnca
