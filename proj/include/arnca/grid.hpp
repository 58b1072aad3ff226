#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace arnca {

enum class Env : uint8_t { Forest = 0, HostPathogen = 1, Stock = 2 };

const char* env_name(Env env);
Env env_from_name(const std::string& name);

// Per-environment state codes. Every environment has exactly four states,
// encoded 0..3.
namespace forest_state {
inline constexpr uint8_t kEmpty = 0, kTree = 1, kFire = 2, kEmber = 3;
}
namespace host_state {
inline constexpr uint8_t kEmpty = 0, kDead = 1, kHealthy = 2, kInfected = 3;
}
namespace stock_state {
inline constexpr uint8_t kHold = 0, kSell = 1, kBuy = 2, kInactive = 3;
}

inline constexpr int kStatesPerEnv = 4;

/// n x n grid of state codes plus the environment-specific auxiliary
/// per-cell fields: heat (forest only) and buy_streak (stock only).
/// Auxiliary fields make simulation resumable and oracle-checkable; they
/// are never shown to models, which observe RGB renderings of the codes.
struct Grid {
    Env env = Env::Forest;
    int n = 0;
    std::vector<uint8_t> states;     // n*n, row-major
    std::vector<float> heat;         // n*n iff env == Forest, else empty
    std::vector<uint8_t> buy_streak; // n*n iff env == Stock, else empty

    static Grid empty(Env env, int n);

    int idx(int i, int j) const { return i * n + j; }
    uint8_t at(int i, int j) const { return states[idx(i, j)]; }
    uint8_t& at(int i, int j) { return states[idx(i, j)]; }
    bool in_bounds(int i, int j) const {
        return i >= 0 && i < n && j >= 0 && j < n;
    }
};

bool operator==(const Grid& a, const Grid& b);

struct Rgb {
    float r, g, b;
};

inline bool operator==(const Rgb& a, const Rgb& b) {
    return a.r == b.r && a.g == b.g && a.b == b.b;
}

/// Fixed, documented state-code -> color map for one environment.
/// Models only require the four colors to be pairwise distinct.
struct Palette {
    Env env;
    std::array<Rgb, kStatesPerEnv> colors;
};

const Palette& palette_for(Env env);

/// Binary per-cell map of the target state s*: burning (fire or ember)
/// for forest, healthy for host-pathogen, buy for stock.
struct TargetMask {
    int n = 0;
    std::vector<uint8_t> bits; // n*n, 0 or 1

    int popcount() const;
};

bool is_target_state(Env env, uint8_t code);
TargetMask target_mask(const Grid& grid);

/// Per-cell palette lookup; returns n*n*3 values in [0,1], row-major with
/// the channel innermost. Errors if the palette belongs to another env.
std::vector<float> encode_rgb(const Grid& grid, const Palette& palette);

/// Window extraction with zero padding. Input is an n*n*d field; output is
/// n*n*(2r+1)^2*d where entry (i,j,k,:) is the d-vector at the k-th cell of
/// the (2r+1)x(2r+1) window centered at (i,j), row-major within the window.
/// Out-of-bounds cells contribute zero vectors; the center sits at window
/// index ((2r+1)^2 - 1) / 2.
std::vector<float> extract_neighborhoods(const std::vector<float>& field,
                                         int n, int d, int radius);

/// One simulated episode: T frames from a single seeded initialization,
/// with the generation parameters snapshotted as a JSON string.
struct SequenceChunk {
    Env env = Env::Forest;
    bool stochastic = false;
    int n = 0;
    int T = 0;
    uint64_t seed = 0;
    std::string params_json;
    std::vector<Grid> frames;
};

bool operator==(const SequenceChunk& a, const SequenceChunk& b);

} // namespace arnca
