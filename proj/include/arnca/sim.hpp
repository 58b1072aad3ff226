#pragma once

#include <string>
#include <vector>

#include "arnca/grid.hpp"
#include "arnca/rng.hpp"

namespace arnca {

enum class ForestConfig { Dense, Sparse, Gaussian };

const char* forest_config_name(ForestConfig c);
ForestConfig forest_config_from_name(const std::string& name);

struct ForestParams {
    float q_seed = 6.0f;      // initial heat of a fire seed
    float q_transfer = 0.3f;  // heat transfer coefficient
    float q_threshold = 3.0f; // ignition threshold
    float q_die = 1.0f;       // per-step heat decay of burning cells
    double p_heat = 0.9;      // per-neighbor ignore probability (stochastic)
    // When set, stochastic mode transfers with probability p_heat instead
    // of ignoring with probability p_heat (the complementary reading).
    bool transfer_with_p_heat = false;
    int n_seeds = 3;
    ForestConfig config = ForestConfig::Dense;
    // Ignition needs roughly three simultaneously burning neighbors under
    // the q_transfer/q_threshold/q_die values above, so Bernoulli forests
    // below ~0.8 never sustain a front. These densities keep fires
    // spreading through a 60-frame episode.
    double dense_density = 0.90;
    double sparse_density = 0.80;
    double gaussian_peak = 0.95; // per-cell tree probability at the center
};

struct HostPathogenParams {
    double p_cure = 0.15;   // per-healthy-neighbor cure probability
    double p_infect = 0.85; // per-infected-neighbor infection probability
    double init_infected = 0.01;
    double init_healthy = 0.75;
};

struct StockParams {
    double market_bias = 0.05; // M: override outcome to buy
    double p_invest = 0.95;    // adopt the dominant neighboring state
};

Grid init_forest(int n, const ForestParams& params, RngStream& rng);
Grid step_forest(const Grid& grid, const ForestParams& params,
                 bool stochastic, RngStream& rng);

Grid init_host_pathogen(int n, const HostPathogenParams& params, RngStream& rng);
Grid step_host_pathogen(const Grid& grid, const HostPathogenParams& params,
                        RngStream& rng);

Grid init_stock(int n, const StockParams& params, RngStream& rng);
Grid step_stock(const Grid& grid, const StockParams& params, RngStream& rng);

struct GenSpec {
    Env env = Env::Forest;
    bool stochastic = false;
    int n = 64;
    int T = 60;
    ForestParams forest;
    HostPathogenParams host;
    StockParams stock;
};

/// Simulate one chunk with the stream derived from (master_seed, index).
SequenceChunk generate_chunk(const GenSpec& spec, uint64_t master_seed,
                             uint64_t index);

/// Generate n_chunks chunk files under out_dir (chunk_00000.arnc, ...).
/// Chunks are independent across indices, so generation parallelizes over
/// ARNCA_THREADS workers; the files are byte-identical either way.
std::vector<std::string> generate_dataset(const GenSpec& spec, int n_chunks,
                                          uint64_t master_seed,
                                          const std::string& out_dir);

std::string gen_params_json(const GenSpec& spec, uint64_t master_seed);

} // namespace arnca
