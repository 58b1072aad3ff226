#include "arnca/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "arnca/chunk_io.hpp"
#include "arnca/parallel.hpp"

namespace arnca {

namespace {

// Moore neighborhood, window order (row-major, center skipped).
constexpr int kOffsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                {0, 1},   {1, -1}, {1, 0},  {1, 1}};

} // namespace

const char* forest_config_name(ForestConfig c) {
    switch (c) {
    case ForestConfig::Dense: return "dense";
    case ForestConfig::Sparse: return "sparse";
    case ForestConfig::Gaussian: return "gaussian";
    }
    return "?";
}

ForestConfig forest_config_from_name(const std::string& name) {
    if (name == "dense") return ForestConfig::Dense;
    if (name == "sparse") return ForestConfig::Sparse;
    if (name == "gaussian") return ForestConfig::Gaussian;
    throw std::invalid_argument("unknown forest config: " + name);
}

Grid init_forest(int n, const ForestParams& params, RngStream& rng) {
    if (params.n_seeds > n * n)
        throw std::invalid_argument("init_forest: more fire seeds than cells");
    Grid g = Grid::empty(Env::Forest, n);

    double mu_i = 0, mu_j = 0, sigma = 1;
    if (params.config == ForestConfig::Gaussian) {
        mu_i = rng.uniform_in(0, n);
        mu_j = rng.uniform_in(0, n);
        sigma = n / 4.0;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double p_tree;
            switch (params.config) {
            case ForestConfig::Dense: p_tree = params.dense_density; break;
            case ForestConfig::Sparse: p_tree = params.sparse_density; break;
            default: {
                double d2 = (i - mu_i) * (i - mu_i) + (j - mu_j) * (j - mu_j);
                p_tree = params.gaussian_peak * std::exp(-d2 / (2 * sigma * sigma));
            }
            }
            if (rng.bernoulli(p_tree)) g.at(i, j) = forest_state::kTree;
        }
    }
    int placed = 0;
    while (placed < params.n_seeds) {
        int c = static_cast<int>(rng.next_below(static_cast<uint64_t>(n) * n));
        if (g.states[c] == forest_state::kFire) continue;
        g.states[c] = forest_state::kFire;
        g.heat[c] = params.q_seed;
        ++placed;
    }
    return g;
}

Grid step_forest(const Grid& grid, const ForestParams& params,
                 bool stochastic, RngStream& rng) {
    using namespace forest_state;
    if (grid.env != Env::Forest)
        throw std::invalid_argument("step_forest: grid is not a forest grid");
    const int n = grid.n;
    Grid next = grid;

    // 3) trees accumulate heat from burning neighbors (time-t snapshot);
    //    in stochastic mode each contribution is zeroed with p_heat
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (grid.at(i, j) != kTree) continue;
            float sum = 0.0f;
            for (const auto& off : kOffsets) {
                int ii = i + off[0], jj = j + off[1];
                if (!grid.in_bounds(ii, jj)) continue;
                uint8_t ns = grid.at(ii, jj);
                if (ns != kFire && ns != kEmber) continue;
                if (stochastic) {
                    bool hit = rng.bernoulli(params.p_heat);
                    bool keep = params.transfer_with_p_heat ? hit : !hit;
                    if (!keep) continue;
                }
                sum += grid.heat[grid.idx(ii, jj)];
            }
            float add = params.q_transfer * sum;
            next.heat[next.idx(i, j)] = grid.heat[grid.idx(i, j)] + add;
        }
    }
    // 4) ignition above the threshold
    for (size_t c = 0; c < next.states.size(); ++c)
        if (grid.states[c] == kTree && next.heat[c] > params.q_threshold)
            next.states[c] = kFire;
    // 5) burning cells cool, clamped at zero
    for (size_t c = 0; c < next.states.size(); ++c)
        if (next.states[c] == kFire || next.states[c] == kEmber)
            next.heat[c] = std::max(0.0f, next.heat[c] - params.q_die);
    // 6) cells that started the tick on fire become ember
    for (size_t c = 0; c < next.states.size(); ++c)
        if (grid.states[c] == kFire) next.states[c] = kEmber;
    return next;
}

Grid init_host_pathogen(int n, const HostPathogenParams& params, RngStream& rng) {
    using namespace host_state;
    Grid g = Grid::empty(Env::HostPathogen, n);
    for (size_t c = 0; c < g.states.size(); ++c) {
        double u = rng.next_uniform();
        if (u < params.init_infected) g.states[c] = kInfected;
        else if (u < params.init_infected + params.init_healthy) g.states[c] = kHealthy;
    }
    return g;
}

Grid step_host_pathogen(const Grid& grid, const HostPathogenParams& params,
                        RngStream& rng) {
    using namespace host_state;
    if (grid.env != Env::HostPathogen)
        throw std::invalid_argument("step_host_pathogen: wrong environment");
    const int n = grid.n;
    Grid next = grid;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            uint8_t s = grid.at(i, j);
            if (s == kEmpty) continue;
            if (s == kInfected) {
                next.at(i, j) = kDead;
                continue;
            }
            // One independent trial per relevant neighbor, all drawn so the
            // stream position depends only on the time-t grid.
            bool flipped = false;
            uint8_t trigger = (s == kDead) ? kHealthy : kInfected;
            double p = (s == kDead) ? params.p_cure : params.p_infect;
            for (const auto& off : kOffsets) {
                int ii = i + off[0], jj = j + off[1];
                if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                if (grid.at(ii, jj) != trigger) continue;
                if (rng.bernoulli(p)) flipped = true;
            }
            if (flipped) next.at(i, j) = (s == kDead) ? kHealthy : kInfected;
        }
    }
    return next;
}

Grid init_stock(int n, const StockParams&, RngStream& rng) {
    using namespace stock_state;
    Grid g = Grid::empty(Env::Stock, n);
    for (size_t c = 0; c < g.states.size(); ++c) {
        g.states[c] = static_cast<uint8_t>(rng.next_below(3));
        g.buy_streak[c] = g.states[c] == kBuy ? 1 : 0;
    }
    return g;
}

Grid step_stock(const Grid& grid, const StockParams& params, RngStream& rng) {
    using namespace stock_state;
    if (grid.env != Env::Stock)
        throw std::invalid_argument("step_stock: wrong environment");
    const int n = grid.n;
    Grid next = grid;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int c = grid.idx(i, j);
            uint8_t s = grid.states[c];
            uint8_t out;
            if (s == kInactive) {
                out = kBuy; // wake up into the buying state
            } else if (grid.buy_streak[c] == 2) {
                out = kInactive; // two consecutive buys
            } else {
                int count[3] = {0, 0, 0};
                for (const auto& off : kOffsets) {
                    int ii = i + off[0], jj = j + off[1];
                    if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                    uint8_t ns = grid.at(ii, jj);
                    if (ns != kInactive) ++count[ns];
                }
                // dominant active state, ties resolved buy > sell > hold
                uint8_t dom;
                if (count[kBuy] >= count[kSell] && count[kBuy] >= count[kHold])
                    dom = kBuy;
                else if (count[kSell] >= count[kHold])
                    dom = kSell;
                else
                    dom = kHold;
                // Three draws per cell regardless of the branch taken, so
                // the stream position depends only on the time-t grid.
                double u_adopt = rng.next_uniform();
                double u_other = rng.next_uniform();
                double u_bias = rng.next_uniform();
                if (u_adopt < params.p_invest) {
                    out = dom;
                } else {
                    uint8_t others[2];
                    int k = 0;
                    for (uint8_t v : {kHold, kSell, kBuy})
                        if (v != dom) others[k++] = v;
                    out = others[u_other < 0.5 ? 0 : 1];
                }
                if (u_bias < params.market_bias) out = kBuy;
            }
            next.states[c] = out;
            next.buy_streak[c] =
                out == kBuy ? (s == kBuy ? 2 : 1) : 0;
        }
    }
    return next;
}

std::string gen_params_json(const GenSpec& spec, uint64_t master_seed) {
    nlohmann::json j;
    j["env"] = env_name(spec.env);
    j["stochastic"] = spec.env == Env::Forest ? spec.stochastic : true;
    j["n"] = spec.n;
    j["T"] = spec.T;
    j["master_seed"] = master_seed;
    switch (spec.env) {
    case Env::Forest: {
        const ForestParams& p = spec.forest;
        j["forest"] = {{"q_seed", p.q_seed},
                       {"q_transfer", p.q_transfer},
                       {"q_threshold", p.q_threshold},
                       {"q_die", p.q_die},
                       {"p_heat", p.p_heat},
                       {"transfer_with_p_heat", p.transfer_with_p_heat},
                       {"n_seeds", p.n_seeds},
                       {"config", forest_config_name(p.config)},
                       {"dense_density", p.dense_density},
                       {"sparse_density", p.sparse_density},
                       {"gaussian_peak", p.gaussian_peak}};
        break;
    }
    case Env::HostPathogen: {
        const HostPathogenParams& p = spec.host;
        j["host_pathogen"] = {{"p_cure", p.p_cure},
                              {"p_infect", p.p_infect},
                              {"init_infected", p.init_infected},
                              {"init_healthy", p.init_healthy}};
        break;
    }
    case Env::Stock: {
        const StockParams& p = spec.stock;
        j["stock"] = {{"market_bias", p.market_bias}, {"p_invest", p.p_invest}};
        break;
    }
    }
    return j.dump();
}

SequenceChunk generate_chunk(const GenSpec& spec, uint64_t master_seed,
                             uint64_t index) {
    if (spec.n < 3) throw std::invalid_argument("generate_chunk: n must be >= 3");
    if (spec.T < 2) throw std::invalid_argument("generate_chunk: T must be >= 2");
    SequenceChunk chunk;
    chunk.env = spec.env;
    chunk.stochastic = spec.env == Env::Forest ? spec.stochastic : true;
    chunk.n = spec.n;
    chunk.T = spec.T;
    chunk.params_json = gen_params_json(spec, master_seed);

    RngStream seeder(master_seed ^ index);
    chunk.seed = seeder.next_u64();
    RngStream rng(chunk.seed);

    chunk.frames.reserve(spec.T);
    switch (spec.env) {
    case Env::Forest:
        chunk.frames.push_back(init_forest(spec.n, spec.forest, rng));
        for (int t = 1; t < spec.T; ++t)
            chunk.frames.push_back(
                step_forest(chunk.frames.back(), spec.forest, spec.stochastic, rng));
        break;
    case Env::HostPathogen:
        chunk.frames.push_back(init_host_pathogen(spec.n, spec.host, rng));
        for (int t = 1; t < spec.T; ++t)
            chunk.frames.push_back(
                step_host_pathogen(chunk.frames.back(), spec.host, rng));
        break;
    case Env::Stock:
        chunk.frames.push_back(init_stock(spec.n, spec.stock, rng));
        for (int t = 1; t < spec.T; ++t)
            chunk.frames.push_back(step_stock(chunk.frames.back(), spec.stock, rng));
        break;
    }
    return chunk;
}

std::vector<std::string> generate_dataset(const GenSpec& spec, int n_chunks,
                                          uint64_t master_seed,
                                          const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths(n_chunks);
    for (int k = 0; k < n_chunks; ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "chunk_%05d.arnc", k);
        paths[k] = (std::filesystem::path(out_dir) / name).string();
    }
    parallel_for(n_chunks, [&](int k) {
        SequenceChunk chunk = generate_chunk(spec, master_seed, k);
        write_chunk(chunk, paths[k]);
    });
    return paths;
}

} // namespace arnca
