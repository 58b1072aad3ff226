// Command-line entry point: dataset generation, training, evaluation,
// rendering and self-verification, each emitting a reproducibility manifest.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arnca/chunk_io.hpp"
#include "arnca/gradcheck.hpp"
#include "arnca/manifest.hpp"
#include "arnca/metrics.hpp"
#include "arnca/model.hpp"
#include "arnca/refcheck.hpp"
#include "arnca/render.hpp"
#include "arnca/sim.hpp"
#include "arnca/train.hpp"

namespace fs = std::filesystem;
using namespace arnca;

namespace {

std::vector<std::string> list_chunk_files(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".arnc")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw std::runtime_error("no .arnc chunk files under " + dir);
    return files;
}

std::vector<SequenceChunk> load_chunks(const std::vector<std::string>& files) {
    std::vector<SequenceChunk> chunks;
    chunks.reserve(files.size());
    for (const std::string& f : files) chunks.push_back(read_chunk(f));
    return chunks;
}

void add_digests(RunManifest& manifest, const std::vector<std::string>& files) {
    for (const std::string& f : files) manifest.input_digests[f] = file_digest(f);
}

RunManifest start_manifest(const std::string& command,
                           std::map<std::string, std::string> flags,
                           uint64_t seed) {
    RunManifest manifest;
    manifest.command = command;
    manifest.flags = std::move(flags);
    manifest.seed = seed;
    manifest.started_at = timestamp_now();
    return manifest;
}

void finish_manifest(RunManifest& manifest, const std::string& out_dir) {
    manifest.finished_at = timestamp_now();
    fs::create_directories(out_dir);
    write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
}

struct GenArgs {
    std::string env = "forest";
    std::string variant = "stoch";
    int n = 32;
    int frames = 0;
    int chunks = 10;
    uint64_t seed = 0;
    std::string out;
    std::string forest_config = "dense";
};

int cmd_gen(const GenArgs& args) {
    GenSpec spec;
    spec.env = env_from_name(args.env);
    if (args.variant != "det" && args.variant != "stoch")
        throw CLI::ValidationError("--variant must be det or stoch");
    if (args.variant == "det" && spec.env != Env::Forest)
        throw CLI::ValidationError(std::string(env_name(spec.env)) +
                                   " has no deterministic rule; use --variant stoch");
    spec.stochastic = args.variant == "stoch";
    spec.n = args.n;
    spec.T = args.frames > 0 ? args.frames : (spec.env == Env::Forest ? 60 : 30);
    spec.forest.config = forest_config_from_name(args.forest_config);

    RunManifest manifest = start_manifest(
        "gen",
        {{"env", args.env},
         {"variant", args.variant},
         {"n", std::to_string(args.n)},
         {"frames", std::to_string(spec.T)},
         {"chunks", std::to_string(args.chunks)},
         {"seed", std::to_string(args.seed)},
         {"forest_config", args.forest_config},
         {"out", args.out}},
        args.seed);

    std::string chunk_dir = (fs::path(args.out) / "chunks").string();
    auto files = generate_dataset(spec, args.chunks, args.seed, chunk_dir);
    std::cout << "wrote " << files.size() << " chunks under " << chunk_dir << "\n";
    finish_manifest(manifest, args.out);
    return 0;
}

struct TrainArgs {
    std::string model = "arnca";
    std::string data;
    std::string valid_data;
    double fraction = 1.0;
    int u = 32;
    int radius = 1;
    int epochs = 300;
    double lr = 3e-4;
    int batch = 4;
    uint64_t seed = 0;
    std::string out;
    int t_obs = 10;
    int t_pred = 0;
    std::string cell = "lstm";
    std::string pred_input = "zeros";
    bool attention_scale = false;
    bool obs_loss = false;
    int valid_every = 10;
};

int cmd_train(const TrainArgs& args) {
    auto files = list_chunk_files(args.data);
    auto chunks = load_chunks(files);

    TrainConfig cfg;
    cfg.model.kind = model_kind_from_name(args.model);
    cfg.model.env = chunks[0].env;
    cfg.model.u = args.u;
    cfg.model.radius = args.radius;
    cfg.model.recurrent =
        args.cell == "rnn" ? RecurrentKind::PlainRnn : RecurrentKind::Lstm;
    cfg.model.attention_scale = args.attention_scale;
    cfg.model.prediction_input = args.pred_input == "prob_feedback"
                                     ? PredictionInput::ProbFeedback
                                     : PredictionInput::Zeros;
    cfg.model.trained_n = chunks[0].n;
    cfg.t_obs = args.t_obs;
    cfg.t_pred = args.t_pred > 0 ? args.t_pred : chunks[0].T;
    cfg.epochs = args.epochs;
    cfg.lr = args.lr;
    cfg.batch = args.batch;
    cfg.data_fraction = args.fraction;
    cfg.seed = args.seed;
    cfg.valid_every = args.valid_every;
    cfg.obs_window_loss = args.obs_loss;

    RunManifest manifest = start_manifest(
        "train",
        {{"model", args.model},
         {"data", args.data},
         {"valid_data", args.valid_data},
         {"fraction", std::to_string(args.fraction)},
         {"u", std::to_string(args.u)},
         {"radius", std::to_string(args.radius)},
         {"epochs", std::to_string(args.epochs)},
         {"lr", std::to_string(args.lr)},
         {"batch", std::to_string(args.batch)},
         {"seed", std::to_string(args.seed)},
         {"t_obs", std::to_string(cfg.t_obs)},
         {"t_pred", std::to_string(cfg.t_pred)},
         {"cell", args.cell},
         {"pred_input", args.pred_input},
         {"out", args.out}},
        args.seed);
    add_digests(manifest, files);

    std::vector<SequenceChunk> valid;
    if (!args.valid_data.empty()) {
        auto valid_files = list_chunk_files(args.valid_data);
        add_digests(manifest, valid_files);
        valid = load_chunks(valid_files);
    }

    TrainResult result = train(cfg, chunks, valid, &std::cout);
    std::cout << "parameters: " << result.params.count() << "\n";

    fs::create_directories(fs::path(args.out) / "ckpt");
    fs::create_directories(fs::path(args.out) / "logs");
    std::string ckpt = (fs::path(args.out) / "ckpt" / "model.arnp").string();
    ad::save_params(result.params, ckpt);
    save_model_config(cfg.model, (fs::path(args.out) / "ckpt" / "model.json").string());
    write_train_log_csv(result.log, (fs::path(args.out) / "logs" / "train.csv").string());
    std::cout << "checkpoint: " << ckpt << "\n";
    finish_manifest(manifest, args.out);
    return 0;
}

struct EvalArgs {
    std::string ckpt;
    std::string data;
    int t_obs = 10;
    int t_pred = 0;
    std::string out;
    bool oracle = false;
    std::string baseline;
};

int cmd_eval(const EvalArgs& args) {
    auto files = list_chunk_files(args.data);
    auto chunks = load_chunks(files);
    int t_pred = args.t_pred > 0 ? args.t_pred : chunks[0].T;

    RunManifest manifest = start_manifest("eval",
                                          {{"ckpt", args.ckpt},
                                           {"data", args.data},
                                           {"t_obs", std::to_string(args.t_obs)},
                                           {"t_pred", std::to_string(t_pred)},
                                           {"oracle", args.oracle ? "true" : "false"},
                                           {"baseline", args.baseline},
                                           {"out", args.out}},
                                          0);
    add_digests(manifest, files);

    EvalReport report;
    if (args.oracle) {
        report = evaluate_oracle(chunks, args.t_obs, t_pred);
    } else if (args.baseline == "persistence") {
        report = evaluate_persistence(chunks, args.t_obs, t_pred);
    } else if (!args.baseline.empty()) {
        throw CLI::ValidationError("unknown baseline: " + args.baseline);
    } else {
        if (args.ckpt.empty())
            throw CLI::ValidationError("--ckpt is required unless --oracle or --baseline");
        manifest.input_digests[args.ckpt] = file_digest(args.ckpt);
        std::string sidecar = fs::path(args.ckpt).replace_extension(".json").string();
        ModelConfig cfg = load_model_config(sidecar);
        auto params = ad::load_params<float>(args.ckpt);
        // scale transfer needs no special casing: the same evaluation runs
        // regardless of the checkpoint's training scale
        report = evaluate(cfg, params, chunks, args.t_obs, t_pred);
    }

    fs::create_directories(args.out);
    std::string report_path = (fs::path(args.out) / "report.json").string();
    std::ofstream json_out(report_path, std::ios::trunc);
    json_out << eval_report_to_json(report) << "\n";
    json_out.close();

    std::printf("F1  %.4f +- %.4f\n", report.f1_mean, report.f1_std);
    if (std::isfinite(report.auc_mean))
        std::printf("AUC %.4f +- %.4f (%d frames excluded)\n", report.auc_mean,
                    report.auc_std, report.auc_excluded_frames);
    else
        std::printf("AUC undefined: all %d frames single-class\n",
                    report.auc_excluded_frames);
    std::cout << "report: " << report_path << "\n";
    finish_manifest(manifest, args.out);
    return 0;
}

struct RenderArgs {
    std::string chunk;
    std::string ckpt;
    std::string out;
    int t_obs = 10;
    int t_pred = 0;
    bool overlay = false;
};

int cmd_render(const RenderArgs& args) {
    SequenceChunk chunk = read_chunk(args.chunk);
    int t_pred = args.t_pred > 0 ? args.t_pred : chunk.T;

    RunManifest manifest = start_manifest("render",
                                          {{"chunk", args.chunk},
                                           {"ckpt", args.ckpt},
                                           {"t_obs", std::to_string(args.t_obs)},
                                           {"t_pred", std::to_string(t_pred)},
                                           {"overlay", args.overlay ? "true" : "false"},
                                           {"out", args.out}},
                                          0);
    manifest.input_digests[args.chunk] = file_digest(args.chunk);

    std::string render_dir = (fs::path(args.out) / "renders").string();
    fs::create_directories(render_dir);
    char name[64];
    for (int t = 0; t < chunk.T; ++t) {
        std::snprintf(name, sizeof(name), "state_%03d.ppm", t);
        write_ppm((fs::path(render_dir) / name).string(), chunk.n, chunk.n,
                  render_states(chunk.frames[t]));
    }

    if (!args.ckpt.empty()) {
        manifest.input_digests[args.ckpt] = file_digest(args.ckpt);
        std::string sidecar = fs::path(args.ckpt).replace_extension(".json").string();
        ModelConfig cfg = load_model_config(sidecar);
        auto params = ad::load_params<float>(args.ckpt);
        auto maps = rollout_infer(cfg, params, chunk, args.t_obs, t_pred);

        std::ofstream csv((fs::path(render_dir) / "metrics.csv").string(),
                          std::ios::trunc);
        csv << "frame,f1,auc\n";
        for (int k = 0; k < static_cast<int>(maps.size()); ++k) {
            int t = args.t_obs + k;
            ProbMap map = tensor_to_map(maps[k]);
            std::snprintf(name, sizeof(name), "pred_%03d.ppm", t);
            std::vector<uint8_t> pixels = render_probabilities(map);
            if (args.overlay) {
                // tint cells that truly hold the target state with the
                // palette color of that state
                TargetMask mask = target_mask(chunk.frames[t]);
                const Palette& pal = palette_for(chunk.env);
                Rgb target_color{1, 0, 0};
                for (uint8_t code = 0; code < kStatesPerEnv; ++code)
                    if (is_target_state(chunk.env, code)) {
                        target_color = pal.colors[code];
                        break;
                    }
                for (size_t c = 0; c < mask.bits.size(); ++c) {
                    if (!mask.bits[c]) continue;
                    pixels[3 * c + 0] =
                        static_cast<uint8_t>((pixels[3 * c + 0] + 255 * target_color.r) / 2);
                    pixels[3 * c + 1] =
                        static_cast<uint8_t>((pixels[3 * c + 1] + 255 * target_color.g) / 2);
                    pixels[3 * c + 2] =
                        static_cast<uint8_t>((pixels[3 * c + 2] + 255 * target_color.b) / 2);
                }
            }
            write_ppm((fs::path(render_dir) / name).string(), chunk.n, chunk.n,
                      pixels);
            std::vector<ProbMap> one_map = {map};
            std::vector<TargetMask> one_mask = {target_mask(chunk.frames[t])};
            double f1 = f1_score(one_map, one_mask);
            double auc = auc_roc(one_map, one_mask);
            char row[96];
            if (std::isfinite(auc))
                std::snprintf(row, sizeof(row), "%d,%.9g,%.9g\n", t, f1, auc);
            else
                std::snprintf(row, sizeof(row), "%d,%.9g,\n", t, f1);
            csv << row;
        }
    }
    std::cout << "renders under " << render_dir << "\n";
    finish_manifest(manifest, args.out);
    return 0;
}

// ---- verify suites: quick self-checks against the naive references ----

struct VerifyState {
    int failures = 0;
    void report(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

void verify_sim(VerifyState& state) {
    // production forest stepper vs naive transcription, random grids
    ForestParams params;
    RngStream rng(1009);
    bool forest_ok = true;
    for (int trial = 0; trial < 20 && forest_ok; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(8));
        Grid g = Grid::empty(Env::Forest, n);
        for (auto& s : g.states) s = static_cast<uint8_t>(rng.next_below(4));
        for (size_t c = 0; c < g.heat.size(); ++c)
            g.heat[c] = static_cast<float>(rng.next_uniform() * 6.0);
        for (int step = 0; step < 3; ++step) {
            std::vector<uint8_t> ref_s;
            std::vector<float> ref_q;
            refcheck::step_forest(g.states, g.heat, n, params.q_transfer,
                                  params.q_threshold, params.q_die, ref_s, ref_q);
            RngStream unused(0);
            Grid next = step_forest(g, params, false, unused);
            forest_ok = forest_ok && next.states == ref_s && next.heat == ref_q;
            g = std::move(next);
        }
    }
    state.report("sim.forest_reference", forest_ok);

    // Monte Carlo law: healthy + 2 infected neighbors -> 0.9775
    HostPathogenParams host;
    const int trials = 20000;
    int hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Grid g = Grid::empty(Env::HostPathogen, 3);
        g.at(1, 1) = host_state::kHealthy;
        g.at(0, 0) = host_state::kInfected;
        g.at(2, 2) = host_state::kInfected;
        hits += step_host_pathogen(g, host, rng).at(1, 1) == host_state::kInfected;
    }
    double p = 0.9775, freq = hits / double(trials);
    double sigma = std::sqrt(p * (1 - p) / trials);
    state.report("sim.host_infection_law", std::abs(freq - p) < 4 * sigma,
                 "freq " + std::to_string(freq));

    // stock alternation rules
    StockParams stock;
    Grid g = init_stock(10, stock, rng);
    bool stock_ok = true;
    for (int step = 0; step < 50 && stock_ok; ++step) {
        Grid next = step_stock(g, stock, rng);
        for (size_t c = 0; c < g.states.size(); ++c) {
            if (g.states[c] == stock_state::kInactive)
                stock_ok = stock_ok && next.states[c] == stock_state::kBuy;
            if (next.states[c] == stock_state::kInactive)
                stock_ok = stock_ok && g.buy_streak[c] == 2;
        }
        g = std::move(next);
    }
    state.report("sim.stock_alternation", stock_ok);

    // chunk container round-trip
    GenSpec spec;
    spec.env = Env::Stock;
    spec.n = 8;
    spec.T = 6;
    SequenceChunk chunk = generate_chunk(spec, 77, 0);
    state.report("sim.chunk_roundtrip",
                 deserialize_chunk(serialize_chunk(chunk)) == chunk);
}

void verify_grad(VerifyState& state) {
    using ad::Tape;
    using ad::Var;
    RngStream rng(2027);
    ad::ParamStore<double> store;
    store.create("w", ad::glorot_uniform<double>({5, 3}, 5, 3, rng));
    store.create("x", ad::glorot_uniform<double>({4, 5}, 4, 5, rng));
    store.create("b", ad::glorot_uniform<double>({3}, 5, 3, rng));
    ad::LossFn<double> primitive_loss = [](Tape<double>& tape,
                                           const std::map<std::string, Var>& v) {
        Var y = ad::tanh_op(tape, ad::linear(tape, v.at("x"), v.at("w"), v.at("b")));
        Var s = ad::softmax_lastdim(tape, y);
        return ad::sum_all(tape, ad::mul(tape, s, y));
    };
    auto rep = ad::grad_check(primitive_loss, store);
    state.report("grad.primitives", rep.max_rel_err < 1e-4,
                 "max rel err " + std::to_string(rep.max_rel_err));

    ModelConfig cfg;
    cfg.kind = ModelKind::Arnca;
    cfg.env = Env::Forest;
    cfg.u = 4;
    ad::ParamStore<double> model_store;
    RngStream mrng(5);
    init_model_params(cfg, model_store, mrng);
    GenSpec spec;
    spec.env = Env::Forest;
    spec.n = 3;
    spec.T = 4;
    SequenceChunk chunk = generate_chunk(spec, 3, 0);
    std::vector<ad::Tensor<double>> rgb;
    for (int t = 0; t < 2; ++t) rgb.push_back(frame_rgb<double>(chunk.frames[t]));
    std::vector<ad::Tensor<double>> targets;
    for (int t = 2; t < 4; ++t) targets.push_back(frame_target<double>(chunk.frames[t]));
    ad::LossFn<double> model_loss = [&](Tape<double>& tape,
                                        const std::map<std::string, Var>& vars) {
        auto out = ad_model::rollout_tape(tape, cfg, vars, rgb, 3, 2, 4);
        Var total = ad::bce_loss(tape, out.pred_maps[0], targets[0]);
        total = ad::add(tape, total, ad::bce_loss(tape, out.pred_maps[1], targets[1]));
        return ad::scale(tape, total, 0.5);
    };
    auto mrep = ad::grad_check(model_loss, model_store, 1e-5, 16);
    state.report("grad.arnca_step", mrep.max_rel_err < 1e-4,
                 "max rel err " + std::to_string(mrep.max_rel_err) + " at " +
                     mrep.worst_param);
}

void verify_attn(VerifyState& state) {
    using ad::Tape;
    using ad::Var;
    ModelConfig cfg;
    cfg.kind = ModelKind::Arnca;
    cfg.env = Env::Forest;
    cfg.u = 8;
    ad::ParamStore<float> store;
    RngStream rng(31);
    init_model_params(cfg, store, rng);

    auto run = [&](const ad::Tensor<float>& field) {
        Tape<float> tape;
        auto vars = ad::insert_params(tape, store, false);
        ad_model::Graph<float> graph(tape, cfg, vars);
        return tape.value(graph.cellular_attention(tape.leaf(field)));
    };

    double worst = 0.0;
    const int n = 5;
    for (int trial = 0; trial < 200; ++trial) {
        ad::Tensor<float> h = ad::Tensor<float>::zeros({n, n, 8});
        for (auto& v : h.data) v = static_cast<float>(rng.uniform_in(-1.5, 1.5));
        int ci = 1 + static_cast<int>(rng.next_below(n - 2));
        int cj = 1 + static_cast<int>(rng.next_below(n - 2));
        std::vector<std::pair<int, int>> offs;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                if (di || dj) offs.emplace_back(di, dj);
        std::vector<int> perm(8);
        for (int k = 0; k < 8; ++k) perm[k] = k;
        for (size_t k = perm.size(); k > 1; --k)
            std::swap(perm[k - 1], perm[rng.next_below(k)]);
        ad::Tensor<float> shuffled = h;
        for (int k = 0; k < 8; ++k) {
            auto [sdi, sdj] = offs[perm[k]];
            auto [ddi, ddj] = offs[k];
            const float* src = &h.data[((ci + sdi) * n + (cj + sdj)) * 8];
            float* dst = &shuffled.data[((ci + ddi) * n + (cj + ddj)) * 8];
            std::copy(src, src + 8, dst);
        }
        auto a = run(h);
        auto b = run(shuffled);
        for (int c = 0; c < 8; ++c)
            worst = std::max(worst, std::abs(double(a.data[(ci * n + cj) * 8 + c]) -
                                             double(b.data[(ci * n + cj) * 8 + c])));
    }
    state.report("attn.permutation_invariance", worst <= 1e-5,
                 "max deviation " + std::to_string(worst));
}

void verify_metrics(VerifyState& state) {
    RngStream rng(505);
    bool f1_ok = true, auc_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(6));
        std::vector<float> p(static_cast<size_t>(n) * n);
        std::vector<uint8_t> y(p.size());
        for (size_t c = 0; c < p.size(); ++c) {
            p[c] = static_cast<float>(rng.next_below(5)) / 4.0f;
            y[c] = static_cast<uint8_t>(rng.bernoulli(0.4));
        }
        ProbMap map;
        map.n = n;
        map.p = p;
        TargetMask mask;
        mask.n = n;
        mask.bits = y;
        f1_ok = f1_ok && f1_score({map}, {mask}) == refcheck::f1_frame(p, y, 0.5);
        double auc = auc_roc({map}, {mask});
        double ref = refcheck::auc_frame(p, y);
        auc_ok = auc_ok && (std::isnan(ref) ? std::isnan(auc)
                                            : std::abs(auc - ref) < 1e-9);
    }
    state.report("metrics.f1_reference", f1_ok);
    state.report("metrics.auc_reference", auc_ok);
}

int cmd_verify(const std::string& suite) {
    VerifyState state;
    if (suite == "all" || suite == "sim") verify_sim(state);
    if (suite == "all" || suite == "grad") verify_grad(state);
    if (suite == "all" || suite == "attn") verify_attn(state);
    if (suite == "all" || suite == "metrics") verify_metrics(state);
    if (state.failures) {
        std::cout << state.failures << " check(s) failed\n";
        return 1;
    }
    std::cout << "all checks passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"locally interacting system simulators and neural cellular "
                 "automata prediction models"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate simulation chunks");
    gen->add_option("--env", gen_args.env, "forest | host | stock")->required();
    gen->add_option("--variant", gen_args.variant, "det | stoch");
    gen->add_option("--n", gen_args.n, "grid side length");
    gen->add_option("--frames", gen_args.frames, "frames per chunk");
    gen->add_option("--chunks", gen_args.chunks, "number of chunks");
    gen->add_option("--seed", gen_args.seed, "master seed");
    gen->add_option("--out", gen_args.out, "output directory")->required();
    gen->add_option("--forest-config", gen_args.forest_config,
                    "dense | sparse | gaussian");

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "train a prediction model");
    train_cmd->add_option("--model", train_args.model,
                          "arnca | attn_ca | convlstm_ca");
    train_cmd->add_option("--data", train_args.data, "training chunk directory")
        ->required();
    train_cmd->add_option("--valid-data", train_args.valid_data,
                          "validation chunk directory");
    train_cmd->add_option("--fraction", train_args.fraction,
                          "chunk-level training data fraction");
    train_cmd->add_option("--u", train_args.u, "embedding width");
    train_cmd->add_option("--radius", train_args.radius, "neighborhood radius");
    train_cmd->add_option("--epochs", train_args.epochs, "training epochs");
    train_cmd->add_option("--lr", train_args.lr, "learning rate");
    train_cmd->add_option("--batch", train_args.batch, "chunks per step");
    train_cmd->add_option("--seed", train_args.seed, "training seed");
    train_cmd->add_option("--out", train_args.out, "output directory")->required();
    train_cmd->add_option("--t-obs", train_args.t_obs, "observed frames");
    train_cmd->add_option("--t-pred", train_args.t_pred,
                          "prediction horizon (default: chunk length)");
    train_cmd->add_option("--cell", train_args.cell, "lstm | rnn");
    train_cmd->add_option("--pred-input", train_args.pred_input,
                          "zeros | prob_feedback");
    train_cmd->add_flag("--attention-scale", train_args.attention_scale,
                        "scale attention scores by 1/sqrt(u)");
    train_cmd->add_flag("--obs-loss", train_args.obs_loss,
                        "add observation-window reconstruction loss");
    train_cmd->add_option("--valid-every", train_args.valid_every,
                          "validation cadence in epochs (0 = never)");

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate on test chunks");
    eval_cmd->add_option("--ckpt", eval_args.ckpt, "checkpoint (.arnp)");
    eval_cmd->add_option("--data", eval_args.data, "test chunk directory")
        ->required();
    eval_cmd->add_option("--t-obs", eval_args.t_obs, "observed frames");
    eval_cmd->add_option("--t-pred", eval_args.t_pred, "prediction horizon");
    eval_cmd->add_option("--out", eval_args.out, "output directory")->required();
    eval_cmd->add_flag("--oracle", eval_args.oracle,
                       "score the ground-truth oracle instead of a model");
    eval_cmd->add_option("--baseline", eval_args.baseline, "persistence");

    RenderArgs render_args;
    CLI::App* render_cmd = app.add_subcommand("render", "render frames as PPM");
    render_cmd->add_option("--chunk", render_args.chunk, "chunk file")->required();
    render_cmd->add_option("--ckpt", render_args.ckpt,
                           "checkpoint for prediction heatmaps");
    render_cmd->add_option("--out", render_args.out, "output directory")->required();
    render_cmd->add_option("--t-obs", render_args.t_obs, "observed frames");
    render_cmd->add_option("--t-pred", render_args.t_pred, "prediction horizon");
    render_cmd->add_flag("--overlay", render_args.overlay,
                         "tint cells holding the target state");

    std::string verify_suite = "all";
    CLI::App* verify_cmd = app.add_subcommand("verify", "run built-in checks");
    verify_cmd->add_option("--suite", verify_suite, "all | sim | grad | attn | metrics");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_args);
        if (train_cmd->parsed()) return cmd_train(train_args);
        if (eval_cmd->parsed()) return cmd_eval(eval_args);
        if (render_cmd->parsed()) return cmd_render(render_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
