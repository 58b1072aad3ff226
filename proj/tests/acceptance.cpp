// Acceptance suite. Each criterion prints one PASS/FAIL line and the
// binary exits nonzero if the selected criteria fail. Criterion 5 trains
// the reference model and caches its artifacts in the work directory;
// criteria 6 and 9 consume them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "arnca/gradcheck.hpp"
#include "arnca/model.hpp"
#include "arnca/refcheck.hpp"
#include "arnca/sim.hpp"
#include "arnca/train.hpp"
#include "forest_trace_fixture.hpp"

namespace fs = std::filesystem;
using namespace arnca;
using ad::Tape;
using ad::Tensor;
using ad::Var;

namespace {

fs::path g_work;

struct Criterion {
    int id;
    double limit_seconds;
    bool ok = true;
    std::string detail;
    std::chrono::steady_clock::time_point start;

    explicit Criterion(int id, double limit_seconds)
        : id(id), limit_seconds(limit_seconds),
          start(std::chrono::steady_clock::now()) {}

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }

    bool finish() {
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (ok && seconds > limit_seconds) {
            ok = false;
            detail = "exceeded runtime bound: " + std::to_string(seconds) + "s";
        }
        std::printf("%s criterion %d: %s(%.1fs)\n", ok ? "PASS" : "FAIL", id,
                    detail.empty() ? "" : (detail + " ").c_str(), seconds);
        std::fflush(stdout);
        return ok;
    }
};

// ---------------------------------------------------------------- 1
bool criterion_1() {
    Criterion c(1, 1.0);
    ForestParams params;
    RngStream rng(1);
    Grid g = Grid::empty(Env::Forest, forest_trace::kSide);
    for (int i = 0; i < 25; ++i) {
        g.states[i] = forest_trace::kInitialStates[i];
        g.heat[i] = forest_trace::kInitialHeat[i];
    }
    for (int step = 0; step < forest_trace::kSteps; ++step) {
        g = step_forest(g, params, false, rng);
        const auto& expect = forest_trace::kTrace[step];
        for (int i = 0; i < 25; ++i) {
            c.require(g.states[i] == expect.states[i],
                      "state mismatch at step " + std::to_string(step + 1));
            c.require(g.heat[i] == expect.heat[i],
                      "heat mismatch at step " + std::to_string(step + 1));
        }
    }
    c.detail = c.ok ? "5x5 deterministic forest matches the hand trace for 10 steps "
                    : c.detail;
    return c.finish();
}

// ---------------------------------------------------------------- 2
bool criterion_2() {
    Criterion c(2, 60.0);
    HostPathogenParams host;
    RngStream rng(271828);
    const int trials = 100000;
    int infected = 0;
    for (int t = 0; t < trials; ++t) {
        Grid g = Grid::empty(Env::HostPathogen, 3);
        g.at(1, 1) = host_state::kHealthy;
        g.at(0, 0) = host_state::kInfected;
        g.at(2, 2) = host_state::kInfected;
        infected += step_host_pathogen(g, host, rng).at(1, 1) == host_state::kInfected;
    }
    double freq = infected / double(trials);
    double p = 0.9775;
    double sigma = std::sqrt(p * (1 - p) / trials);
    c.require(std::abs(freq - p) <= 3 * sigma,
              "infection frequency " + std::to_string(freq) + " vs 0.9775 +- " +
                  std::to_string(3 * sigma));

    StockParams stock;
    Grid g = init_stock(12, stock, rng);
    Grid prev = g;
    long checked = 0;
    bool rules_hold = true;
    while (checked < 10000) {
        Grid next = step_stock(g, stock, rng);
        for (size_t i = 0; i < g.states.size() && rules_hold; ++i, ++checked) {
            if (g.states[i] == stock_state::kInactive)
                rules_hold = next.states[i] == stock_state::kBuy;
            if (rules_hold && next.states[i] == stock_state::kInactive)
                rules_hold = g.states[i] == stock_state::kBuy &&
                             prev.states[i] == stock_state::kBuy &&
                             g.buy_streak[i] == 2;
        }
        prev = std::move(g);
        g = std::move(next);
    }
    c.require(rules_hold, "stock inactive/buy alternation violated");
    if (c.ok)
        c.detail = "infection law " + std::to_string(freq) + ", alternation held on " +
                   std::to_string(checked) + " transitions ";
    return c.finish();
}

// ---------------------------------------------------------------- 3
template <typename T>
double permutation_deviation(int cases, uint64_t seed) {
    ModelConfig cfg;
    cfg.kind = ModelKind::Arnca;
    cfg.env = Env::Forest;
    cfg.u = 8;
    ad::ParamStore<T> store;
    RngStream init_rng(99);
    init_model_params(cfg, store, init_rng);
    RngStream rng(seed);
    auto run = [&](const Tensor<T>& field) {
        Tape<T> tape;
        auto vars = ad::insert_params(tape, store, false);
        ad_model::Graph<T> graph(tape, cfg, vars);
        return tape.value(graph.cellular_attention(tape.leaf(field)));
    };
    double worst = 0.0;
    for (int trial = 0; trial < cases; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(4));
        Tensor<T> h = Tensor<T>::zeros({n, n, 8});
        for (T& v : h.data) v = static_cast<T>(rng.uniform_in(-1.5, 1.5));
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
        Tensor<T> shuffled = h;
        for (int k = 0; k < 8; ++k) {
            auto [sdi, sdj] = offs[perm[k]];
            auto [ddi, ddj] = offs[k];
            const T* src = &h.data[((ci + sdi) * n + (cj + sdj)) * 8];
            T* dst = &shuffled.data[((ci + ddi) * n + (cj + ddj)) * 8];
            std::copy(src, src + 8, dst);
        }
        auto a = run(h);
        auto b = run(shuffled);
        for (int ch = 0; ch < 8; ++ch)
            worst = std::max(
                worst, std::abs(double(a.data[(ci * n + cj) * 8 + ch]) -
                                double(b.data[(ci * n + cj) * 8 + ch])));
    }
    return worst;
}

bool criterion_3() {
    Criterion c(3, 60.0);
    double dev32 = permutation_deviation<float>(1000, 777);
    double dev64 = permutation_deviation<double>(1000, 778);
    c.require(dev32 <= 1e-5, "32-bit deviation " + std::to_string(dev32));
    c.require(dev64 <= 1e-10, "64-bit deviation " + std::to_string(dev64));
    if (c.ok) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max deviation %.2e (f32) %.2e (f64) ",
                      dev32, dev64);
        c.detail = buf;
    }
    return c.finish();
}

// ---------------------------------------------------------------- 4
double check_primitive(
    const std::vector<std::pair<std::string, Tensor<double>>>& inputs,
    const std::function<Var(Tape<double>&, const std::map<std::string, Var>&)>& body,
    uint64_t seed) {
    ad::ParamStore<double> store;
    for (const auto& [name, tensor] : inputs) store.create(name, tensor);
    RngStream rng(seed);
    std::vector<double> weights;
    ad::LossFn<double> loss = [&](Tape<double>& tape,
                                  const std::map<std::string, Var>& vars) {
        Var out = body(tape, vars);
        if (weights.empty()) {
            weights.resize(tape.value(out).numel());
            for (double& w : weights) w = rng.uniform_in(-1.0, 1.0);
        }
        Var w_leaf = tape.leaf(Tensor<double>(tape.shape(out), weights), false);
        return ad::sum_all(tape, ad::mul(tape, out, w_leaf));
    };
    return ad::grad_check(loss, store, 1e-5, 64).max_rel_err;
}

Tensor<double> rand_tensor(ad::Shape shape, RngStream& rng, double lo = -1,
                           double hi = 1) {
    Tensor<double> t = Tensor<double>::zeros(std::move(shape));
    for (double& v : t.data) v = rng.uniform_in(lo, hi);
    return t;
}

bool criterion_4() {
    Criterion c(4, 300.0);
    RngStream rng(314159);
    double worst_primitive = 0.0;

    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"x", rand_tensor({3, 5}, rng)},
                         {"w", rand_tensor({5, 4}, rng)},
                         {"b", rand_tensor({4}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            return ad::linear(t, v.at("x"), v.at("w"), v.at("b"));
                        },
                        1));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"a", rand_tensor({2, 3, 4}, rng)},
                         {"b", rand_tensor({2, 4, 3}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            return ad::matmul(t, v.at("a"), v.at("b"));
                        },
                        2));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"a", rand_tensor({4, 6}, rng)},
                         {"b", rand_tensor({4, 6}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            Var s = ad::add(t, v.at("a"), v.at("b"));
                            Var m = ad::mul(t, s, v.at("b"));
                            return ad::tanh_op(t, m);
                        },
                        3));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"x", rand_tensor({5, 7}, rng, -3, 3)}},
                        [](Tape<double>& t, const auto& v) {
                            return ad::softmax_lastdim(t, ad::sigmoid(t, v.at("x")));
                        },
                        4));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"x", rand_tensor({5, 5, 2}, rng)},
                         {"k", rand_tensor({3, 3, 2, 3}, rng)},
                         {"b", rand_tensor({3}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            return ad::conv2d(t, v.at("x"), v.at("k"), v.at("b"));
                        },
                        5));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"x", rand_tensor({4, 4, 3}, rng)},
                         {"k", rand_tensor({1, 1, 3, 2}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            return ad::conv2d(t, v.at("x"), v.at("k"));
                        },
                        6));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"x", rand_tensor({4, 4, 3}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            return ad::gather_neighborhoods(t, v.at("x"), 1);
                        },
                        7));
    worst_primitive = std::max(
        worst_primitive,
        check_primitive({{"x", rand_tensor({3, 8}, rng)}},
                        [](Tape<double>& t, const auto& v) {
                            Var s = ad::slice_lastdim(t, v.at("x"), 2, 5);
                            return ad::reshape(t, ad::scale(t, s, 1.3), ad::Shape{15});
                        },
                        8));
    {
        Tensor<double> targets = rand_tensor({4, 4}, rng, 0, 1);
        for (double& v : targets.data) v = v > 0.5 ? 1.0 : 0.0;
        worst_primitive = std::max(
            worst_primitive,
            check_primitive({{"x", rand_tensor({4, 4}, rng, -2, 2)}},
                            [targets](Tape<double>& t, const auto& v) {
                                return ad::bce_loss(t, ad::sigmoid(t, v.at("x")),
                                                    targets);
                            },
                            9));
    }
    {
        ad::ParamStore<double> store;
        const int u = 8;
        store.create("wx", ad::glorot_uniform<double>({u, 4 * u}, u, 4 * u, rng));
        store.create("wh", ad::glorot_uniform<double>({u, 4 * u}, u, 4 * u, rng));
        store.create("b", ad::glorot_uniform<double>({4 * u}, u, 4 * u, rng));
        store.create("x", rand_tensor({4, u}, rng));
        store.create("h", rand_tensor({4, u}, rng));
        store.create("cc", rand_tensor({4, u}, rng));
        ad::LossFn<double> loss = [](Tape<double>& tape,
                                     const std::map<std::string, Var>& v) {
            auto out = ad::lstm_cell(tape, v.at("x"), v.at("h"), v.at("cc"),
                                     v.at("wx"), v.at("wh"), v.at("b"));
            return ad::sum_all(tape, ad::mul(tape, out.h_hat, out.c));
        };
        worst_primitive =
            std::max(worst_primitive, ad::grad_check(loss, store, 1e-5, 64).max_rel_err);
    }
    c.require(worst_primitive < 1e-4,
              "primitive max rel err " + std::to_string(worst_primitive));

    // one full training step per model on a 4x4 grid, u = 8
    GenSpec spec;
    spec.env = Env::Forest;
    spec.n = 4;
    spec.T = 6;
    SequenceChunk chunk = generate_chunk(spec, 31, 0);
    std::vector<Tensor<double>> rgb;
    for (int t = 0; t < 3; ++t) rgb.push_back(frame_rgb<double>(chunk.frames[t]));
    std::vector<Tensor<double>> targets;
    for (int t = 3; t < 6; ++t) targets.push_back(frame_target<double>(chunk.frames[t]));

    double worst_model = 0.0;
    std::string worst_name;
    for (ModelKind kind :
         {ModelKind::Arnca, ModelKind::AttentionCa, ModelKind::ConvlstmCa}) {
        ModelConfig cfg;
        cfg.kind = kind;
        cfg.env = Env::Forest;
        cfg.u = 8;
        ad::ParamStore<double> store;
        RngStream model_rng(100);
        init_model_params(cfg, store, model_rng);
        ad::LossFn<double> loss = [&](Tape<double>& tape,
                                      const std::map<std::string, Var>& vars) {
            auto out = ad_model::rollout_tape(tape, cfg, vars, rgb, 4, 3, 6);
            Var total{};
            for (size_t t = 0; t < out.pred_maps.size(); ++t) {
                Var l = ad::bce_loss(tape, out.pred_maps[t], targets[t]);
                total = t == 0 ? l : ad::add(tape, total, l);
            }
            return ad::scale(tape, total, 1.0 / 3.0);
        };
        auto report = ad::grad_check(loss, store, 3e-5, 64);
        if (report.max_rel_err > worst_model) {
            worst_model = report.max_rel_err;
            worst_name = std::string(model_kind_name(kind)) + "/" + report.worst_param;
        }
    }
    c.require(worst_model < 1e-4, "model max rel err " + std::to_string(worst_model) +
                                      " at " + worst_name);
    if (c.ok) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "max rel err %.2e (primitives) %.2e (models) ",
                      worst_primitive, worst_model);
        c.detail = buf;
    }
    return c.finish();
}

// ---------------------------------------------------------------- 5
constexpr uint64_t kForestMasterSeed = 9000;
constexpr uint64_t kTrainSeed = 1;

GenSpec forest_spec(int n) {
    GenSpec spec;
    spec.env = Env::Forest;
    spec.stochastic = false;
    spec.n = n;
    spec.T = 60;
    return spec;
}

TrainConfig c5_config() {
    TrainConfig cfg;
    cfg.model.kind = ModelKind::Arnca;
    cfg.model.env = Env::Forest;
    cfg.model.u = 16;
    cfg.model.trained_n = 32;
    cfg.t_obs = 10;
    cfg.t_pred = 60;
    cfg.epochs = 300;
    cfg.lr = 3e-4;
    cfg.batch = 4;
    cfg.seed = kTrainSeed;
    cfg.valid_every = 50;
    return cfg;
}

bool criterion_5() {
    Criterion c(5, 45 * 60.0);
    GenSpec spec = forest_spec(32);
    std::vector<SequenceChunk> train_chunks, test_chunks;
    for (int k = 0; k < 20; ++k)
        train_chunks.push_back(generate_chunk(spec, kForestMasterSeed, k));
    for (int k = 20; k < 30; ++k)
        test_chunks.push_back(generate_chunk(spec, kForestMasterSeed, k));

    EvalReport persistence = evaluate_persistence(test_chunks, 10, 60);
    TrainConfig cfg = c5_config();
    TrainResult result = train(cfg, train_chunks, test_chunks, &std::cout);
    EvalReport model = evaluate(cfg.model, result.params, test_chunks, 10, 60);

    fs::create_directories(g_work);
    ad::save_params(result.params, (g_work / "c5_model.arnp").string());
    save_model_config(cfg.model, (g_work / "c5_model.json").string());
    std::ofstream((g_work / "c5_report.json").string(), std::ios::trunc)
        << eval_report_to_json(model);
    nlohmann::json meta;
    meta["f1"] = model.f1_mean;
    meta["persistence_f1"] = persistence.f1_mean;
    std::ofstream((g_work / "c5_meta.json").string(), std::ios::trunc) << meta.dump();

    char buf[160];
    std::snprintf(buf, sizeof(buf), "model F1 %.4f vs persistence %.4f (floor 0.75) ",
                  model.f1_mean, persistence.f1_mean);
    c.detail = buf;
    c.require(model.f1_mean >= persistence.f1_mean + 0.05,
              std::string("margin over persistence not met: ") + buf);
    c.require(model.f1_mean >= 0.75, std::string("absolute floor not met: ") + buf);
    return c.finish();
}

// ---------------------------------------------------------------- 6
bool criterion_6() {
    Criterion c(6, 600.0);
    std::ifstream meta_in((g_work / "c5_meta.json").string());
    if (!meta_in) {
        c.require(false, "criterion 5 artifacts missing; run criterion 5 first");
        return c.finish();
    }
    nlohmann::json meta = nlohmann::json::parse(meta_in);
    double f1_small = meta["f1"].get<double>();
    ModelConfig cfg = load_model_config((g_work / "c5_model.json").string());
    auto params = ad::load_params<float>((g_work / "c5_model.arnp").string());

    GenSpec spec = forest_spec(128);
    std::vector<SequenceChunk> big_chunks;
    for (int k = 0; k < 10; ++k)
        big_chunks.push_back(generate_chunk(spec, kForestMasterSeed + 1, k));
    EvalReport big = scale_transfer_eval(cfg, params, big_chunks, 10, 60);

    char buf[128];
    std::snprintf(buf, sizeof(buf), "F1(32->32) %.4f vs F1(32->128) %.4f ", f1_small,
                  big.f1_mean);
    c.detail = buf;
    c.require(std::abs(big.f1_mean - f1_small) <= 0.05,
              std::string("scale-transfer gap too large: ") + buf);
    return c.finish();
}

// ---------------------------------------------------------------- 7
bool criterion_7() {
    Criterion c(7, 2 * 3600.0);
    GenSpec spec;
    spec.env = Env::Stock;
    spec.n = 32;
    spec.T = 30;
    std::vector<SequenceChunk> train_chunks, test_chunks;
    for (int k = 0; k < 100; ++k)
        train_chunks.push_back(generate_chunk(spec, 5000, k));
    for (int k = 100; k < 120; ++k)
        test_chunks.push_back(generate_chunk(spec, 5000, k));

    std::map<ModelKind, double> mean_f1;
    for (ModelKind kind :
         {ModelKind::Arnca, ModelKind::AttentionCa, ModelKind::ConvlstmCa}) {
        double sum = 0.0;
        for (uint64_t seed : {101, 102, 103}) {
            TrainConfig cfg;
            cfg.model.kind = kind;
            cfg.model.env = Env::Stock;
            cfg.model.u = 16;
            cfg.t_obs = 10;
            cfg.t_pred = 30;
            cfg.epochs = 300;
            cfg.lr = 3e-4;
            cfg.batch = 4;
            cfg.data_fraction = 0.01; // 1 of 100 chunks
            cfg.seed = seed;
            cfg.valid_every = 0;
            TrainResult result = train(cfg, train_chunks, {});
            EvalReport report = evaluate(cfg.model, result.params, test_chunks, 10, 30);
            std::printf("  %s seed %llu: F1 %.4f\n", model_kind_name(kind),
                        static_cast<unsigned long long>(seed), report.f1_mean);
            std::fflush(stdout);
            sum += report.f1_mean;
        }
        mean_f1[kind] = sum / 3.0;
    }
    double arnca_f1 = mean_f1[ModelKind::Arnca];
    double best_baseline = std::max(mean_f1[ModelKind::AttentionCa],
                                    mean_f1[ModelKind::ConvlstmCa]);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "1%% stock F1: arnca %.4f, attn_ca %.4f, convlstm_ca %.4f ",
                  arnca_f1, mean_f1[ModelKind::AttentionCa],
                  mean_f1[ModelKind::ConvlstmCa]);
    c.detail = buf;
    c.require(arnca_f1 >= best_baseline - 0.02,
              std::string("ordering not met: ") + buf);
    return c.finish();
}

// ---------------------------------------------------------------- 8
bool criterion_8() {
    Criterion c(8, 60.0);
    RngStream rng(424243);
    bool f1_exact = true;
    double auc_worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(7));
        std::vector<float> p(static_cast<size_t>(n) * n);
        std::vector<uint8_t> y(p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            p[i] = static_cast<float>(rng.next_below(5)) / 4.0f;
            y[i] = static_cast<uint8_t>(rng.bernoulli(0.4));
        }
        ProbMap map;
        map.n = n;
        map.p = p;
        TargetMask mask;
        mask.n = n;
        mask.bits = y;
        if (f1_score({map}, {mask}) != refcheck::f1_frame(p, y, 0.5))
            f1_exact = false;
        double auc = auc_roc({map}, {mask});
        double ref = refcheck::auc_frame(p, y);
        if (std::isnan(ref)) {
            if (!std::isnan(auc)) f1_exact = false;
        } else {
            auc_worst = std::max(auc_worst, std::abs(auc - ref));
        }
    }
    c.require(f1_exact, "F1 deviates from brute-force confusion counting");
    c.require(auc_worst < 1e-9,
              "AUC deviates from pairwise comparison by " + std::to_string(auc_worst));
    if (c.ok) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "F1 exact, AUC within %.1e on 1000 frames ",
                      auc_worst);
        c.detail = buf;
    }
    return c.finish();
}

// ---------------------------------------------------------------- 9
bool criterion_9() {
    Criterion c(9, 60 * 60.0);
    std::ifstream first_ckpt((g_work / "c5_model.arnp").string(), std::ios::binary);
    std::ifstream first_report((g_work / "c5_report.json").string());
    if (!first_ckpt || !first_report) {
        c.require(false, "criterion 5 artifacts missing; run criterion 5 first");
        return c.finish();
    }
    std::string ckpt_a((std::istreambuf_iterator<char>(first_ckpt)),
                       std::istreambuf_iterator<char>());
    std::string report_a((std::istreambuf_iterator<char>(first_report)),
                         std::istreambuf_iterator<char>());

    GenSpec spec = forest_spec(32);
    std::vector<SequenceChunk> train_chunks, test_chunks;
    for (int k = 0; k < 20; ++k)
        train_chunks.push_back(generate_chunk(spec, kForestMasterSeed, k));
    for (int k = 20; k < 30; ++k)
        test_chunks.push_back(generate_chunk(spec, kForestMasterSeed, k));
    TrainConfig cfg = c5_config();
    TrainResult result = train(cfg, train_chunks, test_chunks, &std::cout);
    std::string ckpt_b = ad::serialize_params(result.params);
    EvalReport model = evaluate(cfg.model, result.params, test_chunks, 10, 60);
    std::string report_b = eval_report_to_json(model);

    c.require(ckpt_a == ckpt_b, "checkpoint bytes differ between reruns");
    c.require(report_a == report_b, "evaluation JSON differs between reruns");
    if (c.ok)
        c.detail = "rerun reproduced " + std::to_string(ckpt_a.size()) +
                   " checkpoint bytes and the report bit-exactly ";
    return c.finish();
}

} // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    g_work = fs::temp_directory_path() / "arnca_acceptance";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            criterion = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--work") == 0 && i + 1 < argc)
            g_work = argv[++i];
    }

    bool all_ok = true;
    auto run = [&](int id, bool (*fn)()) {
        if (criterion == 0 || criterion == id) all_ok = fn() && all_ok;
    };
    run(1, criterion_1);
    run(2, criterion_2);
    run(3, criterion_3);
    run(4, criterion_4);
    run(5, criterion_5);
    run(6, criterion_6);
    run(7, criterion_7);
    run(8, criterion_8);
    run(9, criterion_9);
    return all_ok ? 0 : 1;
}
