#include "arnca/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "arnca/parallel.hpp"

namespace arnca {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void shuffle_indices(std::vector<int>& idx, RngStream& rng) {
    for (size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.next_below(i)]);
}

struct PreparedChunk {
    std::vector<ad::Tensor<float>> rgb;     // first t_obs frames
    std::vector<ad::Tensor<float>> targets; // frames [t_obs, t_pred)
    std::vector<ad::Tensor<float>> obs_targets;
};

PreparedChunk prepare_chunk(const SequenceChunk& chunk, const TrainConfig& cfg) {
    PreparedChunk p;
    for (int t = 0; t < cfg.t_obs; ++t)
        p.rgb.push_back(frame_rgb<float>(chunk.frames[t]));
    for (int t = cfg.t_obs; t < cfg.t_pred; ++t)
        p.targets.push_back(frame_target<float>(chunk.frames[t]));
    if (cfg.obs_window_loss)
        for (int t = 0; t < cfg.t_obs; ++t)
            p.obs_targets.push_back(frame_target<float>(chunk.frames[t]));
    return p;
}

struct ChunkScores {
    double f1 = 0.0;
    double auc = 0.0;
    int auc_excluded_frames = 0;
};

ChunkScores score_chunk(const std::vector<ProbMap>& maps,
                        const SequenceChunk& chunk, int t_obs, int t_pred) {
    std::vector<TargetMask> masks = window_masks(chunk, t_obs, t_pred);
    ChunkScores s;
    s.f1 = f1_score(maps, masks);
    AucResult auc = auc_roc_detail(maps, masks);
    s.auc = auc.value;
    s.auc_excluded_frames = auc.excluded_frames;
    return s;
}

double validation_f1(const TrainConfig& cfg, const ad::ParamStore<float>& params,
                     const std::vector<SequenceChunk>& chunks, double* auc_out) {
    double f1_sum = 0.0, auc_sum = 0.0;
    int auc_n = 0;
    for (const SequenceChunk& chunk : chunks) {
        auto tensors = rollout_infer(cfg.model, params, chunk, cfg.t_obs, cfg.t_pred);
        std::vector<ProbMap> maps;
        maps.reserve(tensors.size());
        for (const auto& t : tensors) maps.push_back(tensor_to_map(t));
        ChunkScores s = score_chunk(maps, chunk, cfg.t_obs, cfg.t_pred);
        f1_sum += s.f1;
        if (std::isfinite(s.auc)) {
            auc_sum += s.auc;
            ++auc_n;
        }
    }
    *auc_out = auc_n ? auc_sum / auc_n : std::numeric_limits<double>::quiet_NaN();
    return f1_sum / static_cast<double>(chunks.size());
}

} // namespace

ProbMap tensor_to_map(const ad::Tensor<float>& t) {
    ProbMap map;
    map.n = t.dim(0);
    map.p = t.data;
    return map;
}

std::vector<TargetMask> window_masks(const SequenceChunk& chunk, int t_obs,
                                     int t_pred) {
    std::vector<TargetMask> masks;
    masks.reserve(t_pred - t_obs);
    for (int t = t_obs; t < t_pred; ++t)
        masks.push_back(target_mask(chunk.frames[t]));
    return masks;
}

TrainResult train(const TrainConfig& config,
                  const std::vector<SequenceChunk>& train_chunks,
                  const std::vector<SequenceChunk>& valid_chunks,
                  std::ostream* progress) {
    if (train_chunks.empty())
        throw std::invalid_argument("train: no training chunks");
    if (config.t_obs < 1 || config.t_obs >= config.t_pred)
        throw std::invalid_argument("train: need 1 <= t_obs < t_pred");
    if (config.batch < 1) throw std::invalid_argument("train: batch must be >= 1");
    for (const SequenceChunk& c : train_chunks) {
        if (c.env != config.model.env)
            throw std::invalid_argument(std::string("train: ") + env_name(c.env) +
                                        " chunk fed to a " +
                                        env_name(config.model.env) + " model");
        if (c.T < config.t_pred)
            throw std::invalid_argument("train: chunk has " + std::to_string(c.T) +
                                        " frames, t_pred is " +
                                        std::to_string(config.t_pred));
    }

    RngStream rng(config.seed);
    TrainResult result;
    init_model_params(config.model, result.params, rng);

    // data_fraction subset, chosen once by seeded shuffle
    std::vector<int> all(train_chunks.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    shuffle_indices(all, rng);
    size_t subset_size = static_cast<size_t>(
        config.data_fraction * static_cast<double>(train_chunks.size()) + 1e-9);
    if (subset_size < 1)
        throw std::invalid_argument("train: empty training subset (fraction " +
                                    std::to_string(config.data_fraction) + " of " +
                                    std::to_string(train_chunks.size()) + " chunks)");
    subset_size = std::min(subset_size, all.size());
    result.subset.assign(all.begin(), all.begin() + subset_size);

    std::vector<PreparedChunk> prepared;
    prepared.reserve(subset_size);
    for (int idx : result.subset)
        prepared.push_back(prepare_chunk(train_chunks[idx], config));

    const int n = train_chunks[0].n;
    const int pred_frames = config.t_pred - config.t_obs;
    const auto start = Clock::now();

    std::vector<int> order(prepared.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    ad::Tape<float> tape;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_indices(order, rng);
        double epoch_loss = 0.0;
        int chunks_seen = 0;
        for (size_t pos = 0; pos < order.size();) {
            size_t batch_n = std::min<size_t>(config.batch, order.size() - pos);
            for (size_t b = 0; b < batch_n; ++b, ++pos) {
                const PreparedChunk& chunk = prepared[order[pos]];
                tape.reset();
                auto vars = ad::insert_params(tape, result.params, true);
                auto rollout = ad_model::rollout_tape(
                    tape, config.model, vars, chunk.rgb, n, config.t_obs,
                    config.t_pred, config.obs_window_loss);
                ad::Var total{};
                for (int t = 0; t < pred_frames; ++t) {
                    ad::Var frame_loss =
                        ad::bce_loss(tape, rollout.pred_maps[t], chunk.targets[t]);
                    total = t == 0 ? frame_loss : ad::add(tape, total, frame_loss);
                }
                int loss_terms = pred_frames;
                if (config.obs_window_loss) {
                    for (int t = 0; t < config.t_obs; ++t) {
                        total = ad::add(tape, total,
                                        ad::bce_loss(tape, rollout.obs_maps[t],
                                                     chunk.obs_targets[t]));
                        ++loss_terms;
                    }
                }
                ad::Var chunk_loss =
                    ad::scale(tape, total, 1.0f / static_cast<float>(loss_terms));
                double loss_value = tape.value(chunk_loss).data[0];
                if (!std::isfinite(loss_value))
                    throw std::runtime_error(
                        "train: non-finite loss at epoch " + std::to_string(epoch) +
                        ", chunk " + std::to_string(result.subset[order[pos]]));
                epoch_loss += loss_value;
                ++chunks_seen;
                ad::Var grad_loss =
                    ad::scale(tape, chunk_loss, 1.0f / static_cast<float>(batch_n));
                tape.backward(grad_loss);
                ad::accumulate_grads(tape, vars, result.params);
            }
            result.params.adam_step(static_cast<float>(config.lr));
        }
        tape.reset();

        TrainLogRow row;
        row.epoch = epoch;
        row.loss = epoch_loss / chunks_seen;
        bool validate = config.valid_every > 0 && !valid_chunks.empty() &&
                        (epoch % config.valid_every == config.valid_every - 1 ||
                         epoch == config.epochs - 1);
        if (validate) {
            row.has_valid = true;
            row.valid_f1 =
                validation_f1(config, result.params, valid_chunks, &row.valid_auc);
        }
        row.wall_seconds = seconds_since(start);
        result.log.push_back(row);
        if (progress && (validate || epoch == 0 || epoch % 25 == 24)) {
            (*progress) << "epoch " << epoch << " loss " << row.loss;
            if (row.has_valid)
                (*progress) << " valid_f1 " << row.valid_f1 << " valid_auc "
                            << row.valid_auc;
            (*progress) << " (" << row.wall_seconds << "s)" << std::endl;
        }
    }
    return result;
}

void write_train_log_csv(const std::vector<TrainLogRow>& log,
                         const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "epoch,loss,valid_f1,valid_auc,wall_seconds\n";
    char buf[160];
    for (const TrainLogRow& row : log) {
        if (row.has_valid)
            std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.3f\n", row.epoch,
                          row.loss, row.valid_f1, row.valid_auc, row.wall_seconds);
        else
            std::snprintf(buf, sizeof(buf), "%d,%.9g,,,%.3f\n", row.epoch, row.loss,
                          row.wall_seconds);
        out << buf;
    }
}

EvalReport evaluate_with(const MapProducer& producer,
                         const std::vector<SequenceChunk>& chunks, int t_obs,
                         int t_pred, const std::string& config_echo_json) {
    if (chunks.empty()) throw std::invalid_argument("evaluate: no chunks");
    for (const SequenceChunk& c : chunks)
        if (c.T < t_pred)
            throw std::invalid_argument("evaluate: chunk has " + std::to_string(c.T) +
                                        " frames, t_pred is " + std::to_string(t_pred));
    const auto start = std::chrono::steady_clock::now();
    const int n_chunks = static_cast<int>(chunks.size());
    std::vector<ChunkScores> scores(n_chunks);
    parallel_for(n_chunks, [&](int i) {
        std::vector<ProbMap> maps = producer(chunks[i]);
        scores[i] = score_chunk(maps, chunks[i], t_obs, t_pred);
    });

    EvalReport report;
    report.config_echo_json = config_echo_json;
    double f1_sum = 0.0, auc_sum = 0.0;
    int auc_n = 0;
    for (const ChunkScores& s : scores) {
        report.per_chunk_f1.push_back(s.f1);
        report.per_chunk_auc.push_back(s.auc);
        report.auc_excluded_frames += s.auc_excluded_frames;
        f1_sum += s.f1;
        if (std::isfinite(s.auc)) {
            auc_sum += s.auc;
            ++auc_n;
        } else {
            ++report.auc_excluded_chunks;
        }
    }
    report.f1_mean = f1_sum / n_chunks;
    report.auc_mean =
        auc_n ? auc_sum / auc_n : std::numeric_limits<double>::quiet_NaN();
    double f1_var = 0.0, auc_var = 0.0;
    for (const ChunkScores& s : scores) {
        f1_var += (s.f1 - report.f1_mean) * (s.f1 - report.f1_mean);
        if (std::isfinite(s.auc))
            auc_var += (s.auc - report.auc_mean) * (s.auc - report.auc_mean);
    }
    report.f1_std = std::sqrt(f1_var / n_chunks);
    report.auc_std = auc_n ? std::sqrt(auc_var / auc_n)
                           : std::numeric_limits<double>::quiet_NaN();
    report.runtime_seconds = seconds_since(start);
    return report;
}

EvalReport evaluate(const ModelConfig& cfg, const ad::ParamStore<float>& params,
                    const std::vector<SequenceChunk>& chunks, int t_obs,
                    int t_pred) {
    for (const SequenceChunk& c : chunks)
        if (c.env != cfg.env)
            throw std::invalid_argument(std::string("evaluate: model for ") +
                                        env_name(cfg.env) + " applied to " +
                                        env_name(c.env) + " data");
    nlohmann::json echo;
    echo["model"] = nlohmann::json::parse(model_config_to_json(cfg));
    echo["t_obs"] = t_obs;
    echo["t_pred"] = t_pred;
    echo["n_chunks"] = chunks.size();
    echo["data_n"] = chunks.empty() ? 0 : chunks[0].n;
    auto producer = [&](const SequenceChunk& chunk) {
        auto tensors = rollout_infer(cfg, params, chunk, t_obs, t_pred);
        std::vector<ProbMap> maps;
        maps.reserve(tensors.size());
        for (const auto& t : tensors) maps.push_back(tensor_to_map(t));
        return maps;
    };
    return evaluate_with(producer, chunks, t_obs, t_pred, echo.dump());
}

EvalReport scale_transfer_eval(const ModelConfig& cfg,
                               const ad::ParamStore<float>& params,
                               const std::vector<SequenceChunk>& chunks,
                               int t_obs, int t_pred) {
    return evaluate(cfg, params, chunks, t_obs, t_pred);
}

std::vector<ProbMap> persistence_baseline(const SequenceChunk& chunk, int t_obs,
                                          int t_pred) {
    if (t_obs < 1 || static_cast<int>(chunk.frames.size()) < t_obs)
        throw std::invalid_argument("persistence_baseline: chunk too short");
    TargetMask last = target_mask(chunk.frames[t_obs - 1]);
    ProbMap map;
    map.n = chunk.n;
    map.p.assign(last.bits.begin(), last.bits.end());
    return std::vector<ProbMap>(t_pred - t_obs, map);
}

EvalReport evaluate_persistence(const std::vector<SequenceChunk>& chunks,
                                int t_obs, int t_pred) {
    nlohmann::json echo;
    echo["model"] = "persistence";
    echo["t_obs"] = t_obs;
    echo["t_pred"] = t_pred;
    echo["n_chunks"] = chunks.size();
    auto producer = [&](const SequenceChunk& chunk) {
        return persistence_baseline(chunk, t_obs, t_pred);
    };
    return evaluate_with(producer, chunks, t_obs, t_pred, echo.dump());
}

EvalReport evaluate_oracle(const std::vector<SequenceChunk>& chunks, int t_obs,
                           int t_pred) {
    nlohmann::json echo;
    echo["model"] = "oracle";
    echo["t_obs"] = t_obs;
    echo["t_pred"] = t_pred;
    echo["n_chunks"] = chunks.size();
    auto producer = [&](const SequenceChunk& chunk) {
        std::vector<ProbMap> maps;
        for (int t = t_obs; t < t_pred; ++t) {
            TargetMask mask = target_mask(chunk.frames[t]);
            ProbMap map;
            map.n = chunk.n;
            map.p.assign(mask.bits.begin(), mask.bits.end());
            maps.push_back(std::move(map));
        }
        return maps;
    };
    return evaluate_with(producer, chunks, t_obs, t_pred, echo.dump());
}

std::string eval_report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["config"] = report.config_echo_json.empty()
                      ? nlohmann::json()
                      : nlohmann::json::parse(report.config_echo_json);
    j["f1_mean"] = report.f1_mean;
    j["f1_std"] = report.f1_std;
    if (std::isfinite(report.auc_mean)) {
        j["auc_mean"] = report.auc_mean;
        j["auc_std"] = report.auc_std;
    } else {
        j["auc_mean"] = nullptr;
        j["auc_std"] = nullptr;
    }
    j["per_chunk_f1"] = report.per_chunk_f1;
    auto aucs = nlohmann::json::array();
    for (double a : report.per_chunk_auc)
        aucs.push_back(std::isfinite(a) ? nlohmann::json(a) : nlohmann::json());
    j["per_chunk_auc"] = aucs;
    j["auc_excluded_chunks"] = report.auc_excluded_chunks;
    j["auc_excluded_frames"] = report.auc_excluded_frames;
    return j.dump(2);
}

} // namespace arnca
