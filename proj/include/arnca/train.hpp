#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "arnca/metrics.hpp"
#include "arnca/model.hpp"

namespace arnca {

struct TrainConfig {
    ModelConfig model;
    int t_obs = 10;
    int t_pred = 0;
    int epochs = 300;
    double lr = 3e-4;
    int batch = 4;              // chunks per optimizer step
    double data_fraction = 1.0; // chunk-level subset, chosen once per run
    uint64_t seed = 0;
    int valid_every = 10; // 0 disables validation rows
    bool obs_window_loss = false;
};

struct TrainLogRow {
    int epoch = 0;
    double loss = 0.0;
    bool has_valid = false;
    double valid_f1 = 0.0;
    double valid_auc = 0.0;
    double wall_seconds = 0.0;
};

struct TrainResult {
    ad::ParamStore<float> params;
    std::vector<TrainLogRow> log;
    std::vector<int> subset; // chunk indices actually trained on
};

/// Eq-style training: per step, sample `batch` chunks from the subset,
/// roll out, mean BCE over the prediction window, backprop, Adam step.
/// Bit-deterministic for a fixed (seed, chunks) pair within one build.
TrainResult train(const TrainConfig& config,
                  const std::vector<SequenceChunk>& train_chunks,
                  const std::vector<SequenceChunk>& valid_chunks,
                  std::ostream* progress = nullptr);

/// CSV with columns epoch,loss,valid_f1,valid_auc,wall_seconds; validation
/// cells are empty on epochs where it did not run.
void write_train_log_csv(const std::vector<TrainLogRow>& log,
                         const std::string& path);

struct EvalReport {
    double f1_mean = 0.0, f1_std = 0.0;
    double auc_mean = 0.0, auc_std = 0.0;
    std::vector<double> per_chunk_f1;
    std::vector<double> per_chunk_auc; // NaN where every frame was excluded
    int auc_excluded_chunks = 0;
    int auc_excluded_frames = 0;
    double runtime_seconds = 0.0;   // not part of the JSON interface
    std::string config_echo_json;
};

/// JSON form: config echo, per-chunk arrays, means and stds. Deterministic
/// for identical inputs (runtime is deliberately not included).
std::string eval_report_to_json(const EvalReport& report);

using MapProducer = std::function<std::vector<ProbMap>(const SequenceChunk&)>;

/// Shared evaluation path: every model, the oracle and the persistence
/// baseline go through the same metric and aggregation code. Chunks are
/// scored in parallel (ARNCA_THREADS) into indexed slots, then reduced in
/// index order.
EvalReport evaluate_with(const MapProducer& producer,
                         const std::vector<SequenceChunk>& chunks, int t_obs,
                         int t_pred, const std::string& config_echo_json);

EvalReport evaluate(const ModelConfig& cfg, const ad::ParamStore<float>& params,
                    const std::vector<SequenceChunk>& chunks, int t_obs,
                    int t_pred);

/// Identical to evaluate: the model is applied to the new scale with no
/// resizing, retiling or parameter change whatsoever.
EvalReport scale_transfer_eval(const ModelConfig& cfg,
                               const ad::ParamStore<float>& params,
                               const std::vector<SequenceChunk>& chunks,
                               int t_obs, int t_pred);

/// Repeats the last observed frame's target mask as a 0/1 probability map
/// for every prediction step.
std::vector<ProbMap> persistence_baseline(const SequenceChunk& chunk, int t_obs,
                                          int t_pred);

EvalReport evaluate_persistence(const std::vector<SequenceChunk>& chunks,
                                int t_obs, int t_pred);

/// Upper-bound harness check: emits the ground-truth masks as maps.
EvalReport evaluate_oracle(const std::vector<SequenceChunk>& chunks, int t_obs,
                           int t_pred);

/// Masks for frames [t_obs, t_pred) of a chunk.
std::vector<TargetMask> window_masks(const SequenceChunk& chunk, int t_obs,
                                     int t_pred);

ProbMap tensor_to_map(const ad::Tensor<float>& t);

} // namespace arnca
