#pragma once

#include <map>
#include <string>
#include <vector>

#include "arnca/grid.hpp"
#include "arnca/nn.hpp"

namespace arnca {

enum class ModelKind { Arnca, AttentionCa, ConvlstmCa };
enum class RecurrentKind { Lstm, PlainRnn };
enum class PredictionInput { Zeros, ProbFeedback };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

/// Architecture description. Together with an "ARNP" parameter file this
/// fully reconstructs a model; it is stored as a JSON sidecar next to every
/// checkpoint. No field depends on the grid side, which is what lets a
/// model trained at one scale run unchanged at another.
struct ModelConfig {
    ModelKind kind = ModelKind::Arnca;
    Env env = Env::Forest;
    int u = 32;
    int radius = 1;
    RecurrentKind recurrent = RecurrentKind::Lstm;
    bool attention_scale = false;
    PredictionInput prediction_input = PredictionInput::Zeros;
    int trained_n = 0; // side length used in training; informational only
};

std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& json_text);
void save_model_config(const ModelConfig& cfg, const std::string& path);
ModelConfig load_model_config(const std::string& path);

/// Creates all learnable tensors for the configured architecture.
/// Weights are Glorot-uniform, biases zero, LSTM forget-gate bias 1.
template <typename T>
void init_model_params(const ModelConfig& cfg, ad::ParamStore<T>& store,
                       RngStream& rng);

/// RGB observation of one frame as a [n,n,3] tensor.
template <typename T>
ad::Tensor<T> frame_rgb(const Grid& grid);

/// Target mask of one frame as a [n,n] tensor of 0/1.
template <typename T>
ad::Tensor<T> frame_target(const Grid& grid);

namespace ad_model {

using ad::Tape;
using ad::Var;

/// Recurrent state of one rollout; c is unset for stateless variants.
struct State {
    Var h;
    Var c;
};

/// Builds the model's computation graph on a caller-owned tape. The same
/// graph functions serve training (single tape, gradients) and inference
/// (fresh tape per step).
template <typename T>
class Graph {
public:
    Graph(Tape<T>& tape, const ModelConfig& cfg,
          const std::map<std::string, Var>& params)
        : tape_(tape), cfg_(cfg), params_(params) {}

    /// Shared per-cell feature extractor: [n,n,3] -> [n,n,u].
    Var encode_cells(Var rgb);

    /// Neighborhood self-attention readout of a hidden field,
    /// [n,n,u] -> [n,n,u]. Keys and values are projected before the
    /// neighborhood gather; the projection is per-cell, so this equals
    /// projecting gathered tokens. Only the center cell's query row is
    /// formed: the other rows of softmax(QK^T)V never reach the output.
    Var cellular_attention(Var h_field);

    /// One recurrent update; x is the [n,n,u] cell input at this step.
    State step(Var x, const State& prev);

    /// Probability decoder: [n,n,u] -> [n,n] in [0,1].
    Var decode_cells(Var h_field);

    /// Input for a prediction-window step (zeros or probability feedback).
    Var prediction_input(int n, Var prev_map);

    State initial_state(int n);

private:
    Var param(const std::string& name) const { return params_.at(name); }
    bool has_cell_state() const {
        return cfg_.kind == ModelKind::ConvlstmCa ||
               (cfg_.kind == ModelKind::Arnca &&
                cfg_.recurrent == RecurrentKind::Lstm);
    }

    Tape<T>& tape_;
    const ModelConfig& cfg_;
    const std::map<std::string, Var>& params_;
};

template <typename T>
struct RolloutVars {
    std::vector<Var> pred_maps; // decoded maps for t in [t_obs, t_pred)
    std::vector<Var> obs_maps;  // decoded maps for t in [0, t_obs) if requested
};

/// Differentiable rollout over one chunk's observation frames.
/// rgb_frames must hold at least t_obs frames of shape [n,n,3].
template <typename T>
RolloutVars<T> rollout_tape(Tape<T>& tape, const ModelConfig& cfg,
                            const std::map<std::string, Var>& params,
                            const std::vector<ad::Tensor<T>>& rgb_frames, int n,
                            int t_obs, int t_pred, bool decode_obs_window = false);

} // namespace ad_model

/// Inference rollout: probability maps for frames [t_obs, t_pred). Uses a
/// fresh tape per step so memory stays bounded by one step's activations;
/// the maps are bit-identical to the single-tape rollout.
template <typename T>
std::vector<ad::Tensor<T>> rollout_infer(const ModelConfig& cfg,
                                         const ad::ParamStore<T>& store,
                                         const SequenceChunk& chunk, int t_obs,
                                         int t_pred);

} // namespace arnca

#include "arnca/model_impl.hpp"
