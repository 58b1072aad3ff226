#pragma once

#include <cmath>
#include <stdexcept>

#include "arnca/model.hpp"

namespace arnca {

template <typename T>
void init_model_params(const ModelConfig& cfg, ad::ParamStore<T>& store,
                       RngStream& rng) {
    using ad::Shape;
    using ad::Tensor;
    const int u = cfg.u;
    if (u < 2) throw std::invalid_argument("embedding width must be >= 2");
    if (cfg.radius < 1 || cfg.radius > 2)
        throw std::invalid_argument("neighborhood radius must be 1 or 2");

    auto dense = [&](const std::string& name, int in, int out) {
        store.create(name, ad::glorot_uniform<T>({in, out}, in, out, rng));
        store.create(name.substr(0, name.size() - 2) + ".b",
                     Tensor<T>::zeros({out}));
    };
    auto weight = [&](const std::string& name, int in, int out) {
        store.create(name, ad::glorot_uniform<T>({in, out}, in, out, rng));
    };
    auto lstm_bias = [&](const std::string& name, int width) {
        Tensor<T> b = Tensor<T>::zeros({4 * width});
        for (int i = width; i < 2 * width; ++i) b.data[i] = T(1); // forget gate
        store.create(name, std::move(b));
    };

    switch (cfg.kind) {
    case ModelKind::Arnca:
    case ModelKind::AttentionCa:
        dense("enc.fc1.w", 3, u);
        dense("enc.fc2.w", u, u);
        weight("attn.wq", u, u);
        weight("attn.wk", u, u);
        weight("attn.wv", u, u);
        dense("attn.fc.w", u, u);
        if (cfg.kind == ModelKind::Arnca) {
            if (cfg.recurrent == RecurrentKind::Lstm) {
                weight("lstm.wx", u, 4 * u);
                weight("lstm.wh", u, 4 * u);
                lstm_bias("lstm.b", u);
            } else {
                weight("rnn.wx", u, u);
                weight("rnn.wh", u, u);
                store.create("rnn.b", Tensor<T>::zeros({u}));
            }
        }
        dense("dec.fc1.w", u, u);
        dense("dec.fc2.w", u, 1);
        if (cfg.prediction_input == PredictionInput::ProbFeedback)
            dense("feed.w", 1, u);
        break;
    case ModelKind::ConvlstmCa:
        store.create("enc.conv.k",
                     ad::glorot_uniform<T>({3, 3, 3, u}, 9 * 3, 9 * u, rng));
        store.create("enc.conv.b", Tensor<T>::zeros({u}));
        store.create("cell.kx",
                     ad::glorot_uniform<T>({3, 3, u, 4 * u}, 9 * u, 9 * 4 * u, rng));
        store.create("cell.kh",
                     ad::glorot_uniform<T>({3, 3, u, 4 * u}, 9 * u, 9 * 4 * u, rng));
        lstm_bias("cell.b", u);
        store.create("dec.conv.k", ad::glorot_uniform<T>({1, 1, u, 1}, u, 1, rng));
        store.create("dec.conv.b", Tensor<T>::zeros({1}));
        if (cfg.prediction_input == PredictionInput::ProbFeedback) {
            store.create("feed.k", ad::glorot_uniform<T>({1, 1, 1, u}, 1, u, rng));
            store.create("feed.b", Tensor<T>::zeros({u}));
        }
        break;
    }
}

template <typename T>
ad::Tensor<T> frame_rgb(const Grid& grid) {
    std::vector<float> rgb = encode_rgb(grid, palette_for(grid.env));
    ad::Tensor<T> t = ad::Tensor<T>::zeros({grid.n, grid.n, 3});
    for (size_t i = 0; i < rgb.size(); ++i) t.data[i] = static_cast<T>(rgb[i]);
    return t;
}

template <typename T>
ad::Tensor<T> frame_target(const Grid& grid) {
    TargetMask mask = target_mask(grid);
    ad::Tensor<T> t = ad::Tensor<T>::zeros({grid.n, grid.n});
    for (size_t i = 0; i < mask.bits.size(); ++i)
        t.data[i] = static_cast<T>(mask.bits[i]);
    return t;
}

namespace ad_model {

template <typename T>
Var Graph<T>::encode_cells(Var rgb) {
    if (tape_.shape(rgb).back() != 3)
        throw std::invalid_argument("encode_cells: want 3 channels, got " +
                                    ad::shape_str(tape_.shape(rgb)));
    if (cfg_.kind == ModelKind::ConvlstmCa)
        return ad::tanh_op(tape_, ad::conv2d(tape_, rgb, param("enc.conv.k"),
                                             param("enc.conv.b")));
    Var hidden = ad::tanh_op(
        tape_, ad::linear(tape_, rgb, param("enc.fc1.w"), param("enc.fc1.b")));
    return ad::linear(tape_, hidden, param("enc.fc2.w"), param("enc.fc2.b"));
}

template <typename T>
Var Graph<T>::cellular_attention(Var h_field) {
    // copy the dims: pushing nodes may relocate the tape's storage
    const ad::Shape shape = tape_.shape(h_field);
    const int n_rows = shape[0], n_cols = shape[1], u = shape[2];
    const int cells = n_rows * n_cols;
    const int k2 = (2 * cfg_.radius + 1) * (2 * cfg_.radius + 1);

    Var keys = ad::matmul(tape_, h_field, param("attn.wk"));
    Var values = ad::matmul(tape_, h_field, param("attn.wv"));
    Var key_tokens = ad::gather_neighborhoods(tape_, keys, cfg_.radius);
    Var value_tokens = ad::gather_neighborhoods(tape_, values, cfg_.radius);

    Var query = ad::matmul(tape_, h_field, param("attn.wq"));
    Var query_col = ad::reshape(tape_, query, {cells, u, 1});

    Var logits = ad::matmul(tape_, key_tokens, query_col); // [cells,k2,1]
    logits = ad::reshape(tape_, logits, {cells, k2});
    if (cfg_.attention_scale)
        logits = ad::scale(tape_, logits, T(1) / static_cast<T>(std::sqrt(double(u))));
    Var weights = ad::softmax_lastdim(tape_, logits);
    Var weights_row = ad::reshape(tape_, weights, {cells, 1, k2});

    Var context = ad::matmul(tape_, weights_row, value_tokens); // [cells,1,u]
    context = ad::reshape(tape_, context, {n_rows, n_cols, u});
    return ad::linear(tape_, context, param("attn.fc.w"), param("attn.fc.b"));
}

template <typename T>
State Graph<T>::step(Var x, const State& prev) {
    switch (cfg_.kind) {
    case ModelKind::Arnca: {
        Var h_tilde = cellular_attention(prev.h);
        if (cfg_.recurrent == RecurrentKind::Lstm) {
            auto cell = ad::lstm_cell(tape_, x, prev.h, prev.c, param("lstm.wx"),
                                      param("lstm.wh"), param("lstm.b"));
            return {ad::add(tape_, h_tilde, cell.h_hat), cell.c};
        }
        Var h_hat = ad::rnn_cell(tape_, x, prev.h, param("rnn.wx"),
                                 param("rnn.wh"), param("rnn.b"));
        return {ad::add(tape_, h_tilde, h_hat), Var{}};
    }
    case ModelKind::AttentionCa:
        return {ad::add(tape_, cellular_attention(prev.h), x), Var{}};
    case ModelKind::ConvlstmCa: {
        Var gates = ad::add(tape_, ad::conv2d(tape_, x, param("cell.kx"), param("cell.b")),
                            ad::conv2d(tape_, prev.h, param("cell.kh")));
        const int u = cfg_.u;
        Var i = ad::sigmoid(tape_, ad::slice_lastdim(tape_, gates, 0, u));
        Var f = ad::sigmoid(tape_, ad::slice_lastdim(tape_, gates, u, u));
        Var o = ad::sigmoid(tape_, ad::slice_lastdim(tape_, gates, 2 * u, u));
        Var g = ad::tanh_op(tape_, ad::slice_lastdim(tape_, gates, 3 * u, u));
        Var c = ad::add(tape_, ad::mul(tape_, f, prev.c), ad::mul(tape_, i, g));
        Var h = ad::mul(tape_, o, ad::tanh_op(tape_, c));
        return {h, c};
    }
    }
    throw std::logic_error("unreachable model kind");
}

template <typename T>
Var Graph<T>::decode_cells(Var h_field) {
    const ad::Shape shape = tape_.shape(h_field);
    Var logits;
    if (cfg_.kind == ModelKind::ConvlstmCa) {
        logits = ad::conv2d(tape_, h_field, param("dec.conv.k"), param("dec.conv.b"));
    } else {
        Var hidden = ad::tanh_op(
            tape_, ad::linear(tape_, h_field, param("dec.fc1.w"), param("dec.fc1.b")));
        logits = ad::linear(tape_, hidden, param("dec.fc2.w"), param("dec.fc2.b"));
    }
    Var probs = ad::sigmoid(tape_, logits);
    return ad::reshape(tape_, probs, {shape[0], shape[1]});
}

template <typename T>
Var Graph<T>::prediction_input(int n, Var prev_map) {
    if (cfg_.prediction_input == PredictionInput::Zeros || !prev_map.valid())
        return ad::zeros_leaf(tape_, {n, n, cfg_.u});
    Var map3 = ad::reshape(tape_, prev_map, {n, n, 1});
    if (cfg_.kind == ModelKind::ConvlstmCa)
        return ad::conv2d(tape_, map3, param("feed.k"), param("feed.b"));
    return ad::linear(tape_, map3, param("feed.w"), param("feed.b"));
}

template <typename T>
State Graph<T>::initial_state(int n) {
    State s;
    s.h = ad::zeros_leaf(tape_, {n, n, cfg_.u});
    if (has_cell_state()) s.c = ad::zeros_leaf(tape_, {n, n, cfg_.u});
    return s;
}

template <typename T>
RolloutVars<T> rollout_tape(Tape<T>& tape, const ModelConfig& cfg,
                            const std::map<std::string, Var>& params,
                            const std::vector<ad::Tensor<T>>& rgb_frames, int n,
                            int t_obs, int t_pred, bool decode_obs_window) {
    if (t_obs < 1 || t_pred < t_obs)
        throw std::invalid_argument("rollout: need 1 <= t_obs <= t_pred");
    if (rgb_frames.size() < static_cast<size_t>(t_obs))
        throw std::invalid_argument("rollout: chunk too short: " +
                                    std::to_string(rgb_frames.size()) + " frames, " +
                                    std::to_string(t_obs) + " observed");
    Graph<T> graph(tape, cfg, params);
    RolloutVars<T> out;
    State state = graph.initial_state(n);
    Var prev_map{};
    for (int t = 0; t < t_pred; ++t) {
        Var x;
        if (t < t_obs)
            x = graph.encode_cells(tape.leaf(rgb_frames[t]));
        else
            x = graph.prediction_input(n, prev_map);
        state = graph.step(x, state);
        if (t >= t_obs) {
            prev_map = graph.decode_cells(state.h);
            out.pred_maps.push_back(prev_map);
        } else if (decode_obs_window) {
            out.obs_maps.push_back(graph.decode_cells(state.h));
        }
    }
    return out;
}

} // namespace ad_model

template <typename T>
std::vector<ad::Tensor<T>> rollout_infer(const ModelConfig& cfg,
                                         const ad::ParamStore<T>& store,
                                         const SequenceChunk& chunk, int t_obs,
                                         int t_pred) {
    if (chunk.env != cfg.env)
        throw std::invalid_argument(std::string("rollout: model for ") +
                                    env_name(cfg.env) + " applied to " +
                                    env_name(chunk.env) + " data");
    if (static_cast<int>(chunk.frames.size()) < t_obs)
        throw std::invalid_argument("rollout: chunk too short");
    const int n = chunk.n;
    std::vector<ad::Tensor<T>> maps;
    maps.reserve(t_pred - t_obs);

    ad::Tensor<T> h_value = ad::Tensor<T>::zeros({n, n, cfg.u});
    ad::Tensor<T> c_value = h_value;
    ad::Tensor<T> prev_map;
    for (int t = 0; t < t_pred; ++t) {
        ad::Tape<T> tape;
        auto params = ad::insert_params(tape, store, false);
        ad_model::Graph<T> graph(tape, cfg, params);
        ad_model::State state;
        state.h = tape.leaf(h_value);
        state.c = tape.leaf(c_value);
        ad::Var x;
        if (t < t_obs) {
            x = graph.encode_cells(tape.leaf(frame_rgb<T>(chunk.frames[t])));
        } else {
            ad::Var prev = prev_map.numel() ? tape.leaf(prev_map) : ad::Var{};
            x = graph.prediction_input(n, prev);
        }
        state = graph.step(x, state);
        if (t >= t_obs) {
            prev_map = tape.value(graph.decode_cells(state.h));
            maps.push_back(prev_map);
        }
        h_value = tape.value(state.h);
        if (state.c.valid()) c_value = tape.value(state.c);
    }
    return maps;
}

} // namespace arnca
