#pragma once

#include <cmath>

#include "arnca/ops.hpp"
#include "arnca/param_store.hpp"
#include "arnca/rng.hpp"

namespace arnca::ad {

/// Glorot-uniform tensor: Uniform(+-sqrt(6 / (fan_in + fan_out))).
template <typename T>
Tensor<T> glorot_uniform(Shape shape, int fan_in, int fan_out, RngStream& rng) {
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Tensor<T> t = Tensor<T>::zeros(std::move(shape));
    for (T& v : t.data) v = static_cast<T>(rng.uniform_in(-limit, limit));
    return t;
}

struct LstmOut {
    Var h_hat; // o (.) tanh(c)
    Var c;
    Var o;
};

/// Standard LSTM cell applied cell-wise: gates i,f,o,g from
/// x W_x + h_prev W_h + b, split along the last dimension.
/// x, h_prev, c_prev are [..., u]; W_x, W_h are [u_in, 4u]; b is [4u].
template <typename T>
LstmOut lstm_cell(Tape<T>& tape, Var x, Var h_prev, Var c_prev, Var wx, Var wh,
                  Var b) {
    const int u4 = tape.shape(wx)[1];
    if (u4 % 4 != 0 || tape.shape(wh)[1] != u4)
        throw std::invalid_argument("lstm_cell: gate width mismatch " +
                                    shape_str(tape.shape(wx)) + " vs " +
                                    shape_str(tape.shape(wh)));
    const int u = u4 / 4;
    Var gates = add(tape, linear(tape, x, wx, b), linear(tape, h_prev, wh));
    Var i = sigmoid(tape, slice_lastdim(tape, gates, 0, u));
    Var f = sigmoid(tape, slice_lastdim(tape, gates, u, u));
    Var o = sigmoid(tape, slice_lastdim(tape, gates, 2 * u, u));
    Var g = tanh_op(tape, slice_lastdim(tape, gates, 3 * u, u));
    Var c = add(tape, mul(tape, f, c_prev), mul(tape, i, g));
    Var h_hat = mul(tape, o, tanh_op(tape, c));
    return {h_hat, c, o};
}

/// Basic recurrent cell: h_hat = tanh(x W_x + h_prev W_h + b).
template <typename T>
Var rnn_cell(Tape<T>& tape, Var x, Var h_prev, Var wx, Var wh, Var b) {
    return tanh_op(tape, add(tape, linear(tape, x, wx, b), linear(tape, h_prev, wh)));
}

} // namespace arnca::ad
