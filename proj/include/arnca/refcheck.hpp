#pragma once

// Naive reference implementations used only for verification: unit tests,
// the acceptance suite, and the `verify` CLI command check the production
// paths against these. Everything here is written as directly as possible
// and shares no code with the implementations it checks.

#include <cstdint>
#include <vector>

#include "arnca/grid.hpp"

namespace arnca::refcheck {

/// Literal transcription of the deterministic forest-fire tick on plain
/// arrays: heat accumulation, ignition, decay, fire-to-ember.
void step_forest(const std::vector<uint8_t>& s_in, const std::vector<float>& q_in,
                 int n, float q_transfer, float q_threshold, float q_die,
                 std::vector<uint8_t>& s_out, std::vector<float>& q_out);

/// Full-scores neighborhood attention for one cell: Q, K, V for all k2
/// tokens, k2 x k2 row-wise softmax, context for every token, per-token FC,
/// then center-row selection. tokens is k2 x u row-major, weights are
/// u x u row-major (y = x W), fc_b has length u.
template <typename T>
std::vector<T> attention_center(const std::vector<T>& tokens, int k2, int u,
                                const std::vector<T>& wq, const std::vector<T>& wk,
                                const std::vector<T>& wv, const std::vector<T>& fc_w,
                                const std::vector<T>& fc_b, bool scale_scores);

/// Direct confusion counting at a fixed threshold (ties positive).
/// A frame with TP = FP = FN = 0 scores 1.
double f1_frame(const std::vector<float>& p, const std::vector<uint8_t>& y,
                double threshold);

/// O(P*N) pairwise AUC: wins + half-ties over all positive/negative pairs.
/// Returns NaN for single-class frames.
double auc_frame(const std::vector<float>& p, const std::vector<uint8_t>& y);

} // namespace arnca::refcheck
