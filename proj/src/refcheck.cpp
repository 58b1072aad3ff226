#include "arnca/refcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arnca::refcheck {

void step_forest(const std::vector<uint8_t>& s_in, const std::vector<float>& q_in,
                 int n, float q_transfer, float q_threshold, float q_die,
                 std::vector<uint8_t>& s_out, std::vector<float>& q_out) {
    using namespace forest_state;
    s_out = s_in;
    q_out = q_in;

    // heat accumulation into trees, from the time-t snapshot
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (s_in[i * n + j] != kTree) continue;
            float sum = 0.0f;
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                    uint8_t ns = s_in[ii * n + jj];
                    if (ns == kFire || ns == kEmber) sum += q_in[ii * n + jj];
                }
            }
            float add = q_transfer * sum;
            q_out[i * n + j] = q_in[i * n + j] + add;
        }
    }

    // ignition
    for (int c = 0; c < n * n; ++c)
        if (s_in[c] == kTree && q_out[c] > q_threshold) s_out[c] = kFire;

    // decay of burning cells, including the ones ignited this tick
    for (int c = 0; c < n * n; ++c)
        if (s_out[c] == kFire || s_out[c] == kEmber)
            q_out[c] = std::max(0.0f, q_out[c] - q_die);

    // fire at the start of the tick turns to ember
    for (int c = 0; c < n * n; ++c)
        if (s_in[c] == kFire) s_out[c] = kEmber;
}

template <typename T>
std::vector<T> attention_center(const std::vector<T>& tokens, int k2, int u,
                                const std::vector<T>& wq, const std::vector<T>& wk,
                                const std::vector<T>& wv, const std::vector<T>& fc_w,
                                const std::vector<T>& fc_b, bool scale_scores) {
    auto project = [&](const std::vector<T>& w) {
        std::vector<T> out(static_cast<size_t>(k2) * u, T(0));
        for (int t = 0; t < k2; ++t)
            for (int o = 0; o < u; ++o) {
                T acc = 0;
                for (int i = 0; i < u; ++i) acc += tokens[t * u + i] * w[i * u + o];
                out[t * u + o] = acc;
            }
        return out;
    };
    std::vector<T> q = project(wq), k = project(wk), v = project(wv);

    std::vector<T> scores(static_cast<size_t>(k2) * k2, T(0));
    for (int a = 0; a < k2; ++a)
        for (int b = 0; b < k2; ++b) {
            T acc = 0;
            for (int i = 0; i < u; ++i) acc += q[a * u + i] * k[b * u + i];
            if (scale_scores) acc /= std::sqrt(static_cast<T>(u));
            scores[a * k2 + b] = acc;
        }
    for (int a = 0; a < k2; ++a) {
        T mx = scores[a * k2];
        for (int b = 1; b < k2; ++b) mx = std::max(mx, scores[a * k2 + b]);
        T denom = 0;
        for (int b = 0; b < k2; ++b) {
            scores[a * k2 + b] = std::exp(scores[a * k2 + b] - mx);
            denom += scores[a * k2 + b];
        }
        for (int b = 0; b < k2; ++b) scores[a * k2 + b] /= denom;
    }

    std::vector<T> context(static_cast<size_t>(k2) * u, T(0));
    for (int a = 0; a < k2; ++a)
        for (int o = 0; o < u; ++o) {
            T acc = 0;
            for (int b = 0; b < k2; ++b) acc += scores[a * k2 + b] * v[b * u + o];
            context[a * u + o] = acc;
        }

    // shared per-token FC, then pick the center row
    const int center = (k2 - 1) / 2;
    std::vector<T> out(u, T(0));
    for (int o = 0; o < u; ++o) {
        T acc = fc_b[o];
        for (int i = 0; i < u; ++i) acc += context[center * u + i] * fc_w[i * u + o];
        out[o] = acc;
    }
    return out;
}

template std::vector<float> attention_center<float>(
    const std::vector<float>&, int, int, const std::vector<float>&,
    const std::vector<float>&, const std::vector<float>&,
    const std::vector<float>&, const std::vector<float>&, bool);
template std::vector<double> attention_center<double>(
    const std::vector<double>&, int, int, const std::vector<double>&,
    const std::vector<double>&, const std::vector<double>&,
    const std::vector<double>&, const std::vector<double>&, bool);

double f1_frame(const std::vector<float>& p, const std::vector<uint8_t>& y,
                double threshold) {
    long tp = 0, fp = 0, fn = 0;
    for (size_t c = 0; c < p.size(); ++c) {
        bool pred = p[c] >= threshold;
        bool truth = y[c] != 0;
        if (pred && truth) ++tp;
        if (pred && !truth) ++fp;
        if (!pred && truth) ++fn;
    }
    if (tp + fp + fn == 0) return 1.0;
    return 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
}

double auc_frame(const std::vector<float>& p, const std::vector<uint8_t>& y) {
    double wins = 0.0;
    long pos = 0, neg = 0;
    for (size_t a = 0; a < p.size(); ++a) {
        if (y[a]) ++pos;
        else ++neg;
    }
    if (pos == 0 || neg == 0) return std::numeric_limits<double>::quiet_NaN();
    for (size_t a = 0; a < p.size(); ++a) {
        if (!y[a]) continue;
        for (size_t b = 0; b < p.size(); ++b) {
            if (y[b]) continue;
            if (p[a] > p[b]) wins += 1.0;
            else if (p[a] == p[b]) wins += 0.5;
        }
    }
    return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

} // namespace arnca::refcheck
