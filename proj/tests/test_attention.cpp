#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "arnca/model.hpp"
#include "arnca/refcheck.hpp"

using namespace arnca;
using ad::Shape;
using ad::Tape;
using ad::Tensor;
using ad::Var;

namespace {

template <typename T>
struct AttentionHarness {
    ModelConfig cfg;
    ad::ParamStore<T> store;

    AttentionHarness(int u, int radius, bool scale, uint64_t seed) {
        cfg.kind = ModelKind::Arnca;
        cfg.u = u;
        cfg.radius = radius;
        cfg.attention_scale = scale;
        RngStream rng(seed);
        init_model_params(cfg, store, rng);
    }

    Tensor<T> run(const Tensor<T>& h_field) {
        Tape<T> tape;
        auto vars = ad::insert_params(tape, store, false);
        ad_model::Graph<T> graph(tape, cfg, vars);
        return tape.value(graph.cellular_attention(tape.leaf(h_field)));
    }

    std::vector<T> ref_center(const Tensor<T>& h_field, int i, int j) {
        const int n = h_field.dim(0), u = cfg.u;
        const int k = 2 * cfg.radius + 1, k2 = k * k;
        std::vector<T> tokens(static_cast<size_t>(k2) * u, T(0));
        int t = 0;
        for (int di = -cfg.radius; di <= cfg.radius; ++di)
            for (int dj = -cfg.radius; dj <= cfg.radius; ++dj, ++t) {
                int ii = i + di, jj = j + dj;
                if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
                for (int c = 0; c < u; ++c)
                    tokens[static_cast<size_t>(t) * u + c] =
                        h_field.data[(static_cast<size_t>(ii) * n + jj) * u + c];
            }
        auto w = [&](const char* name) {
            return std::vector<T>(store.at(name).value.data.begin(),
                                  store.at(name).value.data.end());
        };
        return refcheck::attention_center<T>(tokens, k2, u, w("attn.wq"),
                                             w("attn.wk"), w("attn.wv"),
                                             w("attn.fc.w"), w("attn.fc.b"),
                                             cfg.attention_scale);
    }
};

template <typename T>
Tensor<T> random_field(int n, int u, RngStream& rng) {
    Tensor<T> h = Tensor<T>::zeros({n, n, u});
    for (T& v : h.data) v = static_cast<T>(rng.uniform_in(-1.5, 1.5));
    return h;
}

} // namespace

TEST_CASE("cellular attention matches the full-scores reference at every cell") {
    RngStream rng(41);
    for (int radius : {1, 2}) {
        AttentionHarness<double> harness(8, radius, false, 1000 + radius);
        for (int trial = 0; trial < 5; ++trial) {
            int n = 3 + static_cast<int>(rng.next_below(4));
            Tensor<double> h = random_field<double>(n, 8, rng);
            Tensor<double> out = harness.run(h);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    auto expect = harness.ref_center(h, i, j);
                    for (int c = 0; c < 8; ++c) {
                        INFO("radius ", radius, " cell ", i, ",", j, " ch ", c);
                        CHECK(out.data[(static_cast<size_t>(i) * n + j) * 8 + c] ==
                              doctest::Approx(expect[c]).epsilon(1e-12));
                    }
                }
        }
    }
}

TEST_CASE("score scaling flag matches the reference with scaling enabled") {
    RngStream rng(43);
    AttentionHarness<double> harness(6, 1, true, 7);
    Tensor<double> h = random_field<double>(4, 6, rng);
    Tensor<double> out = harness.run(h);
    auto expect = harness.ref_center(h, 2, 1);
    for (int c = 0; c < 6; ++c)
        CHECK(out.data[(2 * 4 + 1) * 6 + c] ==
              doctest::Approx(expect[c]).epsilon(1e-12));
}

template <typename T>
static double max_permutation_deviation(int cases, uint64_t seed, double) {
    RngStream rng(seed);
    AttentionHarness<T> harness(8, 1, false, 99);
    double worst = 0.0;
    for (int trial = 0; trial < cases; ++trial) {
        int n = 4 + static_cast<int>(rng.next_below(3));
        Tensor<T> h = random_field<T>(n, 8, rng);
        int i = 1 + static_cast<int>(rng.next_below(n - 2));
        int j = 1 + static_cast<int>(rng.next_below(n - 2));

        // shuffle the 8 neighbor vectors of (i,j) in place
        std::vector<std::pair<int, int>> offsets;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                if (di || dj) offsets.emplace_back(di, dj);
        std::vector<int> perm(8);
        for (int k = 0; k < 8; ++k) perm[k] = k;
        for (size_t k = perm.size(); k > 1; --k)
            std::swap(perm[k - 1], perm[rng.next_below(k)]);

        Tensor<T> permuted = h;
        for (int k = 0; k < 8; ++k) {
            auto [sdi, sdj] = offsets[perm[k]];
            auto [ddi, ddj] = offsets[k];
            const T* src =
                &h.data[(static_cast<size_t>(i + sdi) * n + (j + sdj)) * 8];
            T* dst =
                &permuted.data[(static_cast<size_t>(i + ddi) * n + (j + ddj)) * 8];
            std::copy(src, src + 8, dst);
        }

        Tensor<T> base = harness.run(h);
        Tensor<T> shuffled = harness.run(permuted);
        for (int c = 0; c < 8; ++c) {
            double d = std::abs(
                static_cast<double>(
                    base.data[(static_cast<size_t>(i) * n + j) * 8 + c]) -
                static_cast<double>(
                    shuffled.data[(static_cast<size_t>(i) * n + j) * 8 + c]));
            worst = std::max(worst, d);
        }
    }
    return worst;
}

TEST_CASE("neighbor permutations leave the center output unchanged") {
    CHECK(max_permutation_deviation<float>(200, 7, 0) <= 1e-5);
    CHECK(max_permutation_deviation<double>(200, 8, 0) <= 1e-10);
}

TEST_CASE("attention on degenerate fields") {
    SUBCASE("all-zero hidden field returns the FC bias everywhere") {
        AttentionHarness<float> harness(8, 1, false, 3);
        // give the bias a recognizable value
        auto& bias = harness.store.at("attn.fc.b").value;
        for (int c = 0; c < 8; ++c) bias.data[c] = 0.25f * (c + 1);
        Tensor<float> h = Tensor<float>::zeros({5, 5, 8});
        Tensor<float> out = harness.run(h);
        for (int cell = 0; cell < 25; ++cell)
            for (int c = 0; c < 8; ++c)
                CHECK(out.data[cell * 8 + c] ==
                      doctest::Approx(bias.data[c]).epsilon(1e-6));
    }
    SUBCASE("1x1 grid attends over the center plus padding tokens") {
        AttentionHarness<float> harness(8, 1, false, 4);
        RngStream rng(5);
        Tensor<float> h = random_field<float>(1, 8, rng);
        Tensor<float> out = harness.run(h);
        CHECK(out.shape == Shape{1, 1, 8});
        for (float v : out.data) CHECK(std::isfinite(v));
    }
}
