#pragma once

#include <algorithm>
#include <functional>

#include "arnca/nn.hpp"

namespace arnca::ad {

/// Builds a scalar loss from tape leaves of the store's parameters.
template <typename T>
using LossFn = std::function<Var(Tape<T>&, const std::map<std::string, Var>&)>;

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    size_t coords_checked = 0;
};

/// Central-difference check of d(loss)/d(parameter) for every parameter in
/// the store. Large tensors are subsampled to at least coords_per_tensor
/// coordinates. Relative error is |analytic - numeric| over
/// max(1e-8, |analytic| + |numeric|). Use with T = double.
template <typename T>
GradCheckReport grad_check(const LossFn<T>& f, ParamStore<T>& store, T eps = T(1e-5),
                           int coords_per_tensor = 64, uint64_t seed = 20240301) {
    auto eval_loss = [&]() -> double {
        Tape<T> tape;
        auto vars = insert_params(tape, store, false);
        Var loss = f(tape, vars);
        double v = static_cast<double>(tape.value(loss).data[0]);
        if (!std::isfinite(v)) throw std::runtime_error("grad_check: non-finite loss");
        return v;
    };

    // analytic gradients
    Tape<T> tape;
    auto vars = insert_params(tape, store, true);
    Var loss = f(tape, vars);
    tape.backward(loss);

    GradCheckReport report;
    RngStream rng(seed);
    for (auto& [name, p] : store) {
        const auto& node = tape.node(vars.at(name));
        const size_t n = p.value.numel();
        std::vector<size_t> coords;
        if (n <= static_cast<size_t>(coords_per_tensor)) {
            coords.resize(n);
            for (size_t i = 0; i < n; ++i) coords[i] = i;
        } else {
            coords.reserve(coords_per_tensor);
            for (int i = 0; i < coords_per_tensor; ++i)
                coords.push_back(rng.next_below(n));
        }
        for (size_t c : coords) {
            double analytic =
                node.grad.empty() ? 0.0 : static_cast<double>(node.grad[c]);
            T saved = p.value.data[c];
            p.value.data[c] = saved + eps;
            double up = eval_loss();
            p.value.data[c] = saved - eps;
            double down = eval_loss();
            p.value.data[c] = saved;
            double numeric = (up - down) / (2.0 * static_cast<double>(eps));
            if (!std::isfinite(numeric) || !std::isfinite(analytic))
                throw std::runtime_error("grad_check: non-finite derivative for " + name);
            double rel = std::abs(analytic - numeric) /
                         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            ++report.coords_checked;
            if (rel > report.max_rel_err) {
                report.max_rel_err = rel;
                report.worst_param = name;
            }
        }
    }
    return report;
}

} // namespace arnca::ad
