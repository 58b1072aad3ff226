#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace arnca::ad {

using Shape = std::vector<int>;

inline size_t shape_numel(const Shape& shape) {
    size_t n = 1;
    for (int d : shape) n *= static_cast<size_t>(d);
    return n;
}

inline std::string shape_str(const Shape& shape) {
    std::string s = "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

/// Dense row-major tensor. The default scalar type for training is float;
/// gradient checking instantiates everything with double.
template <typename T>
struct Tensor {
    Shape shape;
    std::vector<T> data;

    Tensor() = default;
    Tensor(Shape s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {}

    static Tensor zeros(Shape s) {
        size_t n = shape_numel(s);
        return Tensor(std::move(s), std::vector<T>(n, T(0)));
    }

    static Tensor full(Shape s, T v) {
        size_t n = shape_numel(s);
        return Tensor(std::move(s), std::vector<T>(n, v));
    }

    static Tensor scalar(T v) { return Tensor({1}, {v}); }

    size_t numel() const { return data.size(); }
    int dim(int i) const { return shape[i]; }
    int rank() const { return static_cast<int>(shape.size()); }

    /// Product of all dims but the last: the "row" count for per-row ops.
    size_t rows() const { return shape.empty() ? 0 : numel() / shape.back(); }

    template <typename U>
    Tensor<U> cast() const {
        Tensor<U> out;
        out.shape = shape;
        out.data.assign(data.begin(), data.end());
        return out;
    }
};

} // namespace arnca::ad
