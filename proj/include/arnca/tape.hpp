#pragma once

#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arnca/tensor.hpp"

namespace arnca::ad {

/// Handle to a node on a Tape.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

/// Reverse-mode tape at tensor-op granularity. Nodes are appended in
/// evaluation order, so the node list is already a topological order and
/// backward() is a single reverse sweep. A tape is confined to one thread.
template <typename T>
class Tape {
public:
    struct Node {
        Tensor<T> value;
        std::vector<T> grad;
        std::function<void()> backward;
        bool requires_grad = false;
    };

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var leaf(Tensor<T> value, bool requires_grad = false) {
        return push(std::move(value), requires_grad, nullptr);
    }

    Var push(Tensor<T> value, bool requires_grad, std::function<void()> backward) {
#ifndef NDEBUG
        for (const T& v : value.data) assert(std::isfinite(static_cast<double>(v)));
#endif
        nodes_.push_back(Node{std::move(value), {}, std::move(backward), requires_grad});
        return Var{static_cast<int>(nodes_.size()) - 1};
    }

    Node& node(Var v) { return nodes_[static_cast<size_t>(v.id)]; }
    const Node& node(Var v) const { return nodes_[static_cast<size_t>(v.id)]; }

    Tensor<T>& value(Var v) { return node(v).value; }
    const Tensor<T>& value(Var v) const { return node(v).value; }
    const Shape& shape(Var v) const { return node(v).value.shape; }

    /// Gradient buffer of v, allocated zero on first touch during backward.
    std::vector<T>& grad(Var v) {
        Node& n = node(v);
        if (n.grad.empty()) n.grad.assign(n.value.numel(), T(0));
        return n.grad;
    }

    bool requires_grad(Var v) const { return node(v).requires_grad; }

    /// Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse. The loss
    /// node must hold a single element.
    void backward(Var loss) {
        if (value(loss).numel() != 1)
            throw std::invalid_argument("backward: loss must be a scalar, got " +
                                        shape_str(shape(loss)));
        grad(loss)[0] = T(1);
        for (int id = loss.id; id >= 0; --id) {
            Node& n = nodes_[static_cast<size_t>(id)];
            if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
            n.backward();
        }
    }

    void reset() { nodes_.clear(); }
    size_t size() const { return nodes_.size(); }

private:
    std::vector<Node> nodes_;
};

} // namespace arnca::ad
