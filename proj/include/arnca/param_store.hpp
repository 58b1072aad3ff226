#pragma once

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "arnca/tape.hpp"

namespace arnca::ad {

/// Named learnable tensors with their Adam moments. Names are unique and
/// iterate in lexicographic order, which fixes the draw order of
/// initialization and the layout of checkpoints.
template <typename T>
class ParamStore {
public:
    struct Param {
        Tensor<T> value;
        Tensor<T> grad;
        Tensor<T> m;
        Tensor<T> v;
        bool grad_populated = false;
    };

    Tensor<T>& create(const std::string& name, Tensor<T> init) {
        auto [it, inserted] = params_.emplace(name, Param{});
        if (!inserted)
            throw std::invalid_argument("parameter already exists: " + name);
        Param& p = it->second;
        p.grad = Tensor<T>::zeros(init.shape);
        p.m = Tensor<T>::zeros(init.shape);
        p.v = Tensor<T>::zeros(init.shape);
        p.value = std::move(init);
        return p.value;
    }

    Param& at(const std::string& name) {
        auto it = params_.find(name);
        if (it == params_.end())
            throw std::out_of_range("no such parameter: " + name);
        return it->second;
    }
    const Param& at(const std::string& name) const {
        return const_cast<ParamStore*>(this)->at(name);
    }

    bool has(const std::string& name) const { return params_.count(name) != 0; }

    auto begin() { return params_.begin(); }
    auto end() { return params_.end(); }
    auto begin() const { return params_.begin(); }
    auto end() const { return params_.end(); }
    size_t size() const { return params_.size(); }

    /// Total learnable element count.
    size_t count() const {
        size_t n = 0;
        for (const auto& [name, p] : params_) n += p.value.numel();
        return n;
    }

    void zero_grads() {
        for (auto& [name, p] : params_) {
            std::fill(p.grad.data.begin(), p.grad.data.end(), T(0));
            p.grad_populated = false;
        }
    }

    int64_t step_count() const { return step_; }

    /// One Adam update (beta1 = 0.9, beta2 = 0.999, eps = 1e-8, bias
    /// correction), then gradients are zeroed.
    void adam_step(T lr, T beta1 = T(0.9), T beta2 = T(0.999), T eps = T(1e-8)) {
        for (auto& [name, p] : params_)
            if (!p.grad_populated)
                throw std::runtime_error("adam_step: gradient never populated for " + name);
        ++step_;
        const T bc1 = T(1) - static_cast<T>(std::pow(static_cast<double>(beta1), static_cast<double>(step_)));
        const T bc2 = T(1) - static_cast<T>(std::pow(static_cast<double>(beta2), static_cast<double>(step_)));
        for (auto& [name, p] : params_) {
            for (size_t i = 0; i < p.value.numel(); ++i) {
                T g = p.grad.data[i];
                p.m.data[i] = beta1 * p.m.data[i] + (T(1) - beta1) * g;
                p.v.data[i] = beta2 * p.v.data[i] + (T(1) - beta2) * g * g;
                T m_hat = p.m.data[i] / bc1;
                T v_hat = p.v.data[i] / bc2;
                p.value.data[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
            }
        }
        zero_grads();
    }

    template <typename U>
    ParamStore<U> cast() const {
        ParamStore<U> out;
        for (const auto& [name, p] : params_) out.create(name, p.value.template cast<U>());
        return out;
    }

private:
    std::map<std::string, Param> params_;
    int64_t step_ = 0;
};

/// Inserts every parameter as a tape leaf; returns name -> Var.
template <typename T>
std::map<std::string, Var> insert_params(Tape<T>& tape, const ParamStore<T>& store,
                                         bool requires_grad = true) {
    std::map<std::string, Var> vars;
    for (const auto& [name, p] : store) vars[name] = tape.leaf(p.value, requires_grad);
    return vars;
}

/// Adds the tape-leaf gradients back into the store after backward().
template <typename T>
void accumulate_grads(Tape<T>& tape, const std::map<std::string, Var>& vars,
                      ParamStore<T>& store) {
    for (const auto& [name, var] : vars) {
        auto& p = store.at(name);
        const auto& node = tape.node(var);
        if (!node.grad.empty())
            for (size_t i = 0; i < p.grad.numel(); ++i) p.grad.data[i] += node.grad[i];
        p.grad_populated = true;
    }
}

// Checkpoint container, little-endian:
//   magic "ARNP", version u16 = 1, count u32, then per parameter:
//   name length u16 + UTF-8 name, rank u8, dims u32 each, f32 payload.
namespace ckpt_detail {

inline void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}
inline void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

} // namespace ckpt_detail

template <typename T>
std::string serialize_params(const ParamStore<T>& store) {
    std::string out = "ARNP";
    ckpt_detail::put_u16(out, 1);
    ckpt_detail::put_u32(out, static_cast<uint32_t>(store.size()));
    for (const auto& [name, p] : store) {
        ckpt_detail::put_u16(out, static_cast<uint16_t>(name.size()));
        out.append(name);
        out.push_back(static_cast<char>(p.value.rank()));
        for (int d : p.value.shape) ckpt_detail::put_u32(out, static_cast<uint32_t>(d));
        for (const T& v : p.value.data) {
            float f = static_cast<float>(v);
            char buf[4];
            std::memcpy(buf, &f, 4);
            out.append(buf, 4);
        }
    }
    return out;
}

template <typename T>
ParamStore<T> deserialize_params(const std::string& bytes) {
    size_t pos = 0;
    auto take = [&](size_t count) {
        if (pos + count > bytes.size())
            throw std::runtime_error("checkpoint truncated at byte " + std::to_string(pos));
        const char* p = bytes.data() + pos;
        pos += count;
        return p;
    };
    auto u16 = [&] {
        const unsigned char* p = reinterpret_cast<const unsigned char*>(take(2));
        return static_cast<uint16_t>(p[0] | (p[1] << 8));
    };
    auto u32 = [&] {
        const unsigned char* p = reinterpret_cast<const unsigned char*>(take(4));
        return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
               (uint32_t(p[3]) << 24);
    };

    if (std::string(take(4), 4) != "ARNP")
        throw std::runtime_error("bad checkpoint magic");
    uint16_t version = u16();
    if (version != 1)
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    uint32_t count = u32();
    ParamStore<T> store;
    for (uint32_t k = 0; k < count; ++k) {
        uint16_t name_len = u16();
        std::string name(take(name_len), name_len);
        uint8_t rank = static_cast<uint8_t>(*take(1));
        Shape shape(rank);
        for (int i = 0; i < rank; ++i) shape[i] = static_cast<int>(u32());
        Tensor<T> t = Tensor<T>::zeros(shape);
        const char* payload = take(t.numel() * 4);
        for (size_t i = 0; i < t.numel(); ++i) {
            float f;
            std::memcpy(&f, payload + i * 4, 4);
            t.data[i] = static_cast<T>(f);
        }
        store.create(name, std::move(t));
    }
    return store;
}

template <typename T>
void save_params(const ParamStore<T>& store, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    std::string bytes = serialize_params(store);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

template <typename T>
ParamStore<T> load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return deserialize_params<T>(bytes);
}

} // namespace arnca::ad
