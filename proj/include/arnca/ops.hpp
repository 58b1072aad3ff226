#pragma once

// Differentiable tensor operations. Each op pushes one node whose backward
// closure accumulates into the input gradients; inner loops run over
// contiguous rows so the compiler can vectorize them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "arnca/tape.hpp"

namespace arnca::ad {

namespace detail {

// Branch-free float exp so activation loops vectorize: range reduction to
// 2^n * e^r with |r| <= ln2/2 and a degree-6 Taylor tail (~1e-7 relative
// error). Exact at 0. The double instantiations keep libm exp/tanh, so
// gradient checking runs against reference-accuracy math.
inline float fast_expf(float x) {
    x = std::min(87.0f, std::max(-87.0f, x));
    float z = x * 1.44269504088896341f;
    float shifted = z + 12582912.0f; // round-to-nearest via the fp format
    int n = std::bit_cast<int>(shifted) - std::bit_cast<int>(12582912.0f);
    float nf = shifted - 12582912.0f;
    float r = x - nf * 0.693145751953125f;  // ln2 high bits
    r -= nf * 1.428606765330187045e-06f;    // ln2 low bits
    float p = 1.0f / 720;
    p = p * r + 1.0f / 120;
    p = p * r + 1.0f / 24;
    p = p * r + 1.0f / 6;
    p = p * r + 0.5f;
    p = p * r + 1.0f;
    p = p * r + 1.0f;
    return p * std::bit_cast<float>((n + 127) << 23);
}

template <typename T>
inline T exp_activation(T x) {
    return std::exp(x);
}
inline float exp_activation(float x) { return fast_expf(x); }

template <typename T>
inline T tanh_activation(T x) {
    return std::tanh(x);
}
inline float tanh_activation(float x) {
    float t = fast_expf(2.0f * x);
    return (t - 1.0f) / (t + 1.0f);
}

template <typename T>
inline T sigmoid_activation(T x) {
    return T(1) / (T(1) + exp_activation(-x));
}

template <typename T>
inline void axpy(T* y, T a, const T* x, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

// C[rows,n] (+)= A[rows,k] * B[k,n]
template <typename T>
inline void mm(const T* a, const T* b, T* c, int rows, int k, int n) {
    for (int r = 0; r < rows; ++r) {
        const T* ar = a + static_cast<size_t>(r) * k;
        T* cr = c + static_cast<size_t>(r) * n;
        for (int i = 0; i < k; ++i) axpy(cr, ar[i], b + static_cast<size_t>(i) * n, n);
    }
}

// dA[rows,k] += dC[rows,n] * B^T. B is transposed into scratch first so the
// inner update runs over contiguous rows.
template <typename T>
inline void mm_grad_a(const T* dc, const T* b, T* da, int rows, int k, int n,
                      std::vector<T>& scratch) {
    scratch.resize(static_cast<size_t>(k) * n);
    for (int i = 0; i < k; ++i)
        for (int o = 0; o < n; ++o)
            scratch[static_cast<size_t>(o) * k + i] = b[static_cast<size_t>(i) * n + o];
    for (int r = 0; r < rows; ++r) {
        const T* dcr = dc + static_cast<size_t>(r) * n;
        T* dar = da + static_cast<size_t>(r) * k;
        for (int o = 0; o < n; ++o) axpy(dar, dcr[o], scratch.data() + static_cast<size_t>(o) * k, k);
    }
}

// dB[k,n] += A^T * dC[rows,n]
template <typename T>
inline void mm_grad_b(const T* a, const T* dc, T* db, int rows, int k, int n) {
    for (int r = 0; r < rows; ++r) {
        const T* ar = a + static_cast<size_t>(r) * k;
        const T* dcr = dc + static_cast<size_t>(r) * n;
        for (int i = 0; i < k; ++i) axpy(db + static_cast<size_t>(i) * n, ar[i], dcr, n);
    }
}

inline void check_same_shape(const char* op, const Shape& a, const Shape& b) {
    if (a != b)
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    shape_str(a) + " vs " + shape_str(b));
}

} // namespace detail

/// y = x W (+ b). x is [..., in] with leading dims collapsed to rows;
/// W is [in, out]; b, when given, is [out].
template <typename T>
Var linear(Tape<T>& tape, Var x, Var w, std::optional<Var> b = std::nullopt) {
    const Tensor<T>& xv = tape.value(x);
    const Tensor<T>& wv = tape.value(w);
    if (wv.rank() != 2 || xv.rank() < 1 || xv.shape.back() != wv.shape[0])
        throw std::invalid_argument("linear: incompatible shapes " +
                                    shape_str(xv.shape) + " vs " + shape_str(wv.shape));
    const int in = wv.shape[0], out = wv.shape[1];
    const int rows = static_cast<int>(xv.rows());

    Shape out_shape = xv.shape;
    out_shape.back() = out;
    Tensor<T> y = Tensor<T>::zeros(out_shape);
    if (b) {
        const Tensor<T>& bv = tape.value(*b);
        if (bv.shape != Shape{out})
            throw std::invalid_argument("linear: bias shape " + shape_str(bv.shape) +
                                        " does not match output width " +
                                        std::to_string(out));
        for (int r = 0; r < rows; ++r)
            std::copy(bv.data.begin(), bv.data.end(), y.data.begin() + static_cast<size_t>(r) * out);
    }
    detail::mm(xv.data.data(), wv.data.data(), y.data.data(), rows, in, out);

    bool rg = tape.requires_grad(x) || tape.requires_grad(w) ||
              (b && tape.requires_grad(*b));
    Var bvar = b.value_or(Var{});
    Var yv;
    yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, w, bvar, yv, rows, in, out] {
            const std::vector<T>& dy = tape.grad(yv);
            if (tape.requires_grad(x)) {
                std::vector<T> scratch;
                detail::mm_grad_a(dy.data(), tape.value(w).data.data(),
                                  tape.grad(x).data(), rows, in, out, scratch);
            }
            if (tape.requires_grad(w))
                detail::mm_grad_b(tape.value(x).data.data(), dy.data(),
                                  tape.grad(w).data(), rows, in, out);
            if (bvar.valid() && tape.requires_grad(bvar)) {
                std::vector<T>& db = tape.grad(bvar);
                for (int r = 0; r < rows; ++r)
                    detail::axpy(db.data(), T(1), dy.data() + static_cast<size_t>(r) * out, out);
            }
        };
    }
    return yv;
}

/// Matrix product. Supports [m,k]x[k,n], [B,m,k]x[k,n] (weights broadcast
/// over the batch) and [B,m,k]x[B,k,n].
template <typename T>
Var matmul(Tape<T>& tape, Var a, Var b) {
    const Tensor<T>& av = tape.value(a);
    const Tensor<T>& bv = tape.value(b);
    auto fail = [&] {
        throw std::invalid_argument("matmul: incompatible shapes " +
                                    shape_str(av.shape) + " vs " + shape_str(bv.shape));
    };

    if (bv.rank() == 2) {
        if (av.rank() < 2 || av.shape.back() != bv.shape[0]) fail();
        return linear(tape, a, b);
    }
    if (av.rank() != 3 || bv.rank() != 3 || av.shape[0] != bv.shape[0] ||
        av.shape[2] != bv.shape[1])
        fail();

    const int batch = av.shape[0], m = av.shape[1], k = av.shape[2], n = bv.shape[2];
    Tensor<T> y = Tensor<T>::zeros({batch, m, n});
    for (int s = 0; s < batch; ++s)
        detail::mm(av.data.data() + static_cast<size_t>(s) * m * k,
                   bv.data.data() + static_cast<size_t>(s) * k * n,
                   y.data.data() + static_cast<size_t>(s) * m * n, m, k, n);

    bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, a, b, yv, batch, m, k, n] {
            const std::vector<T>& dy = tape.grad(yv);
            const Tensor<T>& avv = tape.value(a);
            const Tensor<T>& bvv = tape.value(b);
            if (tape.requires_grad(a)) {
                std::vector<T>& da = tape.grad(a);
                std::vector<T> scratch;
                for (int s = 0; s < batch; ++s)
                    detail::mm_grad_a(dy.data() + static_cast<size_t>(s) * m * n,
                                      bvv.data.data() + static_cast<size_t>(s) * k * n,
                                      da.data() + static_cast<size_t>(s) * m * k, m, k, n,
                                      scratch);
            }
            if (tape.requires_grad(b)) {
                std::vector<T>& db = tape.grad(b);
                for (int s = 0; s < batch; ++s)
                    detail::mm_grad_b(avv.data.data() + static_cast<size_t>(s) * m * k,
                                      dy.data() + static_cast<size_t>(s) * m * n,
                                      db.data() + static_cast<size_t>(s) * k * n, m, k, n);
            }
        };
    }
    return yv;
}

template <typename T>
Var add(Tape<T>& tape, Var a, Var b) {
    const Tensor<T>& av = tape.value(a);
    const Tensor<T>& bv = tape.value(b);
    detail::check_same_shape("add", av.shape, bv.shape);
    Tensor<T> y = av;
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += bv.data[i];
    bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, a, b, yv] {
            const std::vector<T>& dy = tape.grad(yv);
            if (tape.requires_grad(a)) {
                std::vector<T>& da = tape.grad(a);
                for (size_t i = 0; i < dy.size(); ++i) da[i] += dy[i];
            }
            if (tape.requires_grad(b)) {
                std::vector<T>& db = tape.grad(b);
                for (size_t i = 0; i < dy.size(); ++i) db[i] += dy[i];
            }
        };
    }
    return yv;
}

template <typename T>
Var mul(Tape<T>& tape, Var a, Var b) {
    const Tensor<T>& av = tape.value(a);
    const Tensor<T>& bv = tape.value(b);
    detail::check_same_shape("mul", av.shape, bv.shape);
    Tensor<T> y = av;
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] *= bv.data[i];
    bool rg = tape.requires_grad(a) || tape.requires_grad(b);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, a, b, yv] {
            const std::vector<T>& dy = tape.grad(yv);
            const std::vector<T>& avd = tape.value(a).data;
            const std::vector<T>& bvd = tape.value(b).data;
            if (tape.requires_grad(a)) {
                std::vector<T>& da = tape.grad(a);
                for (size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * bvd[i];
            }
            if (tape.requires_grad(b)) {
                std::vector<T>& db = tape.grad(b);
                for (size_t i = 0; i < dy.size(); ++i) db[i] += dy[i] * avd[i];
            }
        };
    }
    return yv;
}

template <typename T>
Var scale(Tape<T>& tape, Var x, T c) {
    Tensor<T> y = tape.value(x);
    for (T& v : y.data) v *= c;
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv, c] {
            const std::vector<T>& dy = tape.grad(yv);
            std::vector<T>& dx = tape.grad(x);
            for (size_t i = 0; i < dy.size(); ++i) dx[i] += c * dy[i];
        };
    }
    return yv;
}

template <typename T>
Var tanh_op(Tape<T>& tape, Var x) {
    Tensor<T> y = tape.value(x);
    for (T& v : y.data) v = detail::tanh_activation(v);
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv] {
            const std::vector<T>& dy = tape.grad(yv);
            const std::vector<T>& yd = tape.value(yv).data;
            std::vector<T>& dx = tape.grad(x);
            for (size_t i = 0; i < dy.size(); ++i)
                dx[i] += dy[i] * (T(1) - yd[i] * yd[i]);
        };
    }
    return yv;
}

template <typename T>
Var sigmoid(Tape<T>& tape, Var x) {
    Tensor<T> y = tape.value(x);
    for (T& v : y.data) v = detail::sigmoid_activation(v);
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv] {
            const std::vector<T>& dy = tape.grad(yv);
            const std::vector<T>& yd = tape.value(yv).data;
            std::vector<T>& dx = tape.grad(x);
            for (size_t i = 0; i < dy.size(); ++i)
                dx[i] += dy[i] * yd[i] * (T(1) - yd[i]);
        };
    }
    return yv;
}

/// Numerically stable softmax along the last dimension.
template <typename T>
Var softmax_lastdim(Tape<T>& tape, Var x) {
    const Tensor<T>& xv = tape.value(x);
    if (xv.rank() < 1)
        throw std::invalid_argument("softmax: scalar input " + shape_str(xv.shape));
    const int cols = xv.shape.back();
    const int rows = static_cast<int>(xv.rows());
    Tensor<T> y = xv;
    for (int r = 0; r < rows; ++r) {
        T* row = y.data.data() + static_cast<size_t>(r) * cols;
        T mx = row[0];
        for (int i = 1; i < cols; ++i) mx = std::max(mx, row[i]);
        T denom = 0;
        for (int i = 0; i < cols; ++i) {
            row[i] = detail::exp_activation(row[i] - mx);
            denom += row[i];
        }
        for (int i = 0; i < cols; ++i) row[i] /= denom;
    }
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv, rows, cols] {
            const std::vector<T>& dy = tape.grad(yv);
            const std::vector<T>& yd = tape.value(yv).data;
            std::vector<T>& dx = tape.grad(x);
            for (int r = 0; r < rows; ++r) {
                const size_t off = static_cast<size_t>(r) * cols;
                T inner = 0;
                for (int i = 0; i < cols; ++i) inner += dy[off + i] * yd[off + i];
                for (int i = 0; i < cols; ++i)
                    dx[off + i] += yd[off + i] * (dy[off + i] - inner);
            }
        };
    }
    return yv;
}

/// Same-padded 2D convolution on a [H,W,Cin] field with a [kh,kw,Cin,Cout]
/// kernel (odd kh, kw) and optional [Cout] bias.
template <typename T>
Var conv2d(Tape<T>& tape, Var x, Var k, std::optional<Var> b = std::nullopt) {
    const Tensor<T>& xv = tape.value(x);
    const Tensor<T>& kv = tape.value(k);
    if (xv.rank() != 3 || kv.rank() != 4 || xv.shape[2] != kv.shape[2])
        throw std::invalid_argument("conv2d: incompatible shapes " +
                                    shape_str(xv.shape) + " vs " + shape_str(kv.shape));
    const int h = xv.shape[0], w = xv.shape[1], cin = xv.shape[2];
    const int kh = kv.shape[0], kw = kv.shape[1], cout = kv.shape[3];
    if (kh % 2 == 0 || kw % 2 == 0)
        throw std::invalid_argument("conv2d: kernel dims must be odd, got " +
                                    shape_str(kv.shape));
    const int ph = kh / 2, pw = kw / 2;

    Tensor<T> y = Tensor<T>::zeros({h, w, cout});
    if (b) {
        const Tensor<T>& bv = tape.value(*b);
        if (bv.shape != Shape{cout})
            throw std::invalid_argument("conv2d: bias shape " + shape_str(bv.shape) +
                                        " vs channels " + std::to_string(cout));
        for (int c = 0; c < h * w; ++c)
            std::copy(bv.data.begin(), bv.data.end(),
                      y.data.begin() + static_cast<size_t>(c) * cout);
    }
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            T* yo = y.data.data() + (static_cast<size_t>(i) * w + j) * cout;
            for (int di = 0; di < kh; ++di) {
                int ii = i + di - ph;
                if (ii < 0 || ii >= h) continue;
                for (int dj = 0; dj < kw; ++dj) {
                    int jj = j + dj - pw;
                    if (jj < 0 || jj >= w) continue;
                    const T* xr = xv.data.data() + (static_cast<size_t>(ii) * w + jj) * cin;
                    const T* kr = kv.data.data() +
                                  (static_cast<size_t>(di) * kw + dj) * cin * cout;
                    for (int ci = 0; ci < cin; ++ci)
                        detail::axpy(yo, xr[ci], kr + static_cast<size_t>(ci) * cout, cout);
                }
            }
        }

    bool rg = tape.requires_grad(x) || tape.requires_grad(k) ||
              (b && tape.requires_grad(*b));
    Var bvar = b.value_or(Var{});
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, k, bvar, yv, h, w, cin, kh, kw, cout, ph, pw] {
            const std::vector<T>& dy = tape.grad(yv);
            const Tensor<T>& xvv = tape.value(x);
            const Tensor<T>& kvv = tape.value(k);
            const bool need_dx = tape.requires_grad(x);
            const bool need_dk = tape.requires_grad(k);
            std::vector<T>* dx = need_dx ? &tape.grad(x) : nullptr;
            std::vector<T>* dk = need_dk ? &tape.grad(k) : nullptr;
            // kernel transposed to [kh,kw,Cout,Cin] so dx updates are
            // contiguous over input channels
            std::vector<T> kt;
            if (need_dx) {
                kt.resize(kvv.numel());
                for (int t = 0; t < kh * kw; ++t)
                    for (int ci = 0; ci < cin; ++ci)
                        for (int co = 0; co < cout; ++co)
                            kt[(static_cast<size_t>(t) * cout + co) * cin + ci] =
                                kvv.data[(static_cast<size_t>(t) * cin + ci) * cout + co];
            }
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < w; ++j) {
                    const T* dyo = dy.data() + (static_cast<size_t>(i) * w + j) * cout;
                    for (int di = 0; di < kh; ++di) {
                        int ii = i + di - ph;
                        if (ii < 0 || ii >= h) continue;
                        for (int dj = 0; dj < kw; ++dj) {
                            int jj = j + dj - pw;
                            if (jj < 0 || jj >= w) continue;
                            const size_t xoff = (static_cast<size_t>(ii) * w + jj) * cin;
                            const size_t koff =
                                (static_cast<size_t>(di) * kw + dj) * cin * cout;
                            if (need_dx)
                                for (int co = 0; co < cout; ++co)
                                    detail::axpy(dx->data() + xoff, dyo[co],
                                                 kt.data() + koff +
                                                     static_cast<size_t>(co) * cin,
                                                 cin);
                            if (need_dk)
                                for (int ci = 0; ci < cin; ++ci)
                                    detail::axpy(dk->data() + koff +
                                                     static_cast<size_t>(ci) * cout,
                                                 xvv.data[xoff + ci], dyo, cout);
                        }
                    }
                }
            if (bvar.valid() && tape.requires_grad(bvar)) {
                std::vector<T>& db = tape.grad(bvar);
                for (int c = 0; c < h * w; ++c)
                    detail::axpy(db.data(), T(1),
                                 dy.data() + static_cast<size_t>(c) * cout, cout);
            }
        };
    }
    return yv;
}

/// Zero-padded neighborhood gather: [H,W,C] -> [H*W, (2r+1)^2, C], window
/// cells in row-major order with the center at index ((2r+1)^2 - 1) / 2.
template <typename T>
Var gather_neighborhoods(Tape<T>& tape, Var x, int radius) {
    const Tensor<T>& xv = tape.value(x);
    if (xv.rank() != 3)
        throw std::invalid_argument("gather_neighborhoods: want [H,W,C], got " +
                                    shape_str(xv.shape));
    if (radius < 1)
        throw std::invalid_argument("gather_neighborhoods: radius must be >= 1");
    const int h = xv.shape[0], w = xv.shape[1], c = xv.shape[2];
    const int k = 2 * radius + 1, win = k * k;

    Tensor<T> y = Tensor<T>::zeros({h * w, win, c});
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            T* cell = y.data.data() + (static_cast<size_t>(i) * w + j) * win * c;
            int t = 0;
            for (int di = -radius; di <= radius; ++di)
                for (int dj = -radius; dj <= radius; ++dj, ++t) {
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= h || jj < 0 || jj >= w) continue;
                    const T* src =
                        xv.data.data() + (static_cast<size_t>(ii) * w + jj) * c;
                    std::copy(src, src + c, cell + static_cast<size_t>(t) * c);
                }
        }

    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv, h, w, c, radius, win] {
            const std::vector<T>& dy = tape.grad(yv);
            std::vector<T>& dx = tape.grad(x);
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < w; ++j) {
                    const T* cell =
                        dy.data() + (static_cast<size_t>(i) * w + j) * win * c;
                    int t = 0;
                    for (int di = -radius; di <= radius; ++di)
                        for (int dj = -radius; dj <= radius; ++dj, ++t) {
                            int ii = i + di, jj = j + dj;
                            if (ii < 0 || ii >= h || jj < 0 || jj >= w) continue;
                            detail::axpy(dx.data() +
                                             (static_cast<size_t>(ii) * w + jj) * c,
                                         T(1), cell + static_cast<size_t>(t) * c, c);
                        }
                }
        };
    }
    return yv;
}

/// Contiguous slice along the last dimension.
template <typename T>
Var slice_lastdim(Tape<T>& tape, Var x, int start, int len) {
    const Tensor<T>& xv = tape.value(x);
    const int cols = xv.shape.back();
    if (start < 0 || len < 1 || start + len > cols)
        throw std::invalid_argument("slice_lastdim: [" + std::to_string(start) + "," +
                                    std::to_string(start + len) + ") out of " +
                                    shape_str(xv.shape));
    const int rows = static_cast<int>(xv.rows());
    Shape out_shape = xv.shape;
    out_shape.back() = len;
    Tensor<T> y = Tensor<T>::zeros(out_shape);
    for (int r = 0; r < rows; ++r)
        std::copy(xv.data.begin() + static_cast<size_t>(r) * cols + start,
                  xv.data.begin() + static_cast<size_t>(r) * cols + start + len,
                  y.data.begin() + static_cast<size_t>(r) * len);
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv, rows, cols, start, len] {
            const std::vector<T>& dy = tape.grad(yv);
            std::vector<T>& dx = tape.grad(x);
            for (int r = 0; r < rows; ++r)
                detail::axpy(dx.data() + static_cast<size_t>(r) * cols + start, T(1),
                             dy.data() + static_cast<size_t>(r) * len, len);
        };
    }
    return yv;
}

template <typename T>
Var reshape(Tape<T>& tape, Var x, Shape shape) {
    const Tensor<T>& xv = tape.value(x);
    if (shape_numel(shape) != xv.numel())
        throw std::invalid_argument("reshape: " + shape_str(xv.shape) + " to " +
                                    shape_str(shape) + " changes element count");
    Tensor<T> y(std::move(shape), xv.data);
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(std::move(y), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv] {
            const std::vector<T>& dy = tape.grad(yv);
            std::vector<T>& dx = tape.grad(x);
            for (size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i];
        };
    }
    return yv;
}

/// Mean binary cross-entropy against constant 0/1 targets, with the
/// probabilities clamped to [eps, 1-eps]. Where the clamp binds, the true
/// derivative is zero and backward honors that.
template <typename T>
Var bce_loss(Tape<T>& tape, Var p, const Tensor<T>& targets, T eps = T(1e-7)) {
    const Tensor<T>& pv = tape.value(p);
    detail::check_same_shape("bce_loss", pv.shape, targets.shape);
    const size_t n = pv.numel();
    double acc = 0;
    for (size_t i = 0; i < n; ++i) {
        T pc = std::clamp(pv.data[i], eps, T(1) - eps);
        T y = targets.data[i];
        acc += -(y * std::log(pc) + (T(1) - y) * std::log(T(1) - pc));
    }
    Tensor<T> loss = Tensor<T>::scalar(static_cast<T>(acc / static_cast<double>(n)));
    bool rg = tape.requires_grad(p);
    Var yv = tape.push(std::move(loss), rg, nullptr);
    if (rg) {
        Tensor<T> y = targets;
        tape.node(yv).backward = [&tape, p, yv, y = std::move(y), eps, n] {
            const T dy = tape.grad(yv)[0];
            const std::vector<T>& pd = tape.value(p).data;
            std::vector<T>& dp = tape.grad(p);
            const T inv_n = T(1) / static_cast<T>(n);
            for (size_t i = 0; i < n; ++i) {
                if (pd[i] < eps || pd[i] > T(1) - eps) continue;
                dp[i] += dy * inv_n * (pd[i] - y.data[i]) / (pd[i] * (T(1) - pd[i]));
            }
        };
    }
    return yv;
}

/// Sum of all elements, as a scalar node.
template <typename T>
Var sum_all(Tape<T>& tape, Var x) {
    const Tensor<T>& xv = tape.value(x);
    T acc = 0;
    for (const T& v : xv.data) acc += v;
    bool rg = tape.requires_grad(x);
    Var yv = tape.push(Tensor<T>::scalar(acc), rg, nullptr);
    if (rg) {
        tape.node(yv).backward = [&tape, x, yv] {
            const T dy = tape.grad(yv)[0];
            std::vector<T>& dx = tape.grad(x);
            for (T& v : dx) v += dy;
        };
    }
    return yv;
}

/// Leaf of zeros, handy for zero-input prediction windows and t=0 states.
template <typename T>
Var zeros_leaf(Tape<T>& tape, Shape shape) {
    return tape.leaf(Tensor<T>::zeros(std::move(shape)), false);
}

} // namespace arnca::ad
