#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "ucascade/rng.hpp"
#include "ucascade/tensor.hpp"

namespace ucascade::nn {

using ucascade::Rng;
using ucascade::Shape;
using ucascade::TensorT;

inline std::size_t conv_out_extent(std::size_t in, std::size_t k, std::size_t stride,
                                   std::size_t pad) {
    require(in + 2 * pad >= k, "kernel extent " + std::to_string(k) +
                                   " exceeds padded input " + std::to_string(in + 2 * pad));
    return (in + 2 * pad - k) / stride + 1;
}

// ---------------------------------------------------------------------------
// conv2d, cross-correlation, zero padding
// ---------------------------------------------------------------------------

template <typename S>
TensorT<S> pad2d(const TensorT<S>& x, std::size_t pad) {
    if (pad == 0) return x;
    const std::size_t C = x.shape[0], H = x.shape[1], W = x.shape[2];
    TensorT<S> out({C, H + 2 * pad, W + 2 * pad});
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t y = 0; y < H; ++y) {
            const S* src = x.ptr() + (c * H + y) * W;
            S* dst = out.ptr() + (c * out.shape[1] + y + pad) * out.shape[2] + pad;
            std::copy(src, src + W, dst);
        }
    return out;
}

template <typename S>
TensorT<S> conv2d_forward(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& b,
                          std::size_t stride, std::size_t pad) {
    require(x.rank() == 3, "conv2d: input must be [Cin,H,W], got " + shape_str(x.shape));
    require(w.rank() == 4, "conv2d: weights must be [Cout,Cin,kH,kW], got " + shape_str(w.shape));
    const std::size_t Cin = x.shape[0], H = x.shape[1], W = x.shape[2];
    const std::size_t Cout = w.shape[0], kH = w.shape[2], kW = w.shape[3];
    require(w.shape[1] == Cin, "conv2d: weight Cin " + std::to_string(w.shape[1]) +
                                   " != input Cin " + std::to_string(Cin));
    require(b.shape == Shape{Cout}, "conv2d: bias must be [Cout]");
    require(stride >= 1, "conv2d: stride must be >= 1");
    const std::size_t Ho = conv_out_extent(H, kH, stride, pad);
    const std::size_t Wo = conv_out_extent(W, kW, stride, pad);

    const TensorT<S> xp = pad2d(x, pad);
    const std::size_t Hp = xp.shape[1], Wp = xp.shape[2];

    TensorT<S> y({Cout, Ho, Wo});
    for (std::size_t co = 0; co < Cout; ++co) {
        S* ybase = y.ptr() + co * Ho * Wo;
        std::fill(ybase, ybase + Ho * Wo, b[co]);
        for (std::size_t ci = 0; ci < Cin; ++ci) {
            const S* xc = xp.ptr() + ci * Hp * Wp;
            const S* wc = w.ptr() + (co * Cin + ci) * kH * kW;
            for (std::size_t ky = 0; ky < kH; ++ky)
                for (std::size_t kx = 0; kx < kW; ++kx) {
                    const S wv = wc[ky * kW + kx];
                    for (std::size_t oy = 0; oy < Ho; ++oy) {
                        const S* xrow = xc + (oy * stride + ky) * Wp + kx;
                        S* yrow = ybase + oy * Wo;
                        if (stride == 1) {
                            for (std::size_t ox = 0; ox < Wo; ++ox)
                                yrow[ox] += wv * xrow[ox];
                        } else {
                            for (std::size_t ox = 0; ox < Wo; ++ox)
                                yrow[ox] += wv * xrow[ox * stride];
                        }
                    }
                }
        }
    }
    return y;
}

// Gradients w.r.t. input, weights, bias. gw/gb are accumulated into (callers
// zero them at step boundaries), gx is freshly allocated.
template <typename S>
TensorT<S> conv2d_backward(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& gy,
                           std::size_t stride, std::size_t pad, TensorT<S>& gw, TensorT<S>& gb) {
    const std::size_t Cin = x.shape[0], H = x.shape[1], W = x.shape[2];
    const std::size_t Cout = w.shape[0], kH = w.shape[2], kW = w.shape[3];
    const std::size_t Ho = gy.shape[1], Wo = gy.shape[2];
    require(gw.shape == w.shape && gb.shape == Shape{Cout}, "conv2d_backward: grad shapes");

    const TensorT<S> xp = pad2d(x, pad);
    const std::size_t Hp = xp.shape[1], Wp = xp.shape[2];
    TensorT<S> gxp({Cin, Hp, Wp});

    for (std::size_t co = 0; co < Cout; ++co) {
        const S* gyc = gy.ptr() + co * Ho * Wo;
        double bsum = 0;
        for (std::size_t i = 0; i < Ho * Wo; ++i) bsum += double(gyc[i]);
        gb[co] += S(bsum);
        for (std::size_t ci = 0; ci < Cin; ++ci) {
            const S* xc = xp.ptr() + ci * Hp * Wp;
            S* gxc = gxp.ptr() + ci * Hp * Wp;
            S* gwc = gw.ptr() + (co * Cin + ci) * kH * kW;
            const S* wc = w.ptr() + (co * Cin + ci) * kH * kW;
            for (std::size_t ky = 0; ky < kH; ++ky)
                for (std::size_t kx = 0; kx < kW; ++kx) {
                    const S wv = wc[ky * kW + kx];
                    S wacc = 0;
                    for (std::size_t oy = 0; oy < Ho; ++oy) {
                        const S* xrow = xc + (oy * stride + ky) * Wp + kx;
                        S* gxrow = gxc + (oy * stride + ky) * Wp + kx;
                        const S* gyrow = gyc + oy * Wo;
                        if (stride == 1) {
                            for (std::size_t ox = 0; ox < Wo; ++ox) {
                                wacc += gyrow[ox] * xrow[ox];
                                gxrow[ox] += wv * gyrow[ox];
                            }
                        } else {
                            for (std::size_t ox = 0; ox < Wo; ++ox) {
                                wacc += gyrow[ox] * xrow[ox * stride];
                                gxrow[ox * stride] += wv * gyrow[ox];
                            }
                        }
                    }
                    gwc[ky * kW + kx] += wacc;
                }
        }
    }

    if (pad == 0) return gxp;
    TensorT<S> gx({Cin, H, W});
    for (std::size_t c = 0; c < Cin; ++c)
        for (std::size_t y = 0; y < H; ++y) {
            const S* src = gxp.ptr() + (c * Hp + y + pad) * Wp + pad;
            std::copy(src, src + W, gx.ptr() + (c * H + y) * W);
        }
    return gx;
}

// ---------------------------------------------------------------------------
// conv3d
// ---------------------------------------------------------------------------

template <typename S>
TensorT<S> pad3d(const TensorT<S>& x, std::size_t pad) {
    if (pad == 0) return x;
    const std::size_t C = x.shape[0], D = x.shape[1], H = x.shape[2], W = x.shape[3];
    TensorT<S> out({C, D + 2 * pad, H + 2 * pad, W + 2 * pad});
    const std::size_t Dp = out.shape[1], Hp = out.shape[2], Wp = out.shape[3];
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t z = 0; z < D; ++z)
            for (std::size_t y = 0; y < H; ++y) {
                const S* src = x.ptr() + ((c * D + z) * H + y) * W;
                S* dst = out.ptr() + ((c * Dp + z + pad) * Hp + y + pad) * Wp + pad;
                std::copy(src, src + W, dst);
            }
    return out;
}

template <typename S>
TensorT<S> conv3d_forward(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& b,
                          std::size_t stride, std::size_t pad) {
    require(x.rank() == 4, "conv3d: input must be [Cin,D,H,W], got " + shape_str(x.shape));
    require(w.rank() == 5, "conv3d: weights must be [Cout,Cin,kD,kH,kW]");
    const std::size_t Cin = x.shape[0], D = x.shape[1], H = x.shape[2], W = x.shape[3];
    const std::size_t Cout = w.shape[0], kD = w.shape[2], kH = w.shape[3], kW = w.shape[4];
    require(w.shape[1] == Cin, "conv3d: weight Cin mismatch");
    require(b.shape == Shape{Cout}, "conv3d: bias must be [Cout]");
    require(stride >= 1, "conv3d: stride must be >= 1");
    const std::size_t Do = conv_out_extent(D, kD, stride, pad);
    const std::size_t Ho = conv_out_extent(H, kH, stride, pad);
    const std::size_t Wo = conv_out_extent(W, kW, stride, pad);

    const TensorT<S> xp = pad3d(x, pad);
    const std::size_t Dp = xp.shape[1], Hp = xp.shape[2], Wp = xp.shape[3];

    TensorT<S> y({Cout, Do, Ho, Wo});
    for (std::size_t co = 0; co < Cout; ++co) {
        S* ybase = y.ptr() + co * Do * Ho * Wo;
        std::fill(ybase, ybase + Do * Ho * Wo, b[co]);
        for (std::size_t ci = 0; ci < Cin; ++ci) {
            const S* xc = xp.ptr() + ci * Dp * Hp * Wp;
            const S* wc = w.ptr() + (co * Cin + ci) * kD * kH * kW;
            for (std::size_t kz = 0; kz < kD; ++kz)
                for (std::size_t ky = 0; ky < kH; ++ky)
                    for (std::size_t kx = 0; kx < kW; ++kx) {
                        const S wv = wc[(kz * kH + ky) * kW + kx];
                        for (std::size_t oz = 0; oz < Do; ++oz)
                            for (std::size_t oy = 0; oy < Ho; ++oy) {
                                const S* xrow =
                                    xc + ((oz * stride + kz) * Hp + oy * stride + ky) * Wp + kx;
                                S* yrow = ybase + (oz * Ho + oy) * Wo;
                                if (stride == 1) {
                                    for (std::size_t ox = 0; ox < Wo; ++ox)
                                        yrow[ox] += wv * xrow[ox];
                                } else {
                                    for (std::size_t ox = 0; ox < Wo; ++ox)
                                        yrow[ox] += wv * xrow[ox * stride];
                                }
                            }
                    }
        }
    }
    return y;
}

template <typename S>
TensorT<S> conv3d_backward(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& gy,
                           std::size_t stride, std::size_t pad, TensorT<S>& gw, TensorT<S>& gb) {
    const std::size_t Cin = x.shape[0], D = x.shape[1], H = x.shape[2], W = x.shape[3];
    const std::size_t Cout = w.shape[0], kD = w.shape[2], kH = w.shape[3], kW = w.shape[4];
    const std::size_t Do = gy.shape[1], Ho = gy.shape[2], Wo = gy.shape[3];
    require(gw.shape == w.shape && gb.shape == Shape{Cout}, "conv3d_backward: grad shapes");

    const TensorT<S> xp = pad3d(x, pad);
    const std::size_t Dp = xp.shape[1], Hp = xp.shape[2], Wp = xp.shape[3];
    TensorT<S> gxp({Cin, Dp, Hp, Wp});

    for (std::size_t co = 0; co < Cout; ++co) {
        const S* gyc = gy.ptr() + co * Do * Ho * Wo;
        double bsum = 0;
        for (std::size_t i = 0; i < Do * Ho * Wo; ++i) bsum += double(gyc[i]);
        gb[co] += S(bsum);
        for (std::size_t ci = 0; ci < Cin; ++ci) {
            const S* xc = xp.ptr() + ci * Dp * Hp * Wp;
            S* gxc = gxp.ptr() + ci * Dp * Hp * Wp;
            S* gwc = gw.ptr() + (co * Cin + ci) * kD * kH * kW;
            const S* wc = w.ptr() + (co * Cin + ci) * kD * kH * kW;
            for (std::size_t kz = 0; kz < kD; ++kz)
                for (std::size_t ky = 0; ky < kH; ++ky)
                    for (std::size_t kx = 0; kx < kW; ++kx) {
                        const S wv = wc[(kz * kH + ky) * kW + kx];
                        S wacc = 0;
                        for (std::size_t oz = 0; oz < Do; ++oz)
                            for (std::size_t oy = 0; oy < Ho; ++oy) {
                                const std::size_t row =
                                    ((oz * stride + kz) * Hp + oy * stride + ky) * Wp + kx;
                                const S* xrow = xc + row;
                                S* gxrow = gxc + row;
                                const S* gyrow = gyc + (oz * Ho + oy) * Wo;
                                if (stride == 1) {
                                    for (std::size_t ox = 0; ox < Wo; ++ox) {
                                        wacc += gyrow[ox] * xrow[ox];
                                        gxrow[ox] += wv * gyrow[ox];
                                    }
                                } else {
                                    for (std::size_t ox = 0; ox < Wo; ++ox) {
                                        wacc += gyrow[ox] * xrow[ox * stride];
                                        gxrow[ox * stride] += wv * gyrow[ox];
                                    }
                                }
                            }
                        gwc[(kz * kH + ky) * kW + kx] += wacc;
                    }
        }
    }

    if (pad == 0) return gxp;
    TensorT<S> gx({Cin, D, H, W});
    for (std::size_t c = 0; c < Cin; ++c)
        for (std::size_t z = 0; z < D; ++z)
            for (std::size_t y = 0; y < H; ++y) {
                const S* src = gxp.ptr() + ((c * Dp + z + pad) * Hp + y + pad) * Wp + pad;
                std::copy(src, src + W, gx.ptr() + ((c * D + z) * H + y) * W);
            }
    return gx;
}

// ---------------------------------------------------------------------------
// max pooling (2d/3d), trailing remainder dropped
// ---------------------------------------------------------------------------

template <typename S>
struct PoolResult {
    TensorT<S> y;
    std::vector<std::size_t> argmax;  // flat input index per output cell
};

template <typename S>
PoolResult<S> max_pool(const TensorT<S>& x, std::size_t window, std::size_t stride,
                       std::size_t dims) {
    require(dims == 2 || dims == 3, "max_pool: dims must be 2 or 3");
    require(window >= 1 && stride >= 1, "max_pool: window and stride must be >= 1");
    require(x.rank() == dims + 1, "max_pool: input rank must be channels + spatial dims");
    for (std::size_t d = 1; d <= dims; ++d)
        require(x.shape[d] >= window, "max_pool: window " + std::to_string(window) +
                                          " exceeds extent " + std::to_string(x.shape[d]));

    const std::size_t C = x.shape[0];
    if (dims == 2) {
        const std::size_t H = x.shape[1], W = x.shape[2];
        const std::size_t Ho = (H - window) / stride + 1, Wo = (W - window) / stride + 1;
        PoolResult<S> r{TensorT<S>({C, Ho, Wo}), std::vector<std::size_t>(C * Ho * Wo)};
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t oy = 0; oy < Ho; ++oy)
                for (std::size_t ox = 0; ox < Wo; ++ox) {
                    std::size_t best = (c * H + oy * stride) * W + ox * stride;
                    S bv = x[best];
                    for (std::size_t wy = 0; wy < window; ++wy)
                        for (std::size_t wx = 0; wx < window; ++wx) {
                            const std::size_t idx =
                                (c * H + oy * stride + wy) * W + ox * stride + wx;
                            if (x[idx] > bv) {
                                bv = x[idx];
                                best = idx;
                            }
                        }
                    const std::size_t o = (c * Ho + oy) * Wo + ox;
                    r.y[o] = bv;
                    r.argmax[o] = best;
                }
        return r;
    }
    const std::size_t D = x.shape[1], H = x.shape[2], W = x.shape[3];
    const std::size_t Do = (D - window) / stride + 1;
    const std::size_t Ho = (H - window) / stride + 1, Wo = (W - window) / stride + 1;
    PoolResult<S> r{TensorT<S>({C, Do, Ho, Wo}), std::vector<std::size_t>(C * Do * Ho * Wo)};
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t oz = 0; oz < Do; ++oz)
            for (std::size_t oy = 0; oy < Ho; ++oy)
                for (std::size_t ox = 0; ox < Wo; ++ox) {
                    std::size_t best =
                        ((c * D + oz * stride) * H + oy * stride) * W + ox * stride;
                    S bv = x[best];
                    for (std::size_t wz = 0; wz < window; ++wz)
                        for (std::size_t wy = 0; wy < window; ++wy)
                            for (std::size_t wx = 0; wx < window; ++wx) {
                                const std::size_t idx =
                                    ((c * D + oz * stride + wz) * H + oy * stride + wy) * W +
                                    ox * stride + wx;
                                if (x[idx] > bv) {
                                    bv = x[idx];
                                    best = idx;
                                }
                            }
                    const std::size_t o = ((c * Do + oz) * Ho + oy) * Wo + ox;
                    r.y[o] = bv;
                    r.argmax[o] = best;
                }
    return r;
}

template <typename S>
TensorT<S> max_pool_backward(const Shape& in_shape, const PoolResult<S>& fwd,
                             const TensorT<S>& gy) {
    TensorT<S> gx(in_shape);
    require(gy.numel() == fwd.argmax.size(), "max_pool_backward: gradient size mismatch");
    for (std::size_t i = 0; i < gy.numel(); ++i) gx[fwd.argmax[i]] += gy[i];
    return gx;
}

// ---------------------------------------------------------------------------
// nearest-neighbor upsampling (2d)
// ---------------------------------------------------------------------------

template <typename S>
TensorT<S> upsample_nn(const TensorT<S>& x, std::size_t factor) {
    require(factor >= 1, "upsample_nn: factor must be >= 1");
    require(x.rank() == 3, "upsample_nn: input must be [C,H,W]");
    const std::size_t C = x.shape[0], H = x.shape[1], W = x.shape[2];
    TensorT<S> y({C, H * factor, W * factor});
    const std::size_t Wo = W * factor;
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t oy = 0; oy < H * factor; ++oy) {
            const S* xrow = x.ptr() + (c * H + oy / factor) * W;
            S* yrow = y.ptr() + (c * H * factor + oy) * Wo;
            for (std::size_t ox = 0; ox < Wo; ++ox) yrow[ox] = xrow[ox / factor];
        }
    return y;
}

template <typename S>
TensorT<S> upsample_nn_backward(const Shape& in_shape, std::size_t factor, const TensorT<S>& gy) {
    const std::size_t C = in_shape[0], H = in_shape[1], W = in_shape[2];
    TensorT<S> gx(in_shape);
    const std::size_t Wo = W * factor;
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t oy = 0; oy < H * factor; ++oy) {
            const S* gyrow = gy.ptr() + (c * H * factor + oy) * Wo;
            S* gxrow = gx.ptr() + (c * H + oy / factor) * W;
            for (std::size_t ox = 0; ox < Wo; ++ox) gxrow[ox / factor] += gyrow[ox];
        }
    return gx;
}

// ---------------------------------------------------------------------------
// dropout (inverted: masks carry the 1/(1-p) scale so eval is the identity)
// ---------------------------------------------------------------------------

enum class DropMode { Train, Mc, Eval };

template <typename S>
struct DropoutResult {
    TensorT<S> y;
    TensorT<S> mask;  // per-element multiplier: 0 or 1/(1-p); all ones in eval
};

template <typename S>
DropoutResult<S> dropout(const TensorT<S>& x, double p, Rng& rng, DropMode mode) {
    require(p >= 0.0 && p < 1.0, "dropout: p must be in [0,1), got " + std::to_string(p));
    DropoutResult<S> r{x, TensorT<S>(x.shape, S(1))};
    if (mode == DropMode::Eval || p == 0.0) return r;
    const S scale = S(1.0 / (1.0 - p));
    for (std::size_t i = 0; i < x.numel(); ++i) {
        if (rng.uniform() < p) {
            r.y[i] = 0;
            r.mask[i] = 0;
        } else {
            r.y[i] = x[i] * scale;
            r.mask[i] = scale;
        }
    }
    return r;
}

template <typename S>
TensorT<S> dropout_backward(const TensorT<S>& mask, const TensorT<S>& gy) {
    TensorT<S> gx(gy.shape);
    for (std::size_t i = 0; i < gy.numel(); ++i) gx[i] = gy[i] * mask[i];
    return gx;
}

// ---------------------------------------------------------------------------
// dense
// ---------------------------------------------------------------------------

template <typename S>
TensorT<S> dense_forward(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& b) {
    require(x.rank() == 1 && w.rank() == 2, "dense: x must be [n], w must be [m,n]");
    const std::size_t n = x.shape[0], m = w.shape[0];
    require(w.shape[1] == n, "dense: weight columns " + std::to_string(w.shape[1]) +
                                 " != input size " + std::to_string(n));
    require(b.shape == Shape{m}, "dense: bias must be [m]");
    TensorT<S> y({m});
    for (std::size_t i = 0; i < m; ++i) {
        const S* row = w.ptr() + i * n;
        S acc = b[i];
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

template <typename S>
TensorT<S> dense_backward(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& gy,
                          TensorT<S>& gw, TensorT<S>& gb) {
    const std::size_t n = x.shape[0], m = w.shape[0];
    TensorT<S> gx({n});
    for (std::size_t i = 0; i < m; ++i) {
        gb[i] += gy[i];
        const S* row = w.ptr() + i * n;
        S* groww = gw.ptr() + i * n;
        const S g = gy[i];
        for (std::size_t j = 0; j < n; ++j) {
            groww[j] += g * x[j];
            gx[j] += g * row[j];
        }
    }
    return gx;
}

// ---------------------------------------------------------------------------
// activations
// ---------------------------------------------------------------------------

template <typename S>
TensorT<S> relu(const TensorT<S>& x) {
    TensorT<S> y(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) y[i] = x[i] > S(0) ? x[i] : S(0);
    return y;
}

template <typename S>
TensorT<S> relu_backward(const TensorT<S>& x, const TensorT<S>& gy) {
    TensorT<S> gx(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) gx[i] = x[i] > S(0) ? gy[i] : S(0);
    return gx;
}

inline double sigmoid_scalar(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

template <typename S>
TensorT<S> sigmoid(const TensorT<S>& z) {
    TensorT<S> y(z.shape);
    for (std::size_t i = 0; i < z.numel(); ++i) y[i] = S(sigmoid_scalar(double(z[i])));
    return y;
}

// ---------------------------------------------------------------------------
// weighted sigmoid + binary cross entropy
// ---------------------------------------------------------------------------

template <typename S>
struct LossResult {
    double loss;
    TensorT<S> grad;  // dLoss/dLogits
};

// loss = sum_i w_i * [-y_i log p_i - (1-y_i) log(1-p_i)] / sum_i w_i with
// p = sigmoid(z); each log argument is clamped below at eps = 1e-7.
// Gradient element: w_i * (p_i - y_i) / sum_w.
template <typename S>
LossResult<S> sigmoid_bce_loss(const TensorT<S>& logits, const TensorT<S>& targets,
                               const TensorT<S>& weights) {
    require(same_shape(logits, targets) && same_shape(logits, weights),
            "sigmoid_bce_loss: logits/targets/weights shapes must match");
    constexpr double eps = 1e-7;
    double wsum = 0;
    for (std::size_t i = 0; i < weights.numel(); ++i) {
        require(double(weights[i]) >= 0.0, "sigmoid_bce_loss: negative weight");
        const double t = double(targets[i]);
        require(t == 0.0 || t == 1.0, "sigmoid_bce_loss: targets must be 0 or 1");
        wsum += double(weights[i]);
    }
    require(wsum > 0.0, "sigmoid_bce_loss: all weights are zero");

    LossResult<S> r{0.0, TensorT<S>(logits.shape)};
    double loss = 0;
    for (std::size_t i = 0; i < logits.numel(); ++i) {
        const double p = sigmoid_scalar(double(logits[i]));
        const double t = double(targets[i]);
        const double wi = double(weights[i]);
        loss += wi * (-t * std::log(std::max(p, eps)) -
                      (1.0 - t) * std::log(std::max(1.0 - p, eps)));
        r.grad[i] = S(wi * (p - t) / wsum);
    }
    r.loss = loss / wsum;
    return r;
}

// ---------------------------------------------------------------------------
// channel concat / split (U-Net skip connections)
// ---------------------------------------------------------------------------

template <typename S>
TensorT<S> concat_channels(const TensorT<S>& a, const TensorT<S>& b) {
    require(a.rank() == b.rank() && a.rank() >= 2, "concat_channels: rank mismatch");
    for (std::size_t d = 1; d < a.rank(); ++d)
        require(a.shape[d] == b.shape[d], "concat_channels: spatial extents differ");
    Shape sh = a.shape;
    sh[0] += b.shape[0];
    TensorT<S> out(sh);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.numel());
    return out;
}

template <typename S>
std::pair<TensorT<S>, TensorT<S>> split_channels(const TensorT<S>& x, std::size_t c0) {
    Shape sa = x.shape, sb = x.shape;
    sa[0] = c0;
    sb[0] = x.shape[0] - c0;
    TensorT<S> a(sa), b(sb);
    std::copy(x.data.begin(), x.data.begin() + a.numel(), a.data.begin());
    std::copy(x.data.begin() + a.numel(), x.data.end(), b.data.begin());
    return {std::move(a), std::move(b)};
}

}  // namespace ucascade::nn
