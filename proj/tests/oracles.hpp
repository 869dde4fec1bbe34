#pragma once

// Brute-force reference implementations used only by tests. Each one takes
// the most literal route available (nested loops, exhaustive enumeration,
// flood fill) and stays independent of the code under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "ucascade/tensor.hpp"

namespace oracle {

using ucascade::DTensor;
using ucascade::Shape;
using ucascade::TensorT;

// 6-nested-loop direct 2d convolution (cross-correlation, zero padding)
template <typename S>
TensorT<S> conv2d(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& b,
                  std::size_t stride, std::size_t pad) {
    const std::size_t Cin = x.shape[0], H = x.shape[1], W = x.shape[2];
    const std::size_t Cout = w.shape[0], kH = w.shape[2], kW = w.shape[3];
    const std::size_t Ho = (H + 2 * pad - kH) / stride + 1;
    const std::size_t Wo = (W + 2 * pad - kW) / stride + 1;
    TensorT<S> y({Cout, Ho, Wo});
    for (std::size_t co = 0; co < Cout; ++co)
        for (std::size_t oy = 0; oy < Ho; ++oy)
            for (std::size_t ox = 0; ox < Wo; ++ox) {
                double acc = double(b[co]);
                for (std::size_t ci = 0; ci < Cin; ++ci)
                    for (std::size_t ky = 0; ky < kH; ++ky)
                        for (std::size_t kx = 0; kx < kW; ++kx) {
                            const std::ptrdiff_t iy =
                                std::ptrdiff_t(oy * stride + ky) - std::ptrdiff_t(pad);
                            const std::ptrdiff_t ix =
                                std::ptrdiff_t(ox * stride + kx) - std::ptrdiff_t(pad);
                            if (iy < 0 || ix < 0 || iy >= std::ptrdiff_t(H) ||
                                ix >= std::ptrdiff_t(W))
                                continue;
                            acc += double(w.at({co, ci, ky, kx})) *
                                   double(x.at({ci, std::size_t(iy), std::size_t(ix)}));
                        }
                y.at({co, oy, ox}) = S(acc);
            }
    return y;
}

// 8-nested-loop direct 3d convolution
template <typename S>
TensorT<S> conv3d(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& b,
                  std::size_t stride, std::size_t pad) {
    const std::size_t Cin = x.shape[0], D = x.shape[1], H = x.shape[2], W = x.shape[3];
    const std::size_t Cout = w.shape[0], kD = w.shape[2], kH = w.shape[3], kW = w.shape[4];
    const std::size_t Do = (D + 2 * pad - kD) / stride + 1;
    const std::size_t Ho = (H + 2 * pad - kH) / stride + 1;
    const std::size_t Wo = (W + 2 * pad - kW) / stride + 1;
    TensorT<S> y({Cout, Do, Ho, Wo});
    for (std::size_t co = 0; co < Cout; ++co)
        for (std::size_t oz = 0; oz < Do; ++oz)
            for (std::size_t oy = 0; oy < Ho; ++oy)
                for (std::size_t ox = 0; ox < Wo; ++ox) {
                    double acc = double(b[co]);
                    for (std::size_t ci = 0; ci < Cin; ++ci)
                        for (std::size_t kz = 0; kz < kD; ++kz)
                            for (std::size_t ky = 0; ky < kH; ++ky)
                                for (std::size_t kx = 0; kx < kW; ++kx) {
                                    const std::ptrdiff_t iz =
                                        std::ptrdiff_t(oz * stride + kz) - std::ptrdiff_t(pad);
                                    const std::ptrdiff_t iy =
                                        std::ptrdiff_t(oy * stride + ky) - std::ptrdiff_t(pad);
                                    const std::ptrdiff_t ix =
                                        std::ptrdiff_t(ox * stride + kx) - std::ptrdiff_t(pad);
                                    if (iz < 0 || iy < 0 || ix < 0 || iz >= std::ptrdiff_t(D) ||
                                        iy >= std::ptrdiff_t(H) || ix >= std::ptrdiff_t(W))
                                        continue;
                                    acc += double(w.at({co, ci, std::size_t(kz), std::size_t(ky),
                                                        std::size_t(kx)})) *
                                           double(x.at({ci, std::size_t(iz), std::size_t(iy),
                                                        std::size_t(ix)}));
                                }
                    y.at({co, oz, oy, ox}) = S(acc);
                }
    return y;
}

// window-scan 2d max pool
template <typename S>
TensorT<S> max_pool2d(const TensorT<S>& x, std::size_t window, std::size_t stride) {
    const std::size_t C = x.shape[0], H = x.shape[1], W = x.shape[2];
    const std::size_t Ho = (H - window) / stride + 1, Wo = (W - window) / stride + 1;
    TensorT<S> y({C, Ho, Wo});
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t oy = 0; oy < Ho; ++oy)
            for (std::size_t ox = 0; ox < Wo; ++ox) {
                S best = x.at({c, oy * stride, ox * stride});
                for (std::size_t wy = 0; wy < window; ++wy)
                    for (std::size_t wx = 0; wx < window; ++wx)
                        best = std::max(best, x.at({c, oy * stride + wy, ox * stride + wx}));
                y.at({c, oy, ox}) = best;
            }
    return y;
}

template <typename S>
TensorT<S> max_pool3d(const TensorT<S>& x, std::size_t window, std::size_t stride) {
    const std::size_t C = x.shape[0], D = x.shape[1], H = x.shape[2], W = x.shape[3];
    const std::size_t Do = (D - window) / stride + 1;
    const std::size_t Ho = (H - window) / stride + 1, Wo = (W - window) / stride + 1;
    TensorT<S> y({C, Do, Ho, Wo});
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t oz = 0; oz < Do; ++oz)
            for (std::size_t oy = 0; oy < Ho; ++oy)
                for (std::size_t ox = 0; ox < Wo; ++ox) {
                    S best = x.at({c, oz * stride, oy * stride, ox * stride});
                    for (std::size_t wz = 0; wz < window; ++wz)
                        for (std::size_t wy = 0; wy < window; ++wy)
                            for (std::size_t wx = 0; wx < window; ++wx)
                                best = std::max(best, x.at({c, oz * stride + wz, oy * stride + wy,
                                                            ox * stride + wx}));
                    y.at({c, oz, oy, ox}) = best;
                }
    return y;
}

// naive dot-product dense layer
template <typename S>
TensorT<S> dense(const TensorT<S>& x, const TensorT<S>& w, const TensorT<S>& b) {
    const std::size_t n = x.shape[0], m = w.shape[0];
    TensorT<S> y({m});
    for (std::size_t i = 0; i < m; ++i) {
        double acc = double(b[i]);
        for (std::size_t j = 0; j < n; ++j) acc += double(w.at({i, j})) * double(x[j]);
        y[i] = S(acc);
    }
    return y;
}

// plain two-pass mean / population std over the leading axis
template <typename S>
void stack_stats(const TensorT<S>& stack, std::vector<double>& mean, std::vector<double>& std) {
    const std::size_t T = stack.shape[0];
    const std::size_t n = stack.numel() / T;
    mean.assign(n, 0.0);
    std.assign(n, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < n; ++i) mean[i] += double(stack[t * n + i]);
    for (std::size_t i = 0; i < n; ++i) mean[i] /= double(T);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < n; ++i) {
            const double d = double(stack[t * n + i]) - mean[i];
            std[i] += d * d;
        }
    for (std::size_t i = 0; i < n; ++i) std[i] = std::sqrt(std[i] / double(T));
}

// O(P*N) pair-counting ROC AUC: (concordant + 0.5 * ties) / (P * N)
inline double roc_auc_pairs(const std::vector<double>& scores, const std::vector<int>& labels) {
    double concordant = 0, ties = 0;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        ++pos;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j])
                concordant += 1;
            else if (scores[i] == scores[j])
                ties += 1;
        }
    }
    for (int l : labels) neg += (l == 0);
    return (concordant + 0.5 * ties) / (double(pos) * double(neg));
}

// exhaustive threshold-enumeration average precision
inline double average_precision(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<double> distinct = scores;
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::size_t total_pos = 0;
    for (int l : labels) total_pos += (l == 1);
    double ap = 0, prev_recall = 0;
    for (double thr : distinct) {
        std::size_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= thr) (labels[i] == 1 ? tp : fp) += 1;
        }
        const double recall = double(tp) / double(total_pos);
        const double precision = double(tp) / double(tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    return ap;
}

// fractional ranks by pairwise counting (ties get the average rank)
inline std::vector<double> ranks_counting(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            less += (v[j] < v[i]);
            equal += (v[j] == v[i]);
        }
        r[i] = double(less) + 0.5 * double(equal - 1) + 1.0;
    }
    return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = double(a.size());
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        sab += a[i] * b[i];
        saa += a[i] * a[i];
        sbb += b[i] * b[i];
    }
    return (n * sab - sa * sb) / std::sqrt((n * saa - sa * sa) * (n * sbb - sb * sb));
}

inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks_counting(x), ranks_counting(y));
}

// exact two-sided permutation p-value by full enumeration (n <= 8)
inline double spearman_perm_p(const std::vector<double>& x, const std::vector<double>& y) {
    const double observed = std::abs(spearman_rho(x, y));
    std::vector<std::size_t> idx(y.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::size_t hits = 0, total = 0;
    do {
        std::vector<double> yp(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) yp[i] = y[idx[i]];
        if (std::abs(spearman_rho(x, yp)) >= observed - 1e-12) ++hits;
        ++total;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return double(hits) / double(total);
}

// brute-force 26-connected components via BFS flood fill; returns label volume
// (0 = background, components numbered from 1) and voxel counts per component
inline std::vector<int> flood_fill_components(const std::vector<int>& bin, std::size_t D,
                                              std::size_t H, std::size_t W,
                                              std::vector<std::size_t>* counts = nullptr) {
    std::vector<int> label(bin.size(), 0);
    int next = 0;
    if (counts) counts->clear();
    for (std::size_t start = 0; start < bin.size(); ++start) {
        if (!bin[start] || label[start]) continue;
        ++next;
        std::size_t count = 0;
        std::queue<std::size_t> q;
        q.push(start);
        label[start] = next;
        while (!q.empty()) {
            const std::size_t cur = q.front();
            q.pop();
            ++count;
            const std::ptrdiff_t z = std::ptrdiff_t(cur / (H * W));
            const std::ptrdiff_t y = std::ptrdiff_t((cur / W) % H);
            const std::ptrdiff_t x = std::ptrdiff_t(cur % W);
            for (std::ptrdiff_t dz = -1; dz <= 1; ++dz)
                for (std::ptrdiff_t dy = -1; dy <= 1; ++dy)
                    for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                        if (!dz && !dy && !dx) continue;
                        const std::ptrdiff_t nz = z + dz, ny = y + dy, nx = x + dx;
                        if (nz < 0 || ny < 0 || nx < 0 || nz >= std::ptrdiff_t(D) ||
                            ny >= std::ptrdiff_t(H) || nx >= std::ptrdiff_t(W))
                            continue;
                        const std::size_t ni = (std::size_t(nz) * H + std::size_t(ny)) * W +
                                               std::size_t(nx);
                        if (bin[ni] && !label[ni]) {
                            label[ni] = next;
                            q.push(ni);
                        }
                    }
        }
        if (counts) counts->push_back(count);
    }
    return label;
}

}  // namespace oracle
