#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ucascade/tensor.hpp"

namespace ucascade::nn {

// A named parameter tensor with its gradient accumulator. Models hand these
// out; the optimizer and checkpoint code never see model internals.
template <typename S>
struct ParamRef {
    std::string name;
    TensorT<S>* value;
    TensorT<S>* grad;
};

enum class OptKind { Sgd, Adam };

template <typename S>
struct OptimState {
    OptKind kind = OptKind::Adam;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::size_t step = 0;
    std::vector<TensorT<S>> m;  // Adam first moments, one per parameter
    std::vector<TensorT<S>> v;  // Adam second moments

    static OptimState sgd(double lr) {
        OptimState st;
        st.kind = OptKind::Sgd;
        st.lr = lr;
        return st;
    }
    static OptimState adam(double lr) {
        OptimState st;
        st.kind = OptKind::Adam;
        st.lr = lr;
        return st;
    }
};

// One update over all parameters. Gradients must be finite; training aborts
// loudly otherwise. Gradients are left untouched (callers zero them per step).
template <typename S>
void optimizer_step(std::vector<ParamRef<S>>& params, OptimState<S>& state) {
    require(state.lr > 0.0, "optimizer_step: learning rate must be positive");
    if (state.kind == OptKind::Adam && state.m.empty()) {
        for (auto& p : params) {
            state.m.emplace_back(p.value->shape);
            state.v.emplace_back(p.value->shape);
        }
    }
    if (state.kind == OptKind::Adam)
        require(state.m.size() == params.size(), "optimizer_step: moment buffer count mismatch");

    state.step += 1;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        TensorT<S>& w = *params[pi].value;
        const TensorT<S>& g = *params[pi].grad;
        require(same_shape(w, g), "optimizer_step: gradient shape mismatch for " +
                                      params[pi].name);
        for (std::size_t i = 0; i < g.numel(); ++i)
            if (!std::isfinite(double(g[i])))
                throw NumericalError("non-finite gradient in " + params[pi].name);

        if (state.kind == OptKind::Sgd) {
            for (std::size_t i = 0; i < w.numel(); ++i) w[i] -= S(state.lr) * g[i];
        } else {
            TensorT<S>& m = state.m[pi];
            TensorT<S>& v = state.v[pi];
            require(same_shape(w, m), "optimizer_step: stale moment buffers for " +
                                          params[pi].name);
            const double b1 = state.beta1, b2 = state.beta2;
            const double bc1 = 1.0 - std::pow(b1, double(state.step));
            const double bc2 = 1.0 - std::pow(b2, double(state.step));
            for (std::size_t i = 0; i < w.numel(); ++i) {
                const double gi = double(g[i]);
                const double mi = b1 * double(m[i]) + (1.0 - b1) * gi;
                const double vi = b2 * double(v[i]) + (1.0 - b2) * gi * gi;
                m[i] = S(mi);
                v[i] = S(vi);
                w[i] -= S(state.lr * (mi / bc1) / (std::sqrt(vi / bc2) + state.eps));
            }
        }
    }
}

}  // namespace ucascade::nn
