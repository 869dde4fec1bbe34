#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ucascade/optim.hpp"
#include "ucascade/tensor.hpp"

namespace ucascade::nn {

// rel err = |ga - gn| / max(1e-8, |ga| + |gn|), maximized over coordinates
inline double gradcheck_rel_err(double analytic, double numeric) {
    return std::abs(analytic - numeric) /
           std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

// Central-difference check of dLoss/dx. `f` evaluates the scalar loss at x;
// `analytic` is the backward pass result. Double precision only.
inline double grad_check_input(const std::function<double(const DTensor&)>& f, DTensor x,
                               const DTensor& analytic, double eps = 1e-5) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double x0 = x[i];
        x[i] = x0 + eps;
        const double lp = f(x);
        x[i] = x0 - eps;
        const double lm = f(x);
        x[i] = x0;
        const double numeric = (lp - lm) / (2.0 * eps);
        worst = std::max(worst, gradcheck_rel_err(analytic[i], numeric));
    }
    return worst;
}

// Central-difference check of dLoss/dtheta for every parameter coordinate.
// `loss_fn` evaluates the loss at the current parameter values; `grads` holds
// the analytic gradients from one backward pass at the unperturbed point.
inline double grad_check_params(const std::function<double()>& loss_fn,
                                const std::vector<ParamRef<double>>& params,
                                const std::vector<DTensor>& grads, double eps = 1e-5) {
    double worst = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        DTensor& w = *params[pi].value;
        for (std::size_t i = 0; i < w.numel(); ++i) {
            const double w0 = w[i];
            w[i] = w0 + eps;
            const double lp = loss_fn();
            w[i] = w0 - eps;
            const double lm = loss_fn();
            w[i] = w0;
            const double numeric = (lp - lm) / (2.0 * eps);
            worst = std::max(worst, gradcheck_rel_err(grads[pi][i], numeric));
        }
    }
    return worst;
}

}  // namespace ucascade::nn
