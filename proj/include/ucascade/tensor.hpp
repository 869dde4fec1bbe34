#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ucascade/common.hpp"

namespace ucascade {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_numel(const Shape& s) {
    std::size_t n = 1;
    for (std::size_t e : s) n *= e;
    return n;
}

inline std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "]";
    return os.str();
}

// Dense row-major N-d array. Training uses TensorT<float>; gradient checks
// instantiate the same code with double.
template <typename S>
struct TensorT {
    Shape shape;
    std::vector<S> data;

    TensorT() = default;
    explicit TensorT(Shape sh) : shape(std::move(sh)), data(shape_numel(shape), S(0)) {}
    TensorT(Shape sh, S fill) : shape(std::move(sh)), data(shape_numel(shape), fill) {}
    TensorT(Shape sh, std::vector<S> values) : shape(std::move(sh)), data(std::move(values)) {
        require(data.size() == shape_numel(shape),
                "tensor data size " + std::to_string(data.size()) +
                    " does not match shape " + shape_str(shape));
    }

    std::size_t numel() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }

    S* ptr() { return data.data(); }
    const S* ptr() const { return data.data(); }

    S& operator[](std::size_t i) { return data[i]; }
    const S& operator[](std::size_t i) const { return data[i]; }

    S& at(std::initializer_list<std::size_t> idx) { return data[flat(idx)]; }
    const S& at(std::initializer_list<std::size_t> idx) const { return data[flat(idx)]; }

    std::size_t flat(std::initializer_list<std::size_t> idx) const {
        std::size_t off = 0;
        std::size_t d = 0;
        for (std::size_t i : idx) off = off * shape[d++] + i;
        return off;
    }

    void fill(S v) { std::fill(data.begin(), data.end(), v); }

    bool all_finite() const {
        for (S v : data)
            if (!std::isfinite(double(v))) return false;
        return true;
    }

    // External inputs are validated at the boundary; internal math trusts itself.
    void check_finite(const std::string& what) const {
        if (!all_finite()) throw NumericalError("non-finite values in " + what);
    }

    template <typename T>
    TensorT<T> cast() const {
        TensorT<T> out(shape);
        for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = T(data[i]);
        return out;
    }
};

using Tensor = TensorT<float>;
using DTensor = TensorT<double>;

template <typename S>
bool same_shape(const TensorT<S>& a, const TensorT<S>& b) {
    return a.shape == b.shape;
}

template <typename S>
void require_shape(const TensorT<S>& t, const Shape& want, const std::string& what) {
    require(t.shape == want, what + ": expected shape " + shape_str(want) +
                                 ", got " + shape_str(t.shape));
}

}  // namespace ucascade
