#pragma once

#include <cmath>
#include <vector>

#include "emotrend/errors.hpp"

namespace emotrend {

// Row-major dense array, up to 3 axes.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> values;

    static Tensor zeros(std::vector<int> shape) {
        Tensor t;
        t.shape = std::move(shape);
        if (t.shape.size() > 3) throw ConfigError("tensors support at most 3 axes");
        std::size_t n = 1;
        for (const int s : t.shape) {
            if (s <= 0) throw ConfigError("tensor axes must be positive");
            n *= static_cast<std::size_t>(s);
        }
        t.values.assign(n, 0.0);
        return t;
    }

    int size() const { return static_cast<int>(values.size()); }

    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * shape[1] + c];
    }
    double& at(int r, int c) {
        return values[static_cast<std::size_t>(r) * shape[1] + c];
    }

    bool all_finite() const {
        for (const double v : values) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

}  // namespace emotrend
