#pragma once

// Shared discrete-Laplacian helpers used by the sharpness expert and the
// objective-as-loss surrogate.

#include <cstddef>
#include <vector>

#include "lossagent/kernels.hpp"

namespace lossagent::detail {

// 4-neighbour Laplacian response on interior pixels; returns an
// (h-2) x (w-2) buffer, empty when there is no interior.
inline std::vector<double> laplacian_interior(const double* img, int h, int w) {
    if (h < 3 || w < 3) return {};
    std::vector<double> out(static_cast<std::size_t>(h - 2) * (w - 2));
    for (int i = 1; i + 1 < h; ++i) {
        for (int j = 1; j + 1 < w; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * w + j;
            out[static_cast<std::size_t>(i - 1) * (w - 2) + (j - 1)] =
                img[idx - w] + img[idx + w] + img[idx - 1] + img[idx + 1] - 4.0 * img[idx];
        }
    }
    return out;
}

// Population variance; 0 for empty or single-element buffers.
inline double variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double n = static_cast<double>(v.size());
    const double mean = kernels::reduce_sum(v.data(), v.size()) / n;
    return kernels::reduce_sq(v.data(), v.size()) / n - mean * mean;
}

}  // namespace lossagent::detail
