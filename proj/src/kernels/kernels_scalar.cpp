// Scalar reference kernels. These define the semantics; the SIMD variants
// are equivalence-tested against them.

#include "kernels_impl.hpp"

#include <cmath>

namespace lossagent::kernels::scalar {

double reduce_abs_diff(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

double reduce_sq_diff(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double reduce_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double reduce_sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double reduce_sq(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_sign_diff(const double* a, const double* b, double scale, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d > 0.0) {
            out[i] += scale;
        } else if (d < 0.0) {
            out[i] -= scale;
        }
    }
}

void add_scaled_diff(const double* a, const double* b, double scale, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] += scale * (a[i] - b[i]);
}

void conv2d_same(const double* src, int height, int width, const double* kernel, int ksize,
                 double* dst) {
    const int c = ksize / 2;
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            double acc = 0.0;
            for (int u = 0; u < ksize; ++u) {
                const int si = i + u - c;
                if (si < 0 || si >= height) continue;
                const double* srow = src + static_cast<std::size_t>(si) * width;
                const double* krow = kernel + static_cast<std::size_t>(u) * ksize;
                for (int v = 0; v < ksize; ++v) {
                    const int sj = j + v - c;
                    if (sj < 0 || sj >= width) continue;
                    acc += krow[v] * srow[sj];
                }
            }
            dst[static_cast<std::size_t>(i) * width + j] = acc;
        }
    }
}

void conv2d_kernel_grad(const double* src, int height, int width, const double* gout, int ksize,
                        double* kgrad) {
    const int c = ksize / 2;
    for (int u = 0; u < ksize; ++u) {
        for (int v = 0; v < ksize; ++v) {
            double acc = 0.0;
            for (int i = 0; i < height; ++i) {
                const int si = i + u - c;
                if (si < 0 || si >= height) continue;
                const double* grow = gout + static_cast<std::size_t>(i) * width;
                const double* srow = src + static_cast<std::size_t>(si) * width;
                // Columns where j+v-c stays in range form one contiguous run.
                const int j0 = std::max(0, c - v);
                const int j1 = std::min(width, width + c - v);
                for (int j = j0; j < j1; ++j) acc += grow[j] * srow[j + v - c];
            }
            kgrad[static_cast<std::size_t>(u) * ksize + v] += acc;
        }
    }
}

}  // namespace lossagent::kernels::scalar
