// AVX2/FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; callers reach it through the runtime dispatcher, which
// checks CPUID before routing here.

#include "kernels_impl.hpp"

#if defined(LOSSAGENT_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace lossagent::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(sum2, sum2);
    return _mm_cvtsd_f64(_mm_add_sd(sum2, swapped));
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));

}  // namespace

double reduce_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_and_pd(d, kAbsMask));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += std::fabs(a[i] - b[i]);
    return hsum(acc) + tail;
}

double reduce_sq_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        tail += d * d;
    }
    return hsum(acc) + tail;
}

double reduce_dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum(acc) + tail;
}

double reduce_sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return hsum(acc) + tail;
}

double reduce_sq(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * a[i];
    return hsum(acc) + tail;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_sign_diff(const double* a, const double* b, double scale, double* out, std::size_t n) {
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d vzero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(d, vzero, _CMP_GT_OQ), vscale);
        const __m256d neg = _mm256_and_pd(_mm256_cmp_pd(d, vzero, _CMP_LT_OQ), vscale);
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(out + i), _mm256_sub_pd(pos, neg));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d > 0.0) {
            out[i] += scale;
        } else if (d < 0.0) {
            out[i] -= scale;
        }
    }
}

void add_scaled_diff(const double* a, const double* b, double scale, double* out, std::size_t n) {
    const __m256d vscale = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d r = _mm256_fmadd_pd(vscale, d, _mm256_loadu_pd(out + i));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] += scale * (a[i] - b[i]);
}

void conv2d_same(const double* src, int height, int width, const double* kernel, int ksize,
                 double* dst) {
    const int c = ksize / 2;
    for (int i = 0; i < height; ++i) {
        double* drow = dst + static_cast<std::size_t>(i) * width;

        const auto scalar_col = [&](int j) {
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
            return acc;
        };

        // Interior columns [c, width - c) read full kernel rows without
        // column clipping; vectorize those, scalar for the borders.
        const int j_lo = std::min(c, width);
        const int j_hi = std::max(j_lo, width - c);
        const int j_vec_end = j_lo + ((j_hi - j_lo) / 4) * 4;

        for (int j = j_lo; j < j_vec_end; j += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int u = 0; u < ksize; ++u) {
                const int si = i + u - c;
                if (si < 0 || si >= height) continue;
                const double* srow = src + static_cast<std::size_t>(si) * width + (j - c);
                const double* krow = kernel + static_cast<std::size_t>(u) * ksize;
                for (int v = 0; v < ksize; ++v) {
                    acc = _mm256_fmadd_pd(_mm256_set1_pd(krow[v]), _mm256_loadu_pd(srow + v), acc);
                }
            }
            _mm256_storeu_pd(drow + j, acc);
        }
        for (int j = 0; j < j_lo; ++j) drow[j] = scalar_col(j);
        for (int j = j_vec_end; j < width; ++j) drow[j] = scalar_col(j);
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
                const int j0 = std::max(0, c - v);
                const int j1 = std::min(width, width + c - v);
                if (j1 > j0) {
                    acc += reduce_dot(grow + j0, srow + j0 + v - c,
                                      static_cast<std::size_t>(j1 - j0));
                }
            }
            kgrad[static_cast<std::size_t>(u) * ksize + v] += acc;
        }
    }
}

}  // namespace lossagent::kernels::avx2

#endif  // LOSSAGENT_HAVE_AVX2
