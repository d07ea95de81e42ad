#pragma once

// Internal declarations shared by the kernel backends and the dispatcher.
// Each backend namespace implements the full kernel set with identical
// signatures; the dispatcher in kernels.cpp selects one at startup.

#include <algorithm>
#include <cstddef>

namespace lossagent::kernels::scalar {

double reduce_abs_diff(const double* a, const double* b, std::size_t n);
double reduce_sq_diff(const double* a, const double* b, std::size_t n);
double reduce_dot(const double* a, const double* b, std::size_t n);
double reduce_sum(const double* a, std::size_t n);
double reduce_sq(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void add_sign_diff(const double* a, const double* b, double scale, double* out, std::size_t n);
void add_scaled_diff(const double* a, const double* b, double scale, double* out, std::size_t n);
void conv2d_same(const double* src, int height, int width, const double* kernel, int ksize,
                 double* dst);
void conv2d_kernel_grad(const double* src, int height, int width, const double* gout, int ksize,
                        double* kgrad);

}  // namespace lossagent::kernels::scalar

#if defined(LOSSAGENT_HAVE_AVX2)
namespace lossagent::kernels::avx2 {

double reduce_abs_diff(const double* a, const double* b, std::size_t n);
double reduce_sq_diff(const double* a, const double* b, std::size_t n);
double reduce_dot(const double* a, const double* b, std::size_t n);
double reduce_sum(const double* a, std::size_t n);
double reduce_sq(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void add_sign_diff(const double* a, const double* b, double scale, double* out, std::size_t n);
void add_scaled_diff(const double* a, const double* b, double scale, double* out, std::size_t n);
void conv2d_same(const double* src, int height, int width, const double* kernel, int ksize,
                 double* dst);
void conv2d_kernel_grad(const double* src, int height, int width, const double* gout, int ksize,
                        double* kgrad);

}  // namespace lossagent::kernels::avx2
#endif
