#pragma once

#include <cstddef>
#include <string>

namespace lossagent::kernels {

// Every kernel ships as a scalar reference implementation plus, on x86-64,
// an AVX2/FMA variant. The backend is picked once at startup from CPUID and
// can be forced (tests pin `scalar` vs `avx2` to check equivalence). All
// variants of one kernel compute the same quantity; they may differ in the
// low bits because vector lanes accumulate in a different order.
enum class Backend { scalar, avx2 };

bool backend_available(Backend backend);
Backend active_backend();
// Throws lossagent::ConfigError when the requested backend is unavailable.
void force_backend(Backend backend);
std::string backend_name(Backend backend);

// --- flat reductions -------------------------------------------------------

// sum_i |a_i - b_i|
double reduce_abs_diff(const double* a, const double* b, std::size_t n);
// sum_i (a_i - b_i)^2
double reduce_sq_diff(const double* a, const double* b, std::size_t n);
// sum_i a_i * b_i
double reduce_dot(const double* a, const double* b, std::size_t n);
// sum_i a_i
double reduce_sum(const double* a, std::size_t n);
// sum_i a_i^2
double reduce_sq(const double* a, std::size_t n);

// --- elementwise maps ------------------------------------------------------

// y_i += alpha * x_i
void axpy(double alpha, const double* x, double* y, std::size_t n);
// out_i += scale * sign(a_i - b_i)   (sign(0) == 0)
void add_sign_diff(const double* a, const double* b, double scale, double* out, std::size_t n);
// out_i += scale * (a_i - b_i)
void add_scaled_diff(const double* a, const double* b, double scale, double* out, std::size_t n);

// --- 2-D stencils ----------------------------------------------------------

// Same-size 2-D convolution with zero padding and an odd k x k kernel.
void conv2d_same(const double* src, int height, int width, const double* kernel, int ksize,
                 double* dst);

// Accumulates the kernel gradient for conv2d_same: for each tap (u, v),
// kgrad[u,v] += sum_{i,j} gout[i,j] * src[i+u-c, j+v-c] with zero padding.
void conv2d_kernel_grad(const double* src, int height, int width, const double* gout, int ksize,
                        double* kgrad);

}  // namespace lossagent::kernels
