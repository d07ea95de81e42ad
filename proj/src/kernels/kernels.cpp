// Runtime kernel dispatch. The backend is resolved once from CPUID (AVX2
// when the host supports it, scalar otherwise) and every public kernel
// forwards through a function-pointer table, so forcing a backend swaps the
// whole set atomically.

#include "lossagent/kernels.hpp"

#include <atomic>

#include "lossagent/errors.hpp"
#include "kernels_impl.hpp"

namespace lossagent::kernels {

namespace {

struct KernelTable {
    double (*reduce_abs_diff)(const double*, const double*, std::size_t);
    double (*reduce_sq_diff)(const double*, const double*, std::size_t);
    double (*reduce_dot)(const double*, const double*, std::size_t);
    double (*reduce_sum)(const double*, std::size_t);
    double (*reduce_sq)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*add_sign_diff)(const double*, const double*, double, double*, std::size_t);
    void (*add_scaled_diff)(const double*, const double*, double, double*, std::size_t);
    void (*conv2d_same)(const double*, int, int, const double*, int, double*);
    void (*conv2d_kernel_grad)(const double*, int, int, const double*, int, double*);
};

constexpr KernelTable kScalarTable{
    &scalar::reduce_abs_diff, &scalar::reduce_sq_diff,   &scalar::reduce_dot,
    &scalar::reduce_sum,      &scalar::reduce_sq,        &scalar::axpy,
    &scalar::add_sign_diff,   &scalar::add_scaled_diff,  &scalar::conv2d_same,
    &scalar::conv2d_kernel_grad,
};

#if defined(LOSSAGENT_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    &avx2::reduce_abs_diff, &avx2::reduce_sq_diff,   &avx2::reduce_dot,
    &avx2::reduce_sum,      &avx2::reduce_sq,        &avx2::axpy,
    &avx2::add_sign_diff,   &avx2::add_scaled_diff,  &avx2::conv2d_same,
    &avx2::conv2d_kernel_grad,
};
#endif

bool cpu_has_avx2() {
#if defined(LOSSAGENT_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    std::atomic<const KernelTable*> table;
    std::atomic<Backend> backend;

    Dispatch() {
#if defined(LOSSAGENT_HAVE_AVX2)
        if (cpu_has_avx2()) {
            table.store(&kAvx2Table);
            backend.store(Backend::avx2);
            return;
        }
#endif
        table.store(&kScalarTable);
        backend.store(Backend::scalar);
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

bool backend_available(Backend backend) {
    switch (backend) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
            return cpu_has_avx2();
    }
    return false;
}

Backend active_backend() { return dispatch().backend.load(); }

void force_backend(Backend backend) {
    if (!backend_available(backend)) {
        throw ConfigError("kernel backend not available on this host: " + backend_name(backend));
    }
    switch (backend) {
        case Backend::scalar:
            dispatch().table.store(&kScalarTable);
            break;
        case Backend::avx2:
#if defined(LOSSAGENT_HAVE_AVX2)
            dispatch().table.store(&kAvx2Table);
            break;
#else
            throw ConfigError("kernel backend not compiled in: avx2");
#endif
    }
    dispatch().backend.store(backend);
}

std::string backend_name(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

double reduce_abs_diff(const double* a, const double* b, std::size_t n) {
    return dispatch().table.load()->reduce_abs_diff(a, b, n);
}

double reduce_sq_diff(const double* a, const double* b, std::size_t n) {
    return dispatch().table.load()->reduce_sq_diff(a, b, n);
}

double reduce_dot(const double* a, const double* b, std::size_t n) {
    return dispatch().table.load()->reduce_dot(a, b, n);
}

double reduce_sum(const double* a, std::size_t n) {
    return dispatch().table.load()->reduce_sum(a, n);
}

double reduce_sq(const double* a, std::size_t n) {
    return dispatch().table.load()->reduce_sq(a, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    dispatch().table.load()->axpy(alpha, x, y, n);
}

void add_sign_diff(const double* a, const double* b, double scale, double* out, std::size_t n) {
    dispatch().table.load()->add_sign_diff(a, b, scale, out, n);
}

void add_scaled_diff(const double* a, const double* b, double scale, double* out, std::size_t n) {
    dispatch().table.load()->add_scaled_diff(a, b, scale, out, n);
}

void conv2d_same(const double* src, int height, int width, const double* kernel, int ksize,
                 double* dst) {
    dispatch().table.load()->conv2d_same(src, height, width, kernel, ksize, dst);
}

void conv2d_kernel_grad(const double* src, int height, int width, const double* gout, int ksize,
                        double* kgrad) {
    dispatch().table.load()->conv2d_kernel_grad(src, height, width, gout, ksize, kgrad);
}

}  // namespace lossagent::kernels
