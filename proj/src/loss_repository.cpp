#include "lossagent/loss_repository.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lossagent/errors.hpp"
#include "lossagent/kernels.hpp"

namespace lossagent {

double WeightBounds::clip(double v) const {
    if (std::isnan(v)) return lower;
    if (v < lower) return lower;
    if (v > upper) return upper;
    return v;
}

void LossWeights::validate(int term_count, const WeightBounds& bounds) const {
    if (size() != term_count) {
        throw DimensionError("weight vector has " + std::to_string(size()) +
                             " entries, repository has " + std::to_string(term_count) + " terms");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericError("loss weight is not finite");
        if (!bounds.contains(v)) {
            throw ConfigError("loss weight " + std::to_string(v) + " outside bounds [" +
                              std::to_string(bounds.lower) + ", " + std::to_string(bounds.upper) +
                              "]");
        }
    }
}

double compose(const LossWeights& weights, const LossVector& losses) {
    if (weights.size() != losses.size()) {
        throw DimensionError("compose: weight count " + std::to_string(weights.size()) +
                             " != loss count " + std::to_string(losses.size()));
    }
    double total = 0.0;
    for (int m = 0; m < weights.size(); ++m) {
        if (!std::isfinite(weights[m]) || !std::isfinite(losses[m])) {
            throw NumericError("compose: non-finite input at term " + std::to_string(m));
        }
        total += weights[m] * losses[m];
    }
    return total;
}

namespace {

void require_same_shape(const ImageBatch& a, const ImageBatch& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("image batches differ in shape: " + std::to_string(a.count) + "x" +
                             std::to_string(a.height) + "x" + std::to_string(a.width) + " vs " +
                             std::to_string(b.count) + "x" + std::to_string(b.height) + "x" +
                             std::to_string(b.width));
    }
}

// --- pixelwise terms --------------------------------------------------------

double l1_loss(const ImageBatch& p, const ImageBatch& t) {
    if (p.size() == 0) return 0.0;
    return kernels::reduce_abs_diff(p.data.data(), t.data.data(), p.size()) /
           static_cast<double>(p.size());
}

void l1_grad(const ImageBatch& p, const ImageBatch& t, ImageBatch& g) {
    if (p.size() == 0) return;
    kernels::add_sign_diff(p.data.data(), t.data.data(), 1.0 / static_cast<double>(p.size()),
                           g.data.data(), p.size());
}

double mse_loss(const ImageBatch& p, const ImageBatch& t) {
    if (p.size() == 0) return 0.0;
    return kernels::reduce_sq_diff(p.data.data(), t.data.data(), p.size()) /
           static_cast<double>(p.size());
}

void mse_grad(const ImageBatch& p, const ImageBatch& t, ImageBatch& g) {
    if (p.size() == 0) return;
    kernels::add_scaled_diff(p.data.data(), t.data.data(), 2.0 / static_cast<double>(p.size()),
                             g.data.data(), p.size());
}

// --- first-order difference terms -------------------------------------------

// Number of forward-difference elements per image; 0 for degenerate support.
std::size_t diff_count(const ImageBatch& b) {
    const std::size_t h = b.height;
    const std::size_t w = b.width;
    if (h == 0 || w == 0) return 0;
    return static_cast<std::size_t>(b.count) * (h * (w - 1) + (h - 1) * w);
}

// Sum over both axes of |dx(p) - dx(t)| for one image; with ref == nullptr,
// of |dx(p)|. Shared core of the edge, tv and tv_diff terms.
double image_diff_abs_sum(const double* img, const double* ref, int h, int w) {
    double total = 0.0;
    for (int i = 0; i < h; ++i) {
        const double* row = img + static_cast<std::size_t>(i) * w;
        const double* rrow = ref ? ref + static_cast<std::size_t>(i) * w : nullptr;
        for (int j = 0; j + 1 < w; ++j) {
            double d = row[j + 1] - row[j];
            if (rrow) d -= rrow[j + 1] - rrow[j];
            total += std::fabs(d);
        }
    }
    for (int i = 0; i + 1 < h; ++i) {
        const double* row = img + static_cast<std::size_t>(i) * w;
        if (!ref) {
            total += kernels::reduce_abs_diff(row + w, row, static_cast<std::size_t>(w));
        } else {
            const double* rrow = ref + static_cast<std::size_t>(i) * w;
            for (int j = 0; j < w; ++j) {
                total += std::fabs((row[j + w] - row[j]) - (rrow[j + w] - rrow[j]));
            }
        }
    }
    return total;
}

// Accumulates scale * d(image_diff_abs_sum)/d(img) into grad.
void image_diff_abs_grad(const double* img, const double* ref, int h, int w, double scale,
                         double* grad) {
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j + 1 < w; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * w + j;
            double d = img[idx + 1] - img[idx];
            if (ref) d -= ref[idx + 1] - ref[idx];
            if (d > 0.0) {
                grad[idx + 1] += scale;
                grad[idx] -= scale;
            } else if (d < 0.0) {
                grad[idx + 1] -= scale;
                grad[idx] += scale;
            }
        }
    }
    for (int i = 0; i + 1 < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * w + j;
            double d = img[idx + w] - img[idx];
            if (ref) d -= ref[idx + w] - ref[idx];
            if (d > 0.0) {
                grad[idx + w] += scale;
                grad[idx] -= scale;
            } else if (d < 0.0) {
                grad[idx + w] -= scale;
                grad[idx] += scale;
            }
        }
    }
}

double edge_loss(const ImageBatch& p, const ImageBatch& t) {
    const std::size_t count = diff_count(p);
    if (count == 0) return 0.0;
    double total = 0.0;
    for (int n = 0; n < p.count; ++n) {
        total += image_diff_abs_sum(p.image(n), t.image(n), p.height, p.width);
    }
    return total / static_cast<double>(count);
}

void edge_grad(const ImageBatch& p, const ImageBatch& t, ImageBatch& g) {
    const std::size_t count = diff_count(p);
    if (count == 0) return;
    for (int n = 0; n < p.count; ++n) {
        image_diff_abs_grad(p.image(n), t.image(n), p.height, p.width,
                            1.0 / static_cast<double>(count), g.image(n));
    }
}

double tv_loss(const ImageBatch& p, const ImageBatch&) {
    const std::size_t count = diff_count(p);
    if (count == 0) return 0.0;
    double total = 0.0;
    for (int n = 0; n < p.count; ++n) {
        total += image_diff_abs_sum(p.image(n), nullptr, p.height, p.width);
    }
    return total / static_cast<double>(count);
}

void tv_grad(const ImageBatch& p, const ImageBatch&, ImageBatch& g) {
    const std::size_t count = diff_count(p);
    if (count == 0) return;
    for (int n = 0; n < p.count; ++n) {
        image_diff_abs_grad(p.image(n), nullptr, p.height, p.width,
                            1.0 / static_cast<double>(count), g.image(n));
    }
}

// Per image |TV(pred) - TV(target)|, averaged over the batch: penalizes a
// prediction rougher or smoother overall than its target, and vanishes at
// zero residual.
double tv_diff_loss(const ImageBatch& p, const ImageBatch& t) {
    const std::size_t per_image = diff_count(p) / std::max(1, p.count);
    if (per_image == 0) return 0.0;
    double total = 0.0;
    for (int n = 0; n < p.count; ++n) {
        const double tp = image_diff_abs_sum(p.image(n), nullptr, p.height, p.width);
        const double tt = image_diff_abs_sum(t.image(n), nullptr, p.height, p.width);
        total += std::fabs(tp - tt) / static_cast<double>(per_image);
    }
    return total / static_cast<double>(p.count);
}

void tv_diff_grad(const ImageBatch& p, const ImageBatch& t, ImageBatch& g) {
    const std::size_t per_image = diff_count(p) / std::max(1, p.count);
    if (per_image == 0) return;
    for (int n = 0; n < p.count; ++n) {
        const double tp = image_diff_abs_sum(p.image(n), nullptr, p.height, p.width);
        const double tt = image_diff_abs_sum(t.image(n), nullptr, p.height, p.width);
        if (tp == tt) continue;
        const double sign = tp > tt ? 1.0 : -1.0;
        image_diff_abs_grad(p.image(n), nullptr, p.height, p.width,
                            sign / static_cast<double>(per_image * p.count), g.image(n));
    }
}

// --- SSIM proxy ---------------------------------------------------------------

constexpr double kSsimC1 = 1e-4;  // (0.01 * L)^2 with L = 1
constexpr double kSsimC2 = 9e-4;  // (0.03 * L)^2

struct SsimStats {
    double mean_x, mean_y, var_x, var_y, cov;
    double a1, a2, b1, b2, ssim;
};

SsimStats ssim_stats(const double* x, const double* y, std::size_t n) {
    const double inv_n = 1.0 / static_cast<double>(n);
    SsimStats s{};
    s.mean_x = kernels::reduce_sum(x, n) * inv_n;
    s.mean_y = kernels::reduce_sum(y, n) * inv_n;
    s.var_x = kernels::reduce_sq(x, n) * inv_n - s.mean_x * s.mean_x;
    s.var_y = kernels::reduce_sq(y, n) * inv_n - s.mean_y * s.mean_y;
    s.cov = kernels::reduce_dot(x, y, n) * inv_n - s.mean_x * s.mean_y;
    s.a1 = 2.0 * s.mean_x * s.mean_y + kSsimC1;
    s.a2 = 2.0 * s.cov + kSsimC2;
    s.b1 = s.mean_x * s.mean_x + s.mean_y * s.mean_y + kSsimC1;
    s.b2 = s.var_x + s.var_y + kSsimC2;
    s.ssim = (s.a1 * s.a2) / (s.b1 * s.b2);
    return s;
}

double ssim_proxy_loss(const ImageBatch& p, const ImageBatch& t) {
    if (p.count == 0 || p.pixels_per_image() == 0) return 0.0;
    double total = 0.0;
    for (int n = 0; n < p.count; ++n) {
        total += 1.0 - ssim_stats(p.image(n), t.image(n), p.pixels_per_image()).ssim;
    }
    return total / static_cast<double>(p.count);
}

void ssim_proxy_grad(const ImageBatch& p, const ImageBatch& t, ImageBatch& g) {
    if (p.count == 0 || p.pixels_per_image() == 0) return;
    const std::size_t n = p.pixels_per_image();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int img = 0; img < p.count; ++img) {
        const double* x = p.image(img);
        const double* y = t.image(img);
        double* grad = g.image(img);
        const SsimStats s = ssim_stats(x, y, n);
        const double d = s.b1 * s.b2;
        // dS/dx_k = 2/(n*D) * (my*A2 - S*mx*B2 + A1*(y_k - my) - S*B1*(x_k - mx))
        const double base = s.mean_y * s.a2 - s.ssim * s.mean_x * s.b2;
        const double cy = s.a1;
        const double cx = -s.ssim * s.b1;
        const double scale = -2.0 * inv_n / (d * static_cast<double>(p.count));
        for (std::size_t k = 0; k < n; ++k) {
            grad[k] += scale * (base + cy * (y[k] - s.mean_y) + cx * (x[k] - s.mean_x));
        }
    }
}

struct TermImpl {
    LossTerm meta;
    double (*loss)(const ImageBatch&, const ImageBatch&);
    void (*grad)(const ImageBatch&, const ImageBatch&, ImageBatch&);
};

const std::vector<TermImpl>& term_impls() {
    static const std::vector<TermImpl> impls = {
        {{"l1", "mean absolute pixel error", true}, &l1_loss, &l1_grad},
        {{"mse", "mean squared pixel error", true}, &mse_loss, &mse_grad},
        {{"edge", "mean absolute error of first-order spatial differences", true}, &edge_loss,
         &edge_grad},
        {{"tv", "total variation of the prediction", false}, &tv_loss, &tv_grad},
        {{"tv_diff", "absolute difference between prediction and target total variation", true},
         &tv_diff_loss, &tv_diff_grad},
        {{"ssim_proxy", "one minus global-statistics SSIM", true}, &ssim_proxy_loss,
         &ssim_proxy_grad},
    };
    return impls;
}

const TermImpl& find_impl(const std::string& id) {
    for (const TermImpl& impl : term_impls()) {
        if (impl.meta.id == id) return impl;
    }
    throw LookupError("unknown loss term: " + id);
}

}  // namespace

const std::vector<LossTerm>& LossRepository::known_terms() {
    static const std::vector<LossTerm> terms = [] {
        std::vector<LossTerm> out;
        for (const TermImpl& impl : term_impls()) out.push_back(impl.meta);
        return out;
    }();
    return terms;
}

std::vector<std::string> LossRepository::default_term_ids() { return {"l1", "edge", "tv"}; }

std::vector<std::string> LossRepository::extended_term_ids() {
    return {"l1", "mse", "edge", "tv", "ssim_proxy"};
}

LossRepository LossRepository::from_ids(const std::vector<std::string>& ids) {
    if (ids.empty()) throw ConfigError("loss repository needs at least one term");
    LossRepository repo;
    std::set<std::string> seen;
    for (const std::string& id : ids) {
        if (!seen.insert(id).second) throw ConfigError("duplicate loss term id: " + id);
        repo.terms_.push_back(find_impl(id).meta);
    }
    return repo;
}

std::vector<std::string> LossRepository::term_ids() const {
    std::vector<std::string> out;
    for (const LossTerm& t : terms_) out.push_back(t.id);
    return out;
}

bool LossRepository::any_requires_reference() const {
    for (const LossTerm& t : terms_) {
        if (t.requires_reference) return true;
    }
    return false;
}

LossVector LossRepository::evaluate(const ImageBatch& prediction, const ImageBatch& target) const {
    require_same_shape(prediction, target);
    LossVector out;
    out.values.reserve(terms_.size());
    for (const LossTerm& t : terms_) {
        out.values.push_back(find_impl(t.id).loss(prediction, target));
    }
    return out;
}

ImageBatch LossRepository::gradient(const std::string& term_id, const ImageBatch& prediction,
                                    const ImageBatch& target) const {
    require_same_shape(prediction, target);
    const TermImpl& impl = find_impl(term_id);
    ImageBatch g(prediction.count, prediction.height, prediction.width);
    impl.grad(prediction, target, g);
    return g;
}

ImageBatch LossRepository::weighted_gradient(const LossWeights& weights,
                                             const ImageBatch& prediction,
                                             const ImageBatch& target) const {
    require_same_shape(prediction, target);
    if (weights.size() != size()) {
        throw DimensionError("weighted_gradient: weight count != term count");
    }
    ImageBatch g(prediction.count, prediction.height, prediction.width);
    ImageBatch term_grad(prediction.count, prediction.height, prediction.width);
    for (int m = 0; m < size(); ++m) {
        if (weights[m] == 0.0) continue;
        std::fill(term_grad.data.begin(), term_grad.data.end(), 0.0);
        find_impl(terms_[static_cast<std::size_t>(m)].id).grad(prediction, target, term_grad);
        kernels::axpy(weights[m], term_grad.data.data(), g.data.data(), g.size());
    }
    return g;
}

}  // namespace lossagent
