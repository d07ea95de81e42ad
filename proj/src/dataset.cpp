#include "lossagent/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "lossagent/errors.hpp"
#include "lossagent/rng.hpp"

namespace lossagent {

Degradation degradation_from_string(const std::string& name) {
    if (name == "gaussian_noise") return Degradation::gaussian_noise;
    if (name == "box_blur") return Degradation::box_blur;
    if (name == "both") return Degradation::both;
    throw ConfigError("unknown degradation: " + name);
}

std::string degradation_to_string(Degradation d) {
    switch (d) {
        case Degradation::gaussian_noise:
            return "gaussian_noise";
        case Degradation::box_blur:
            return "box_blur";
        case Degradation::both:
            return "both";
    }
    return "both";
}

namespace {

void paint_clean(double* img, int h, int w, Rng& rng) {
    // Smooth base: linear ramp in a random direction.
    const double gx = rng.next_range(-1.0, 1.0);
    const double gy = rng.next_range(-1.0, 1.0);
    const double offset = rng.next_range(0.2, 0.8);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const double yi = h > 1 ? static_cast<double>(i) / (h - 1) - 0.5 : 0.0;
            const double xj = w > 1 ? static_cast<double>(j) / (w - 1) - 0.5 : 0.0;
            img[static_cast<std::size_t>(i) * w + j] = offset + 0.3 * (gx * xj + gy * yi);
        }
    }

    // Hard-edged rectangles carry the structure the edge/tv terms fight over.
    const int rects = rng.next_int(1, 3);
    for (int r = 0; r < rects; ++r) {
        const int ri = rng.next_int(0, std::max(0, h - 2));
        const int rj = rng.next_int(0, std::max(0, w - 2));
        const int rh = rng.next_int(1, std::max(1, h / 2));
        const int rw = rng.next_int(1, std::max(1, w / 2));
        const double level = rng.next_range(0.0, 1.0);
        for (int i = ri; i < std::min(h, ri + rh); ++i) {
            for (int j = rj; j < std::min(w, rj + rw); ++j) {
                img[static_cast<std::size_t>(i) * w + j] = level;
            }
        }
    }

    // Low-amplitude sinusoid for mid-frequency texture.
    const double freq = rng.next_range(1.0, 3.0);
    const double phase = rng.next_range(0.0, 6.283185307179586);
    const double angle = rng.next_range(0.0, 6.283185307179586);
    const double amp = rng.next_range(0.02, 0.08);
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const double t = 6.283185307179586 * freq *
                             (ca * (w > 1 ? static_cast<double>(j) / (w - 1) : 0.0) +
                              sa * (h > 1 ? static_cast<double>(i) / (h - 1) : 0.0));
            img[static_cast<std::size_t>(i) * w + j] += amp * std::sin(t + phase);
        }
    }

    for (std::size_t k = 0; k < static_cast<std::size_t>(h) * w; ++k) {
        img[k] = std::clamp(img[k], 0.0, 1.0);
    }
}

// Box blur with mean-of-in-bounds-window borders; size 1 is the identity.
void box_blur(const double* src, double* dst, int h, int w, int size) {
    const int c = size / 2;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            int taps = 0;
            for (int u = -c; u <= c; ++u) {
                const int si = i + u;
                if (si < 0 || si >= h) continue;
                for (int v = -c; v <= c; ++v) {
                    const int sj = j + v;
                    if (sj < 0 || sj >= w) continue;
                    acc += src[static_cast<std::size_t>(si) * w + sj];
                    ++taps;
                }
            }
            dst[static_cast<std::size_t>(i) * w + j] = acc / taps;
        }
    }
}

void degrade(const double* clean, double* out, int h, int w, const DatasetSpec& spec, Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(h) * w;
    const bool blur =
        (spec.degradation == Degradation::box_blur || spec.degradation == Degradation::both) &&
        spec.blur_size > 1;
    if (blur) {
        box_blur(clean, out, h, w, spec.blur_size);
    } else {
        std::copy(clean, clean + n, out);
    }
    if ((spec.degradation == Degradation::gaussian_noise ||
         spec.degradation == Degradation::both) &&
        spec.noise_sigma > 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = std::clamp(out[k] + spec.noise_sigma * rng.next_gaussian(), 0.0, 1.0);
        }
    }
}

}  // namespace

SynthesizedData synthesize_dataset(const DatasetSpec& spec, int test_count) {
    if (spec.count < 1) throw ConfigError("dataset count must be >= 1");
    if (test_count < 0) throw ConfigError("test count must be >= 0");
    if (spec.height < 1 || spec.width < 1) throw ConfigError("dataset images must be non-empty");
    if (spec.noise_sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
    if (spec.blur_size < 1 || spec.blur_size % 2 == 0) {
        throw ConfigError("blur size must be an odd integer >= 1");
    }

    Rng rng(derive_seed(spec.seed, "dataset"));

    SynthesizedData out;
    out.pool_clean = ImageBatch(spec.count, spec.height, spec.width);
    out.pool_degraded = ImageBatch(spec.count, spec.height, spec.width);
    ImageBatch test_clean(test_count, spec.height, spec.width);
    ImageBatch test_degraded(test_count, spec.height, spec.width);

    for (int n = 0; n < spec.count; ++n) {
        paint_clean(out.pool_clean.image(n), spec.height, spec.width, rng);
        degrade(out.pool_clean.image(n), out.pool_degraded.image(n), spec.height, spec.width, spec,
                rng);
    }
    for (int n = 0; n < test_count; ++n) {
        paint_clean(test_clean.image(n), spec.height, spec.width, rng);
        degrade(test_clean.image(n), test_degraded.image(n), spec.height, spec.width, spec, rng);
    }

    out.test.degraded = std::move(test_degraded);
    out.test.clean = std::move(test_clean);
    return out;
}

}  // namespace lossagent
