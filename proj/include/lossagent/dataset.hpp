#pragma once

#include <cstdint>
#include <string>

#include "lossagent/image.hpp"

namespace lossagent {

enum class Degradation { gaussian_noise, box_blur, both };

Degradation degradation_from_string(const std::string& name);
std::string degradation_to_string(Degradation d);

// Desk-scale stand-in for a natural-image corpus: clean images are seeded
// mixtures of gradients, rectangles and sinusoids; degraded images apply the
// configured degradation. Fully reproducible per seed.
struct DatasetSpec {
    int count = 8;  // training-pool size
    int height = 16;
    int width = 16;
    Degradation degradation = Degradation::both;
    double noise_sigma = 0.05;
    int blur_size = 3;  // box side; 1 disables blurring
    std::uint64_t seed = 0;
};

struct SynthesizedData {
    ImageBatch pool_degraded;
    ImageBatch pool_clean;
    TestSet test;
};

// Generates spec.count training images plus test_count held-out test images
// from one seeded stream. Deterministic: the same spec yields identical
// pixel data.
SynthesizedData synthesize_dataset(const DatasetSpec& spec, int test_count);

}  // namespace lossagent
