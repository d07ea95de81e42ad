#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace lossagent {

// A batch of single-channel images on a [0,1] scale, stored as one flat
// row-major f64 buffer. All pixel math in the framework runs on doubles so
// gradient checks and checkpoints are exact at 64-bit precision.
struct ImageBatch {
    int count = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    ImageBatch() = default;
    ImageBatch(int n, int h, int w)
        : count(n), height(h), width(w),
          data(static_cast<std::size_t>(n) * h * w, 0.0) {}

    std::size_t pixels_per_image() const { return static_cast<std::size_t>(height) * width; }
    std::size_t size() const { return data.size(); }

    double* image(int n) { return data.data() + static_cast<std::size_t>(n) * pixels_per_image(); }
    const double* image(int n) const {
        return data.data() + static_cast<std::size_t>(n) * pixels_per_image();
    }

    double& at(int n, int row, int col) {
        return data[static_cast<std::size_t>(n) * pixels_per_image() +
                    static_cast<std::size_t>(row) * width + col];
    }
    double at(int n, int row, int col) const {
        return data[static_cast<std::size_t>(n) * pixels_per_image() +
                    static_cast<std::size_t>(row) * width + col];
    }

    bool same_shape(const ImageBatch& other) const {
        return count == other.count && height == other.height && width == other.width;
    }
};

// The fixed evaluation panel: degraded inputs plus optional aligned clean
// targets (absent for no-reference-only runs).
struct TestSet {
    ImageBatch degraded;
    std::optional<ImageBatch> clean;

    int size() const { return degraded.count; }
};

}  // namespace lossagent
