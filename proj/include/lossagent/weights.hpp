#pragma once

#include <string>
#include <vector>

namespace lossagent {

// One differentiable loss term of the repository. Ids double as parse-grammar
// tokens, so they may not contain whitespace, ':' or '='.
struct LossTerm {
    std::string id;
    std::string description;
    bool requires_reference = true;
};

// Inclusive interval every loss weight must stay inside.
struct WeightBounds {
    double lower = 0.0;
    double upper = 10.0;

    double clip(double v) const;
    bool contains(double v) const { return v >= lower && v <= upper; }
};

// The coefficient vector applied to the loss repository, index-aligned with
// the repository's terms.
struct LossWeights {
    std::vector<double> values;

    LossWeights() = default;
    explicit LossWeights(std::vector<double> v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    bool operator==(const LossWeights& other) const = default;

    // Throws DimensionError / NumericError / ConfigError when the vector is
    // not a valid weight assignment for an M-term repository.
    void validate(int term_count, const WeightBounds& bounds) const;
};

// Per-term loss magnitudes for one batch, index-aligned with the repository.
struct LossVector {
    std::vector<double> values;

    LossVector() = default;
    explicit LossVector(std::vector<double> v) : values(std::move(v)) {}

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    bool operator==(const LossVector& other) const = default;
};

// Weighted composition sum_m w_m * L_m, accumulated strictly left to right
// so repeated runs are bit-identical.
double compose(const LossWeights& weights, const LossVector& losses);

}  // namespace lossagent
