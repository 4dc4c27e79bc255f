#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rlam::util {

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Written
// out so sampled streams do not depend on a standard library's distribution
// implementation.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n). Modulo bias is negligible for the small n used
// here and keeps the draw deterministic across platforms.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    return static_cast<std::size_t>(rng() % n);
}

// Draws an index proportional to non-negative weights via a CDF walk.
inline Eigen::Index sample_categorical(std::mt19937_64& rng,
                                       const Eigen::VectorXd& weights) {
    const double total = weights.sum();
    if (!(total > 0.0)) throw std::invalid_argument("sample_categorical: zero mass");
    double u = uniform01(rng) * total;
    double acc = 0.0;
    Eigen::Index last = 0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last = i;
        if (u < acc) return i;
    }
    return last;  // guards against accumulated rounding at the top end
}

// In-place Fisher-Yates shuffle driven by the shared engine.
template <typename T>
void shuffle(std::mt19937_64& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace rlam::util
