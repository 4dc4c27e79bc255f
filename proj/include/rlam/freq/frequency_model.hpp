#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rlam::freq {

// Sparse feature vector: strictly increasing indices, merged duplicates.
struct SparseFeatures {
    std::vector<std::pair<std::int32_t, double>> items;
};

// Surface features of a token: slot 0 holds the code-point length, the rest
// hold signed hashed counts of byte 1/2/3-grams (FNV-1a 64; bucket =
// 1 + hash mod (dim-1); sign from the top hash bit).
SparseFeatures featurize(std::string_view token, std::int32_t feature_dim);

struct RidgeModel {
    std::int32_t feature_dim = 0;
    Eigen::VectorXd weights;
    double intercept = 0.0;

    double predict(const SparseFeatures& x) const;
    double predict(std::string_view token) const;
};

// L2-regularized least squares with an unpenalized intercept, solved by
// conjugate gradients on the mean-centered normal equations. With all-zero
// features the fit degenerates to predicting the target mean exactly.
RidgeModel train_ridge(const std::vector<SparseFeatures>& rows,
                       const Eigen::VectorXd& targets, std::int32_t feature_dim,
                       double l2);

struct FrequencyModelConfig {
    std::uint64_t capacity = 100000;  // max word types kept in the count table
    std::int32_t feature_dim = 1 << 18;
    double l2 = 1.0;
};

// Word accessibility scorer: inside the table, ln(count / total * 1e9);
// outside, a ridge fit over surface features trained on the table words.
struct FrequencyModel {
    std::uint64_t total_tokens = 0;
    std::vector<std::pair<std::string, std::uint64_t>> table;  // count desc, tie lex asc
    RidgeModel ridge;

    double word_accessibility(std::string_view token) const;
    bool in_table(std::string_view token) const;
    const std::uint64_t* table_count(std::string_view token) const;

    void rebuild_lookup();

  private:
    std::unordered_map<std::string, std::uint64_t> lookup_;
};

// Fits the scorer from word-type counts. Types are ranked by count
// descending (ties broken lexicographically ascending) and the top
// `capacity` kept in the table; the ridge model is trained on the table
// words' accessibility values. Throws std::invalid_argument on empty input.
FrequencyModel fit_frequency_model(
    const std::unordered_map<std::string, std::uint64_t>& type_counts,
    std::uint64_t total_tokens, const FrequencyModelConfig& config);

// Accumulates word-token counts from one document's text into `type_counts`;
// returns the number of word tokens seen.
std::uint64_t count_word_tokens(std::string_view text,
                                std::unordered_map<std::string, std::uint64_t>& type_counts);

void save_frequency_model(const FrequencyModel& model, const std::string& path);
FrequencyModel load_frequency_model(const std::string& path);

}  // namespace rlam::freq
