#include "rlam/freq/frequency_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

using rlam::freq::featurize;
using rlam::freq::FrequencyModel;
using rlam::freq::FrequencyModelConfig;
using rlam::freq::RidgeModel;
using rlam::freq::SparseFeatures;
using rlam::freq::train_ridge;

namespace {

// Independent check: solve the augmented normal equations for ridge with an
// unpenalized intercept directly, [XtX+lI Xt1; 1tX n][w;b] = [Xty; sum y].
std::pair<Eigen::VectorXd, double> ridge_oracle(const std::vector<SparseFeatures>& rows,
                                                const Eigen::VectorXd& y, int dim,
                                                double l2) {
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, dim);
    for (int r = 0; r < n; ++r)
        for (const auto& [idx, val] : rows[r].items) x(r, idx) = val;
    Eigen::MatrixXd a(dim + 1, dim + 1);
    a.topLeftCorner(dim, dim) =
        x.transpose() * x + l2 * Eigen::MatrixXd::Identity(dim, dim);
    a.topRightCorner(dim, 1) = x.transpose() * Eigen::VectorXd::Ones(n);
    a.bottomLeftCorner(1, dim) = Eigen::RowVectorXd::Ones(n) * x;
    a(dim, dim) = n;
    Eigen::VectorXd rhs(dim + 1);
    rhs.head(dim) = x.transpose() * y;
    rhs(dim) = y.sum();
    Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    return {sol.head(dim), sol(dim)};
}

SparseFeatures random_row(std::mt19937_64& rng, int dim, int max_nnz) {
    SparseFeatures row;
    int nnz = static_cast<int>(rng() % static_cast<unsigned>(max_nnz + 1));
    std::vector<int> idx;
    for (int k = 0; k < nnz; ++k) idx.push_back(static_cast<int>(rng() % dim));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int i : idx) {
        double val = static_cast<double>(static_cast<int>(rng() % 7)) - 3.0;
        if (val != 0.0) row.items.emplace_back(i, val);
    }
    return row;
}

}  // namespace

TEST_CASE("featurize basics") {
    auto f = featurize("a", 17);
    // FNV-1a 64 of "a" is 0xaf63dc4c8601ec8c: bucket 1 + (h mod 16) = 13,
    // sign bit set so the unigram contributes -1.
    REQUIRE(f.items.size() == 2);
    CHECK(f.items[0].first == 0);
    CHECK(f.items[0].second == 1.0);
    CHECK(f.items[1].first == 13);
    CHECK(f.items[1].second == -1.0);
}

TEST_CASE("featurize structure") {
    auto f = featurize("hashing", 1 << 10);
    REQUIRE(!f.items.empty());
    CHECK(f.items[0].first == 0);
    CHECK(f.items[0].second == 7.0);
    for (std::size_t i = 1; i < f.items.size(); ++i) {
        CHECK(f.items[i].first > f.items[i - 1].first);
        CHECK(f.items[i].first >= 1);
        CHECK(f.items[i].first < (1 << 10));
        CHECK(f.items[i].second != 0.0);
    }
    auto again = featurize("hashing", 1 << 10);
    CHECK(f.items == again.items);

    auto accented = featurize("caf\xc3\xa9", 1 << 10);
    CHECK(accented.items[0].second == 4.0);  // code points, not bytes
}

TEST_CASE("featurize rejects tiny dims") {
    CHECK_THROWS_AS(featurize("x", 1), std::invalid_argument);
}

TEST_CASE("ridge matches dense normal equations") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 3 + static_cast<int>(rng() % 30);
        int n = 2 + static_cast<int>(rng() % 25);
        double l2 = 0.5 + static_cast<double>(rng() % 5);
        std::vector<SparseFeatures> rows;
        Eigen::VectorXd y(n);
        for (int r = 0; r < n; ++r) {
            rows.push_back(random_row(rng, dim, 6));
            y(r) = static_cast<double>(static_cast<int>(rng() % 19)) - 9.0;
        }
        RidgeModel model = train_ridge(rows, y, dim, l2);
        auto [w_ref, b_ref] = ridge_oracle(rows, y, dim, l2);
        double scale = std::max(1.0, w_ref.norm());
        CHECK((model.weights - w_ref).norm() / scale < 1e-8);
        CHECK(std::abs(model.intercept - b_ref) /
                  std::max(1.0, std::abs(b_ref)) < 1e-8);
        for (int r = 0; r < n; ++r) {
            double pred = model.predict(rows[r]);
            double ref = b_ref;
            for (const auto& [idx, val] : rows[r].items) ref += w_ref(idx) * val;
            CHECK(pred == doctest::Approx(ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("all-zero features predict the target mean") {
    std::vector<SparseFeatures> rows(3);
    Eigen::VectorXd y(3);
    y << 1.0, 2.0, 4.0;
    RidgeModel model = train_ridge(rows, y, 8, 1.0);
    CHECK(model.intercept == (1.0 + 2.0 + 4.0) / 3.0);
    CHECK(model.predict(SparseFeatures{}) == (1.0 + 2.0 + 4.0) / 3.0);
    CHECK(model.weights.norm() == 0.0);
}

TEST_CASE("table accessibility is the scaled log frequency") {
    std::unordered_map<std::string, std::uint64_t> counts{{"big", 3}, {"tiny", 3}};
    FrequencyModelConfig cfg;
    cfg.capacity = 10;
    cfg.feature_dim = 64;
    FrequencyModel model = rlam::freq::fit_frequency_model(counts, 6, cfg);
    CHECK(model.word_accessibility("big") ==
          doctest::Approx(std::log(0.5e9)).epsilon(1e-12));
    CHECK(model.in_table("big"));
    CHECK(!model.in_table("colossal"));
    CHECK(model.word_accessibility("colossal") == model.ridge.predict("colossal"));
}

TEST_CASE("table ranking and capacity") {
    std::unordered_map<std::string, std::uint64_t> counts{
        {"aa", 5}, {"ab", 5}, {"b", 7}, {"zz", 1}};
    FrequencyModelConfig cfg;
    cfg.capacity = 2;
    cfg.feature_dim = 32;
    FrequencyModel model = rlam::freq::fit_frequency_model(counts, 18, cfg);
    REQUIRE(model.table.size() == 2);
    CHECK(model.table[0] == std::pair<std::string, std::uint64_t>{"b", 7});
    CHECK(model.table[1] == std::pair<std::string, std::uint64_t>{"aa", 5});
    CHECK(!model.in_table("ab"));
}

TEST_CASE("empty corpus rejected") {
    std::unordered_map<std::string, std::uint64_t> empty;
    FrequencyModelConfig cfg;
    CHECK_THROWS_AS(rlam::freq::fit_frequency_model(empty, 0, cfg),
                    std::invalid_argument);
}

TEST_CASE("word token counting skips punctuation") {
    std::unordered_map<std::string, std::uint64_t> counts;
    auto n = rlam::freq::count_word_tokens("Hello, world. Hello again.", counts);
    CHECK(n == 4);
    CHECK(counts["Hello"] == 2);
    CHECK(counts["world"] == 1);
    CHECK(counts["again"] == 1);
    CHECK(counts.size() == 3);
}

TEST_CASE("model files round trip byte for byte") {
    std::unordered_map<std::string, std::uint64_t> counts{
        {"alpha", 9}, {"beta", 4}, {"gamma", 2}, {"delta", 1}};
    FrequencyModelConfig cfg;
    cfg.capacity = 3;
    cfg.feature_dim = 128;
    FrequencyModel model = rlam::freq::fit_frequency_model(counts, 16, cfg);

    std::string p1 = "freq_roundtrip_1.bin";
    std::string p2 = "freq_roundtrip_2.bin";
    rlam::freq::save_frequency_model(model, p1);
    FrequencyModel loaded = rlam::freq::load_frequency_model(p1);
    CHECK(loaded.total_tokens == model.total_tokens);
    CHECK(loaded.table == model.table);
    CHECK(loaded.ridge.intercept == model.ridge.intercept);
    CHECK(loaded.ridge.weights == model.ridge.weights);
    CHECK(loaded.word_accessibility("alpha") == model.word_accessibility("alpha"));
    CHECK(loaded.word_accessibility("unseen") == model.word_accessibility("unseen"));

    rlam::freq::save_frequency_model(loaded, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(f1)), {});
    std::string b2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(b1 == b2);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}
