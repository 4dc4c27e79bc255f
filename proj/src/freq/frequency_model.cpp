#include "rlam/freq/frequency_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlam/io/binary.hpp"
#include "rlam/text/tokenizer.hpp"

namespace rlam::freq {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(const char* data, std::size_t n) {
    std::uint64_t h = kFnvOffset;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= kFnvPrime;
    }
    return h;
}

void validate_dim(std::int32_t feature_dim) {
    if (feature_dim < 2)
        throw std::invalid_argument("feature_dim must be at least 2");
}

}  // namespace

SparseFeatures featurize(std::string_view token, std::int32_t feature_dim) {
    validate_dim(feature_dim);
    const std::uint64_t buckets = static_cast<std::uint64_t>(feature_dim) - 1;
    std::vector<std::pair<std::int32_t, double>> acc;
    acc.reserve(3 * token.size() + 1);
    double len = static_cast<double>(text::codepoint_count(token));
    if (len != 0.0) acc.emplace_back(0, len);
    for (std::size_t n = 1; n <= 3; ++n) {
        if (token.size() < n) break;
        for (std::size_t i = 0; i + n <= token.size(); ++i) {
            std::uint64_t h = fnv1a(token.data() + i, n);
            std::int32_t idx = static_cast<std::int32_t>(1 + h % buckets);
            double sign = (h >> 63) ? -1.0 : 1.0;
            acc.emplace_back(idx, sign);
        }
    }
    std::sort(acc.begin(), acc.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseFeatures out;
    out.items.reserve(acc.size());
    for (const auto& [idx, val] : acc) {
        if (!out.items.empty() && out.items.back().first == idx) {
            out.items.back().second += val;
        } else {
            out.items.emplace_back(idx, val);
        }
    }
    std::erase_if(out.items, [](const auto& p) { return p.second == 0.0; });
    return out;
}

double RidgeModel::predict(const SparseFeatures& x) const {
    double y = intercept;
    for (const auto& [idx, val] : x.items) y += weights[idx] * val;
    return y;
}

double RidgeModel::predict(std::string_view token) const {
    return predict(featurize(token, feature_dim));
}

RidgeModel train_ridge(const std::vector<SparseFeatures>& rows,
                       const Eigen::VectorXd& targets, std::int32_t feature_dim,
                       double l2) {
    validate_dim(feature_dim);
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    if (n_rows == 0) throw std::invalid_argument("no training rows");
    if (targets.size() != n_rows)
        throw std::invalid_argument("targets size does not match rows");
    if (l2 < 0.0) throw std::invalid_argument("l2 must be non-negative");

    const Eigen::Index dim = feature_dim;
    Eigen::VectorXd col_mean = Eigen::VectorXd::Zero(dim);
    for (const auto& row : rows)
        for (const auto& [idx, val] : row.items) col_mean[idx] += val;
    col_mean /= static_cast<double>(n_rows);
    const double y_mean = targets.mean();

    auto matvec_x = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd u(n_rows);
        for (Eigen::Index r = 0; r < n_rows; ++r) {
            double s = 0.0;
            for (const auto& [idx, val] : rows[r].items) s += v[idx] * val;
            u[r] = s;
        }
        return u;
    };
    auto matvec_xt = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index r = 0; r < n_rows; ++r)
            for (const auto& [idx, val] : rows[r].items) v[idx] += u[r] * val;
        return v;
    };
    // A v = Xcᵀ Xc v + λ v with Xc the column-centered design matrix.
    auto apply_a = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd xv = matvec_x(v);
        xv.array() -= col_mean.dot(v);
        Eigen::VectorXd out = matvec_xt(xv);
        out -= col_mean * xv.sum();
        out += l2 * v;
        return out;
    };

    Eigen::VectorXd y_c = targets.array() - y_mean;
    Eigen::VectorXd rhs = matvec_xt(y_c);
    rhs -= col_mean * y_c.sum();

    RidgeModel model;
    model.feature_dim = feature_dim;
    model.weights = Eigen::VectorXd::Zero(dim);

    const double rhs_norm2 = rhs.squaredNorm();
    if (rhs_norm2 > 0.0) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd r = rhs;
        Eigen::VectorXd p = r;
        double rs = r.squaredNorm();
        const double tol2 = 1e-24 * rhs_norm2;
        const int max_iters = static_cast<int>(
            std::min<Eigen::Index>(dim, n_rows + 20) + 50);
        for (int it = 0; it < std::min(max_iters, 4000) && rs > tol2; ++it) {
            Eigen::VectorXd ap = apply_a(p);
            double denom = p.dot(ap);
            if (denom <= 0.0) break;
            double alpha = rs / denom;
            w += alpha * p;
            r -= alpha * ap;
            double rs_new = r.squaredNorm();
            p = r + (rs_new / rs) * p;
            rs = rs_new;
        }
        model.weights = w;
    }
    model.intercept = y_mean - model.weights.dot(col_mean);
    return model;
}

bool FrequencyModel::in_table(std::string_view token) const {
    return lookup_.find(std::string(token)) != lookup_.end();
}

const std::uint64_t* FrequencyModel::table_count(std::string_view token) const {
    auto it = lookup_.find(std::string(token));
    return it == lookup_.end() ? nullptr : &it->second;
}

void FrequencyModel::rebuild_lookup() {
    lookup_.clear();
    lookup_.reserve(table.size());
    for (const auto& [token, count] : table) lookup_.emplace(token, count);
}

double FrequencyModel::word_accessibility(std::string_view token) const {
    if (const std::uint64_t* count = table_count(token)) {
        return std::log(static_cast<double>(*count) /
                        static_cast<double>(total_tokens) * 1e9);
    }
    return ridge.predict(token);
}

FrequencyModel fit_frequency_model(
    const std::unordered_map<std::string, std::uint64_t>& type_counts,
    std::uint64_t total_tokens, const FrequencyModelConfig& config) {
    if (type_counts.empty() || total_tokens == 0)
        throw std::invalid_argument("cannot fit a frequency model from an empty corpus");
    if (config.capacity == 0) throw std::invalid_argument("capacity must be positive");
    validate_dim(config.feature_dim);

    FrequencyModel model;
    model.total_tokens = total_tokens;
    model.table.assign(type_counts.begin(), type_counts.end());
    std::sort(model.table.begin(), model.table.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (model.table.size() > config.capacity) model.table.resize(config.capacity);

    std::vector<SparseFeatures> rows;
    rows.reserve(model.table.size());
    Eigen::VectorXd targets(static_cast<Eigen::Index>(model.table.size()));
    for (std::size_t i = 0; i < model.table.size(); ++i) {
        rows.push_back(featurize(model.table[i].first, config.feature_dim));
        targets[static_cast<Eigen::Index>(i)] =
            std::log(static_cast<double>(model.table[i].second) /
                     static_cast<double>(total_tokens) * 1e9);
    }
    model.ridge = train_ridge(rows, targets, config.feature_dim, config.l2);
    model.rebuild_lookup();
    return model;
}

std::uint64_t count_word_tokens(
    std::string_view text, std::unordered_map<std::string, std::uint64_t>& type_counts) {
    auto doc = text::tokenize(text);
    std::uint64_t added = 0;
    for (const auto& sentence : doc.sentences) {
        for (const auto& token : sentence) {
            if (!text::is_word_token(token)) continue;
            ++type_counts[token];
            ++added;
        }
    }
    return added;
}

void save_frequency_model(const FrequencyModel& model, const std::string& path) {
    io::BinaryWriter w(path);
    w.magic("RLAMFREQ");
    w.u32(1);
    w.u64(model.total_tokens);
    w.u64(model.table.size());
    for (const auto& [token, count] : model.table) {
        w.str(token);
        w.u64(count);
    }
    w.i32(model.ridge.feature_dim);
    w.f64(model.ridge.intercept);
    w.u64(static_cast<std::uint64_t>(model.ridge.weights.size()));
    for (Eigen::Index i = 0; i < model.ridge.weights.size(); ++i)
        w.f64(model.ridge.weights[i]);
    w.close();
}

FrequencyModel load_frequency_model(const std::string& path) {
    io::BinaryReader r(path);
    r.expect_magic("RLAMFREQ");
    std::uint32_t version = r.u32();
    if (version != 1) throw std::runtime_error("unsupported model file version");
    FrequencyModel model;
    model.total_tokens = r.u64();
    std::uint64_t entries = r.u64();
    model.table.reserve(entries);
    for (std::uint64_t i = 0; i < entries; ++i) {
        std::string token = r.str();
        std::uint64_t count = r.u64();
        model.table.emplace_back(std::move(token), count);
    }
    model.ridge.feature_dim = r.i32();
    model.ridge.intercept = r.f64();
    std::uint64_t dim = r.u64();
    model.ridge.weights.resize(static_cast<Eigen::Index>(dim));
    for (std::uint64_t i = 0; i < dim; ++i)
        model.ridge.weights[static_cast<Eigen::Index>(i)] = r.f64();
    model.rebuild_lookup();
    return model;
}

}  // namespace rlam::freq
