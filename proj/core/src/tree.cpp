#include <algorithm>
#include <cmath>
#include <numeric>

#include "classifier_internal.hpp"
#include "jobrec/classifier.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {

double gini_impurity(std::span<const uint64_t> counts) {
    uint64_t total = 0;
    for (uint64_t c : counts) total += c;
    if (total == 0) data_error("gini_impurity: zero total count");
    double g = 1.0;
    for (uint64_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

namespace {

struct SplitChoice {
    bool found = false;
    int32_t feature = -1;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

double gini2(uint64_t c0, uint64_t c1) {
    uint64_t counts[2] = {c0, c1};
    return gini_impurity(counts);
}

// Greedy CART builder over row multisets (bootstrap repeats rows).  If
// feature_sample > 0, each node draws that many distinct candidate
// features from rng; otherwise every feature is a candidate.  Sparse
// binary input uses a counting path (the only threshold is 0.5); both
// paths pick identical splits on 0/1 data.
class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp,
                size_t feature_sample, Rng* rng)
        : x_(x), y_(y), hp_(hp), feature_sample_(feature_sample), rng_(rng) {
        if (x_.is_sparse()) {
            stamp_.assign(x_.cols(), 0);
            ones_total_.assign(x_.cols(), 0);
            ones_pos_.assign(x_.cols(), 0);
        }
    }

    TreeModel build(std::vector<size_t> rows) {
        TreeModel t;
        grow(std::move(rows), 0, t);
        return t;
    }

private:
    int32_t grow(std::vector<size_t> rows, int depth, TreeModel& t) {
        uint64_t c1 = 0;
        for (size_t r : rows) c1 += static_cast<uint64_t>(y_[r]);
        uint64_t c0 = rows.size() - c1;

        int32_t id = static_cast<int32_t>(t.nodes.size());
        t.nodes.emplace_back();
        auto make_leaf = [&](int32_t node) {
            t.nodes[static_cast<size_t>(node)].feature = -1;
            t.nodes[static_cast<size_t>(node)].label = c1 > c0 ? 1 : 0;  // tie -> 0
            t.nodes[static_cast<size_t>(node)].positive_frac =
                static_cast<double>(c1) / static_cast<double>(rows.size());
        };

        if (c0 == 0 || c1 == 0 || depth >= hp_.max_depth ||
            rows.size() < static_cast<size_t>(hp_.min_samples_split)) {
            make_leaf(id);
            return id;
        }

        std::vector<uint32_t> sampled;
        if (feature_sample_ > 0 && feature_sample_ < x_.cols()) sampled = sample_features();

        double node_gini = gini2(c0, c1);
        SplitChoice best = x_.is_sparse() ? choose_split_sparse(rows, c1, node_gini, sampled)
                                          : choose_split_dense(rows, node_gini, sampled);
        if (!best.found) {
            make_leaf(id);
            return id;
        }

        std::vector<size_t> left, right;
        for (size_t r : rows) {
            if (x_.get(r, static_cast<size_t>(best.feature)) <= best.threshold) left.push_back(r);
            else right.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        t.nodes[static_cast<size_t>(id)].feature = best.feature;
        t.nodes[static_cast<size_t>(id)].threshold = best.threshold;
        int32_t l = grow(std::move(left), depth + 1, t);
        int32_t r = grow(std::move(right), depth + 1, t);
        t.nodes[static_cast<size_t>(id)].left = l;
        t.nodes[static_cast<size_t>(id)].right = r;
        return id;
    }

    // distinct feature indices, ascending so the lowest-index tie-break
    // does not depend on draw order
    std::vector<uint32_t> sample_features() {
        size_t dim = x_.cols();
        std::vector<uint32_t> all(dim);
        std::iota(all.begin(), all.end(), 0);
        for (size_t i = 0; i < feature_sample_; ++i) {
            size_t j = i + static_cast<size_t>(rng_->below(dim - i));
            std::swap(all[i], all[j]);
        }
        all.resize(feature_sample_);
        std::sort(all.begin(), all.end());
        return all;
    }

    void consider(SplitChoice& best, double node_gini, uint32_t f, double thr, uint64_t n,
                  uint64_t nl, uint64_t left1, uint64_t total1) const {
        uint64_t nr = n - nl;
        uint64_t right1 = total1 - left1;
        double wg = (static_cast<double>(nl) * gini2(nl - left1, left1) +
                     static_cast<double>(nr) * gini2(nr - right1, right1)) /
                    static_cast<double>(n);
        if (wg >= node_gini - 1e-12) return;
        // strict < keeps the first (lowest feature, lowest threshold)
        // among equal-gain candidates
        if (!best.found || wg < best.weighted_gini) {
            best.found = true;
            best.feature = static_cast<int32_t>(f);
            best.threshold = thr;
            best.weighted_gini = wg;
        }
    }

    SplitChoice choose_split_sparse(const std::vector<size_t>& rows, uint64_t total1,
                                    double node_gini, const std::vector<uint32_t>& sampled) {
        ++stamp_value_;
        touched_.clear();
        const auto& s = x_.sparse();
        for (size_t r : rows) {
            uint64_t lab = static_cast<uint64_t>(y_[r]);
            for (uint32_t j : s.row(r)) {
                if (stamp_[j] != stamp_value_) {
                    stamp_[j] = stamp_value_;
                    ones_total_[j] = 0;
                    ones_pos_[j] = 0;
                    touched_.push_back(j);
                }
                ++ones_total_[j];
                ones_pos_[j] += lab;
            }
        }

        SplitChoice best;
        uint64_t n = rows.size();
        auto evaluate = [&](uint32_t f) {
            uint64_t n1 = stamp_[f] == stamp_value_ ? ones_total_[f] : 0;
            if (n1 == 0 || n1 == n) return;  // constant in this node
            uint64_t ones_p = stamp_[f] == stamp_value_ ? ones_pos_[f] : 0;
            // left child takes the zeros (value <= 0.5)
            consider(best, node_gini, f, 0.5, n, n - n1, total1 - ones_p, total1);
        };
        if (!sampled.empty()) {
            for (uint32_t f : sampled) evaluate(f);
        } else {
            std::sort(touched_.begin(), touched_.end());
            for (uint32_t f : touched_) evaluate(f);
        }
        return best;
    }

    SplitChoice choose_split_dense(const std::vector<size_t>& rows, double node_gini,
                                   const std::vector<uint32_t>& sampled) {
        std::vector<uint32_t> all;
        if (sampled.empty()) {
            all.resize(x_.cols());
            std::iota(all.begin(), all.end(), 0);
        }
        const std::vector<uint32_t>& features = sampled.empty() ? all : sampled;

        SplitChoice best;
        uint64_t n = rows.size();
        uint64_t total1 = 0;
        for (size_t r : rows) total1 += static_cast<uint64_t>(y_[r]);

        std::vector<std::pair<double, int>> vals;
        for (uint32_t f : features) {
            vals.clear();
            vals.reserve(rows.size());
            for (size_t r : rows) vals.emplace_back(x_.get(r, f), y_[r]);
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (vals.front().first == vals.back().first) continue;

            uint64_t left1 = 0;
            for (size_t i = 0; i + 1 < vals.size(); ++i) {
                left1 += static_cast<uint64_t>(vals[i].second);
                if (vals[i].first == vals[i + 1].first) continue;
                double thr = (vals[i].first + vals[i + 1].first) / 2.0;
                consider(best, node_gini, f, thr, n, i + 1, left1, total1);
            }
        }
        return best;
    }

    const FeatureMatrix& x_;
    std::span<const int> y_;
    const Hyperparams& hp_;
    size_t feature_sample_;
    Rng* rng_;

    // per-node feature tallies for the sparse path, stamp-invalidated
    std::vector<uint32_t> stamp_;
    uint32_t stamp_value_ = 0;
    std::vector<uint64_t> ones_total_;
    std::vector<uint64_t> ones_pos_;
    std::vector<uint32_t> touched_;
};

}  // namespace

Model train_decision_tree(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp) {
    detail::check_labels(x, y);
    detail::FitTimer timer;

    std::vector<size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), 0);
    TreeBuilder builder(x, y, hp, 0, nullptr);

    Model m;
    m.algorithm = Algorithm::DecisionTree;
    m.feature_dim = x.cols();
    m.params = builder.build(std::move(rows));
    m.training_seconds = timer.seconds();
    return m;
}

Model train_random_forest(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp) {
    detail::check_labels(x, y);
    detail::FitTimer timer;
    if (hp.n_trees < 1) config_error("random forest needs n_trees >= 1");

    size_t n = x.rows();
    size_t mtry = hp.bootstrap
                      ? static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols()))))
                      : 0;  // bootstrap off: no row resampling, no feature sampling

    ForestModel forest;
    forest.trees.reserve(static_cast<size_t>(hp.n_trees));
    for (int t = 0; t < hp.n_trees; ++t) {
        // per-tree stream: master seed + tree index
        Rng rng(hp.seed + static_cast<uint64_t>(t));
        std::vector<size_t> rows(n);
        if (hp.bootstrap) {
            for (auto& r : rows) r = static_cast<size_t>(rng.below(n));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        TreeBuilder builder(x, y, hp, mtry, &rng);
        forest.trees.push_back(builder.build(std::move(rows)));
    }

    Model m;
    m.algorithm = Algorithm::RandomForest;
    m.feature_dim = x.cols();
    m.params = std::move(forest);
    m.training_seconds = timer.seconds();
    return m;
}

}  // namespace jobrec
