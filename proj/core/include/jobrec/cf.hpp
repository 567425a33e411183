#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jobrec/matrix.hpp"
#include "jobrec/profile.hpp"

namespace jobrec {

// Items 0..5 are the six past work-experience slots; item 6 is the
// virtual target-title item, observed for training users only.
struct RatingMatrix {
    static constexpr uint32_t kItems = 7;
    static constexpr uint32_t kTargetItem = 6;

    std::vector<std::string> user_ids;                              // row order
    std::vector<uint8_t> is_train;                                  // per user
    std::vector<int> truth;                                         // per-user label
    std::vector<std::vector<std::pair<uint32_t, double>>> by_user;  // observed (item, rating)

    size_t users() const { return user_ids.size(); }
    size_t observed_count() const;
    std::optional<double> rating(uint32_t user, uint32_t item) const;
};

// Slot ratings: 2 if title matches the target and duration >= 36 months,
// 1 on a match with shorter or absent duration, -1 on a mismatch; empty
// slots stay unobserved.  Rows follow dataset.examples order.
RatingMatrix build_rating_matrix(std::span<const Profile> profiles, const LabeledDataset& dataset);

// "user_id,item_id,rating" with items work_exp1..work_exp6, target
void dump_rating_matrix(std::ostream& out, const RatingMatrix& m);

enum class CfMode { SVDpp, ASVDpp };

const char* cf_mode_name(CfMode m);
std::optional<CfMode> cf_mode_from_name(std::string_view name);

struct CfConfig {
    CfMode mode = CfMode::SVDpp;
    int factors = 20;
    int epochs = 50;
    double learning_rate = 0.007;
    double lambda = 0.02;
    uint64_t seed = 42;

    bool operator==(const CfConfig&) const = default;
};

// Koren-style factorization model.  SVD++ composes the user factor as
// p_u + |N(u)|^-1/2 sum y_j; the asymmetric variant drops p_u and uses
// |R(u)|^-1/2 sum (r_uj - b_uj) x_j + |N(u)|^-1/2 sum y_j with baseline
// b_uj = mu + b_u + b_j.  N(u) and R(u) are the user's observed items
// other than the one being predicted (every observation carries an
// explicit rating; leaving the predicted item out keeps training
// consistent with serving, where that rating is unknown).
struct CFModel {
    CfMode mode = CfMode::SVDpp;
    CfConfig config;
    double mu = 0.0;
    std::vector<double> b_user;
    std::vector<double> b_item;  // kItems entries
    DenseMatrix q;               // items x f
    DenseMatrix p;               // users x f (SVD++ only)
    DenseMatrix y;               // items x f
    DenseMatrix x;               // items x f (ASVD++ only)
    std::vector<std::vector<std::pair<uint32_t, double>>> by_user;  // copied feedback sets
    std::vector<double> epoch_rmse;  // observed-cell RMSE after each epoch
};

CFModel train_cf(const RatingMatrix& matrix, const CfConfig& config);

// Out-of-range user -> mu + b_i; out-of-range item -> mu + b_u.
double predict_rating(const CFModel& model, uint32_t user, uint32_t item);

// Per-observation loss: squared error / 2 plus lambda/2 times the squared
// norms of the touched parameters (b_u, b_i, q_i, p_u or x_j, y_j).  The
// training step applies exactly the analytic gradient of this loss; in the
// asymmetric mode that includes the coupling of the biases through the
// rated-item deviations, so finite differences of cf_observation_loss
// match cf_observation_grads for every parameter.
struct CfGradients {
    double b_user = 0.0;
    std::vector<std::pair<uint32_t, double>> b_items;         // item bias gradients
    std::vector<double> q;
    std::vector<double> p;                                    // SVD++ only
    std::vector<std::pair<uint32_t, std::vector<double>>> y;  // per j in N(u)
    std::vector<std::pair<uint32_t, std::vector<double>>> x;  // per j in R(u), ASVD++ only
};
double cf_observation_loss(const CFModel& model, uint32_t user, uint32_t item, double rating);
CfGradients cf_observation_grads(const CFModel& model, uint32_t user, uint32_t item, double rating);

// r-hat on the virtual target item, label 1 iff it exceeds the threshold
std::vector<int> classify_from_cf(const CFModel& model, std::span<const uint32_t> users,
                                  double threshold = 0.0);

}  // namespace jobrec
