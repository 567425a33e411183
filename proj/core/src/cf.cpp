#include "jobrec/cf.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "jobrec/error.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {

namespace {

constexpr double kLongTenureMonths = 36.0;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

// 1/sqrt(n), with the empty set contributing nothing
double implicit_scale(size_t n) { return n == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(n)); }

// Observed items feeding the user factor when predicting `item`: the
// predicted item is left out, so a prediction never conditions on the
// rating it reproduces and training matches serving, where that rating
// is unknown.
size_t feedback_size(const CFModel& m, uint32_t user, uint32_t item) {
    size_t n = 0;
    for (const auto& [j, r] : m.by_user[user]) n += j != item;
    return n;
}

// User composite factor: p_u + |N|^-1/2 sum y_j, or for the asymmetric
// mode |R|^-1/2 sum (r_uj - b_uj) x_j + |N|^-1/2 sum y_j, with N and R
// the user's observed items other than the one being predicted.
std::vector<double> user_composite(const CFModel& m, uint32_t user, uint32_t item) {
    const auto& obs = m.by_user[user];
    const size_t f = static_cast<size_t>(m.config.factors);
    std::vector<double> z(f, 0.0);
    const double nf = implicit_scale(feedback_size(m, user, item));
    if (m.mode == CfMode::SVDpp) {
        auto pu = m.p.row(user);
        std::copy(pu.begin(), pu.end(), z.begin());
    } else {
        for (const auto& [j, r] : obs) {
            if (j == item) continue;
            const double dev = r - (m.mu + m.b_user[user] + m.b_item[j]);
            auto xj = m.x.row(j);
            for (size_t k = 0; k < f; ++k) z[k] += nf * dev * xj[k];
        }
    }
    for (const auto& [j, r] : obs) {
        if (j == item) continue;
        auto yj = m.y.row(j);
        for (size_t k = 0; k < f; ++k) z[k] += nf * yj[k];
    }
    return z;
}

void init_uniform(DenseMatrix& m, Rng& rng) {
    for (double& v : m.data()) v = rng.uniform(-0.05, 0.05);
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

size_t RatingMatrix::observed_count() const {
    size_t n = 0;
    for (const auto& obs : by_user) n += obs.size();
    return n;
}

std::optional<double> RatingMatrix::rating(uint32_t user, uint32_t item) const {
    if (user >= by_user.size()) return std::nullopt;
    for (const auto& [j, r] : by_user[user])
        if (j == item) return r;
    return std::nullopt;
}

RatingMatrix build_rating_matrix(std::span<const Profile> profiles, const LabeledDataset& dataset) {
    const std::string target = normalize_title(dataset.target_title);
    RatingMatrix m;
    m.user_ids.reserve(dataset.examples.size());
    m.is_train.assign(dataset.examples.size(), 0);
    for (size_t idx : dataset.train) m.is_train[idx] = 1;

    for (size_t e = 0; e < dataset.examples.size(); ++e) {
        const auto& [pi, label] = dataset.examples[e];
        const Profile& p = profiles[pi];
        m.user_ids.push_back(p.id);
        m.truth.push_back(label);
        std::vector<std::pair<uint32_t, double>> obs;
        for (uint32_t slot = 0; slot < 6; ++slot) {
            const auto& job = p.past_jobs[slot];
            if (!job || job->job_title.empty()) continue;
            double r;
            if (normalize_title(job->job_title) == target) {
                const bool long_tenure =
                    job->duration_months && *job->duration_months >= kLongTenureMonths;
                r = long_tenure ? 2.0 : 1.0;
            } else {
                r = -1.0;
            }
            obs.emplace_back(slot, r);
        }
        if (m.is_train[e]) obs.emplace_back(RatingMatrix::kTargetItem, label == 1 ? 2.0 : -1.0);
        m.by_user.push_back(std::move(obs));
    }
    return m;
}

void dump_rating_matrix(std::ostream& out, const RatingMatrix& m) {
    out << "user_id,item_id,rating\n";
    for (size_t u = 0; u < m.users(); ++u) {
        for (const auto& [item, r] : m.by_user[u]) {
            out << m.user_ids[u] << ',';
            if (item == RatingMatrix::kTargetItem)
                out << "target";
            else
                out << "work_exp" << (item + 1);
            out << ',' << static_cast<long long>(std::llround(r)) << '\n';
        }
    }
}

const char* cf_mode_name(CfMode m) { return m == CfMode::SVDpp ? "svdpp" : "asvdpp"; }

std::optional<CfMode> cf_mode_from_name(std::string_view name) {
    if (name == "svdpp") return CfMode::SVDpp;
    if (name == "asvdpp") return CfMode::ASVDpp;
    return std::nullopt;
}

double predict_rating(const CFModel& model, uint32_t user, uint32_t item) {
    const bool known_user = user < model.b_user.size();
    const bool known_item = item < RatingMatrix::kItems;
    if (!known_user && !known_item) return model.mu;
    if (!known_user) return model.mu + model.b_item[item];
    if (!known_item) return model.mu + model.b_user[user];
    const std::vector<double> z = user_composite(model, user, item);
    return model.mu + model.b_user[user] + model.b_item[item] + dot(model.q.row(item), z);
}

double cf_observation_loss(const CFModel& model, uint32_t user, uint32_t item, double rating) {
    const double err = predict_rating(model, user, item) - rating;
    const double lambda = model.config.lambda;
    double reg = model.b_user[user] * model.b_user[user] + model.b_item[item] * model.b_item[item] +
                 norm_sq(model.q.row(item));
    if (model.mode == CfMode::SVDpp) reg += norm_sq(model.p.row(user));
    for (const auto& [j, r] : model.by_user[user]) {
        if (j == item) continue;
        reg += norm_sq(model.y.row(j));
        if (model.mode == CfMode::ASVDpp) reg += norm_sq(model.x.row(j));
    }
    return 0.5 * err * err + 0.5 * lambda * reg;
}

CfGradients cf_observation_grads(const CFModel& model, uint32_t user, uint32_t item,
                                 double rating) {
    const size_t f = static_cast<size_t>(model.config.factors);
    const double lambda = model.config.lambda;
    const auto& obs = model.by_user[user];
    const double nf = implicit_scale(feedback_size(model, user, item));

    const std::vector<double> z = user_composite(model, user, item);
    const auto qi = model.q.row(item);
    const double err = model.mu + model.b_user[user] + model.b_item[item] + dot(qi, z) - rating;

    CfGradients g;
    g.q.resize(f);
    for (size_t k = 0; k < f; ++k) g.q[k] = err * z[k] + lambda * qi[k];

    g.y.reserve(obs.size());
    for (const auto& [j, r] : obs) {
        if (j == item) continue;
        auto yj = model.y.row(j);
        std::vector<double> gy(f);
        for (size_t k = 0; k < f; ++k) gy[k] = err * nf * qi[k] + lambda * yj[k];
        g.y.emplace_back(j, std::move(gy));
    }

    if (model.mode == CfMode::SVDpp) {
        g.b_user = err + lambda * model.b_user[user];
        g.b_items.emplace_back(item, err + lambda * model.b_item[item]);
        auto pu = model.p.row(user);
        g.p.resize(f);
        for (size_t k = 0; k < f; ++k) g.p[k] = err * qi[k] + lambda * pu[k];
        return g;
    }

    // The rated-item deviations (r_uj - mu - b_u - b_j) pull b_u and every
    // contributing b_j into the prediction, so those biases pick up a
    // coupling term of -err * nf * (q_i . x_j) on top of the usual direct
    // gradient.
    double coupling_sum = 0.0;
    g.x.reserve(obs.size());
    for (const auto& [j, r] : obs) {
        if (j == item) continue;
        auto xj = model.x.row(j);
        const double qx = dot(qi, xj);
        coupling_sum += qx;
        g.b_items.emplace_back(j, -err * nf * qx);

        const double dev = r - (model.mu + model.b_user[user] + model.b_item[j]);
        std::vector<double> gx(f);
        for (size_t k = 0; k < f; ++k) gx[k] = err * nf * dev * qi[k] + lambda * xj[k];
        g.x.emplace_back(j, std::move(gx));
    }
    g.b_items.emplace_back(item, err + lambda * model.b_item[item]);
    g.b_user = err * (1.0 - nf * coupling_sum) + lambda * model.b_user[user];
    return g;
}

CFModel train_cf(const RatingMatrix& matrix, const CfConfig& config) {
    if (config.factors < 1) config_error("cf factors must be >= 1");
    if (config.epochs < 0) config_error("cf epochs must be >= 0");
    if (config.learning_rate <= 0.0) config_error("cf learning_rate must be positive");
    if (config.lambda < 0.0) config_error("cf lambda must be non-negative");
    const size_t n_obs = matrix.observed_count();
    if (n_obs == 0) data_error("rating matrix has no observed cells");

    const size_t f = static_cast<size_t>(config.factors);
    const size_t users = matrix.users();

    CFModel m;
    m.mode = config.mode;
    m.config = config;
    m.by_user = matrix.by_user;
    m.b_user.assign(users, 0.0);
    m.b_item.assign(RatingMatrix::kItems, 0.0);

    double sum = 0.0;
    for (const auto& obs : matrix.by_user)
        for (const auto& [j, r] : obs) sum += r;
    m.mu = sum / static_cast<double>(n_obs);

    Rng rng(config.seed);
    m.q = DenseMatrix(RatingMatrix::kItems, f);
    init_uniform(m.q, rng);
    if (config.mode == CfMode::SVDpp) {
        m.p = DenseMatrix(users, f);
        init_uniform(m.p, rng);
    }
    m.y = DenseMatrix(RatingMatrix::kItems, f);
    init_uniform(m.y, rng);
    if (config.mode == CfMode::ASVDpp) {
        m.x = DenseMatrix(RatingMatrix::kItems, f);
        init_uniform(m.x, rng);
    }

    std::vector<std::pair<uint32_t, uint32_t>> order;  // (user, index into by_user[user])
    order.reserve(n_obs);
    for (uint32_t u = 0; u < users; ++u)
        for (uint32_t k = 0; k < m.by_user[u].size(); ++k) order.emplace_back(u, k);

    const double lr = config.learning_rate;
    m.epoch_rmse.reserve(static_cast<size_t>(config.epochs));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (const auto& [u, k] : order) {
            const auto& [item, rating] = m.by_user[u][k];
            const CfGradients g = cf_observation_grads(m, u, item, rating);
            m.b_user[u] -= lr * g.b_user;
            for (const auto& [j, gb] : g.b_items) m.b_item[j] -= lr * gb;
            auto qi = m.q.row(item);
            for (size_t d = 0; d < f; ++d) qi[d] -= lr * g.q[d];
            if (m.mode == CfMode::SVDpp) {
                auto pu = m.p.row(u);
                for (size_t d = 0; d < f; ++d) pu[d] -= lr * g.p[d];
            }
            for (const auto& [j, gy] : g.y) {
                auto yj = m.y.row(j);
                for (size_t d = 0; d < f; ++d) yj[d] -= lr * gy[d];
            }
            for (const auto& [j, gx] : g.x) {
                auto xj = m.x.row(j);
                for (size_t d = 0; d < f; ++d) xj[d] -= lr * gx[d];
            }
        }

        double sq = 0.0;
        for (uint32_t u = 0; u < users; ++u) {
            for (const auto& [item, rating] : m.by_user[u]) {
                const double e = predict_rating(m, u, item) - rating;
                sq += e * e;
            }
        }
        const double rmse = std::sqrt(sq / static_cast<double>(n_obs));
        if (!std::isfinite(rmse) || !all_finite(m.b_user) || !all_finite(m.b_item) ||
            !all_finite(m.q.data()) || !all_finite(m.p.data()) || !all_finite(m.y.data()) ||
            !all_finite(m.x.data()))
            data_error("cf training diverged at epoch " + std::to_string(epoch + 1));
        m.epoch_rmse.push_back(rmse);
    }
    return m;
}

std::vector<int> classify_from_cf(const CFModel& model, std::span<const uint32_t> users,
                                  double threshold) {
    std::vector<int> labels;
    labels.reserve(users.size());
    for (uint32_t u : users)
        labels.push_back(predict_rating(model, u, RatingMatrix::kTargetItem) > threshold ? 1 : 0);
    return labels;
}

}  // namespace jobrec
