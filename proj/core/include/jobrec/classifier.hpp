#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jobrec/matrix.hpp"

namespace jobrec {

enum class Algorithm {
    LogReg,
    LogRegCV,
    LinearSVM,
    KernelSvmC,
    KernelSvmNu,
    NaiveBayes,
    DecisionTree,
    RandomForest,
};

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

struct Hyperparams {
    Algorithm algorithm = Algorithm::LogReg;
    // shared optimizer knobs; max_iters counts GD steps for LR, epochs for
    // the linear SVM and pair updates for SMO
    double learning_rate = 0.1;
    double l2_strength = 1e-4;
    int max_iters = 1000;
    double tolerance = 1e-6;
    // cross-validated LR
    std::vector<double> l2_grid = {1e-4, 1e-2, 1.0, 100.0};
    int cv_folds = 5;
    // kernel SVM
    double C = 1.0;
    double nu = 0.5;
    double rbf_gamma = 0.0;  // 0 resolves to 1/feature_dim at fit time
    // trees
    int max_depth = 20;
    int min_samples_split = 2;
    int n_trees = 100;
    bool bootstrap = true;  // false disables all forest randomness (debug reduction)
    uint64_t seed = 42;
};

// spec'd per-algorithm defaults (tolerance 1e-3 for kernel SVM, linear SVM
// runs 100 epochs, etc.)
Hyperparams default_hyperparams(Algorithm a);

struct LinearModel {
    std::vector<double> w;
    double w0 = 0.0;
    double selected_l2 = -1.0;  // set by cross-validated training
};

struct KernelSvmModel {
    FeatureMatrix support;          // support vectors, one per row
    std::vector<double> sv_norm_sq; // cached squared norms
    std::vector<double> alpha_y;    // alpha_i * y_i per support vector
    double b = 0.0;
    double gamma = 0.0;
    double c_used = 0.0;   // the C the solver actually ran with
    bool nu_warning = false;  // nu-mode search could not hit the target fraction
};

struct BernoulliNbModel {
    std::vector<double> log_prior;     // 2 entries
    DenseMatrix log_p;                 // 2 x dim, log P(feature=1 | class)
    DenseMatrix log_1mp;               // 2 x dim
    std::vector<double> base_score;    // per class: log_prior + sum log(1-p)
};

struct GaussianNbModel {
    std::vector<double> log_prior;  // 2 entries
    DenseMatrix mean;               // 2 x dim
    DenseMatrix var;                // 2 x dim, floored at 1e-9
};

struct TreeNode {
    int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int32_t left = -1;   // child for x[feature] <= threshold
    int32_t right = -1;
    int32_t label = 0;        // leaf majority label
    double positive_frac = 0.0;  // leaf positive fraction, used as score
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
    std::vector<TreeModel> trees;
};

struct Model {
    Algorithm algorithm = Algorithm::LogReg;
    size_t feature_dim = 0;
    double training_seconds = 0.0;
    std::variant<LinearModel, KernelSvmModel, BernoulliNbModel, GaussianNbModel,
                 TreeModel, ForestModel>
        params;
};

// elementary pieces, exposed for direct testing
double sigmoid(double t);
double linear_score(std::span<const double> w, double w0, std::span<const double> x);
double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma);
double gini_impurity(std::span<const uint64_t> counts);

// All trainers require y in {0,1} with both classes present and record
// wall-clock training_seconds on the returned model.
Model train_logistic_regression(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);
Model cross_validate_select(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);
Model train_linear_svm(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);
Model train_kernel_svm(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);
Model train_naive_bayes(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);
Model train_decision_tree(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);
Model train_random_forest(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);

// dispatch on hp.algorithm
Model train(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp);

// Labels: LR sigmoid >= 0.5 -> 1; SVM decision >= 0 -> 1; NB argmax
// log-posterior (tie -> 1); tree leaf majority; forest majority vote
// (tie -> 0).
std::vector<int> predict(const Model& model, const FeatureMatrix& x);

// LR: probability of class 1; SVM: decision value; NB: log-posterior
// difference; tree: leaf positive fraction; forest: positive vote fraction
std::vector<double> predict_score(const Model& model, const FeatureMatrix& x);

void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in);

}  // namespace jobrec
