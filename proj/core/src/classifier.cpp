#include "jobrec/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "classifier_internal.hpp"
#include "jobrec/tensor_io.hpp"

namespace jobrec {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::LogReg: return "logreg";
        case Algorithm::LogRegCV: return "logreg_cv";
        case Algorithm::LinearSVM: return "linear_svm";
        case Algorithm::KernelSvmC: return "svc";
        case Algorithm::KernelSvmNu: return "nusvc";
        case Algorithm::NaiveBayes: return "naive_bayes";
        case Algorithm::DecisionTree: return "decision_tree";
        case Algorithm::RandomForest: return "random_forest";
    }
    return "logreg";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    for (Algorithm a : {Algorithm::LogReg, Algorithm::LogRegCV, Algorithm::LinearSVM,
                        Algorithm::KernelSvmC, Algorithm::KernelSvmNu, Algorithm::NaiveBayes,
                        Algorithm::DecisionTree, Algorithm::RandomForest}) {
        if (name == algorithm_name(a)) return a;
    }
    return std::nullopt;
}

Hyperparams default_hyperparams(Algorithm a) {
    Hyperparams hp;
    hp.algorithm = a;
    switch (a) {
        case Algorithm::LogReg:
        case Algorithm::LogRegCV:
            break;  // struct defaults are the LR defaults
        case Algorithm::LinearSVM:
            hp.max_iters = 100;  // epochs
            break;
        case Algorithm::KernelSvmC:
        case Algorithm::KernelSvmNu:
            hp.tolerance = 1e-3;
            hp.max_iters = 100000;  // pair-update cap
            break;
        case Algorithm::NaiveBayes:
        case Algorithm::DecisionTree:
        case Algorithm::RandomForest:
            break;
    }
    return hp;
}

Model train(const FeatureMatrix& x, std::span<const int> y, const Hyperparams& hp) {
    switch (hp.algorithm) {
        case Algorithm::LogReg: return train_logistic_regression(x, y, hp);
        case Algorithm::LogRegCV: return cross_validate_select(x, y, hp);
        case Algorithm::LinearSVM: return train_linear_svm(x, y, hp);
        case Algorithm::KernelSvmC:
        case Algorithm::KernelSvmNu: return train_kernel_svm(x, y, hp);
        case Algorithm::NaiveBayes: return train_naive_bayes(x, y, hp);
        case Algorithm::DecisionTree: return train_decision_tree(x, y, hp);
        case Algorithm::RandomForest: return train_random_forest(x, y, hp);
    }
    config_error("unknown algorithm");
}

namespace {

void check_width(const Model& m, const FeatureMatrix& x) {
    if (x.cols() != m.feature_dim)
        data_error("predict: matrix has " + std::to_string(x.cols()) +
                   " features, model expects " + std::to_string(m.feature_dim));
}

double kernel_decision(const KernelSvmModel& km, const FeatureMatrix& x, size_t i,
                       double x_norm_sq) {
    double s = km.b;
    for (size_t v = 0; v < km.alpha_y.size(); ++v) {
        double d2 = km.sv_norm_sq[v] + x_norm_sq - 2.0 * FeatureMatrix::row_dot_row(km.support, v, x, i);
        s += km.alpha_y[v] * std::exp(-km.gamma * std::max(d2, 0.0));
    }
    return s;
}

double bernoulli_class_score(const BernoulliNbModel& nb, int c, const FeatureMatrix& x, size_t i) {
    size_t cc = static_cast<size_t>(c);
    double s = nb.base_score[cc];
    if (x.is_sparse()) {
        for (uint32_t j : x.sparse().row(i))
            s += nb.log_p.at(cc, j) - nb.log_1mp.at(cc, j);
    } else {
        auto r = x.dense().row(i);
        for (size_t j = 0; j < r.size(); ++j)
            if (r[j] != 0.0) s += nb.log_p.at(cc, j) - nb.log_1mp.at(cc, j);
    }
    return s;
}

double gaussian_class_score(const GaussianNbModel& nb, int c, const FeatureMatrix& x, size_t i) {
    size_t cc = static_cast<size_t>(c);
    double s = nb.log_prior[cc];
    constexpr double kLog2Pi = 1.8378770664093453;
    for (size_t j = 0; j < nb.mean.cols(); ++j) {
        double d = x.get(i, j) - nb.mean.at(cc, j);
        double var = nb.var.at(cc, j);
        s -= 0.5 * (kLog2Pi + std::log(var) + d * d / var);
    }
    return s;
}

int tree_leaf(const TreeModel& t, const FeatureMatrix& x, size_t i) {
    int32_t node = 0;
    while (t.nodes[static_cast<size_t>(node)].feature >= 0) {
        const TreeNode& nd = t.nodes[static_cast<size_t>(node)];
        node = x.get(i, static_cast<size_t>(nd.feature)) <= nd.threshold ? nd.left : nd.right;
    }
    return node;
}

// score convention per algorithm; label threshold applied by predict()
double score_one(const Model& m, const FeatureMatrix& x, size_t i, double x_norm_sq) {
    switch (m.algorithm) {
        case Algorithm::LogReg:
        case Algorithm::LogRegCV: {
            const auto& lm = std::get<LinearModel>(m.params);
            return sigmoid(x.row_dot(i, lm.w) + lm.w0);
        }
        case Algorithm::LinearSVM: {
            const auto& lm = std::get<LinearModel>(m.params);
            return x.row_dot(i, lm.w) + lm.w0;
        }
        case Algorithm::KernelSvmC:
        case Algorithm::KernelSvmNu:
            return kernel_decision(std::get<KernelSvmModel>(m.params), x, i, x_norm_sq);
        case Algorithm::NaiveBayes: {
            if (std::holds_alternative<BernoulliNbModel>(m.params)) {
                const auto& nb = std::get<BernoulliNbModel>(m.params);
                return bernoulli_class_score(nb, 1, x, i) - bernoulli_class_score(nb, 0, x, i);
            }
            const auto& nb = std::get<GaussianNbModel>(m.params);
            return gaussian_class_score(nb, 1, x, i) - gaussian_class_score(nb, 0, x, i);
        }
        case Algorithm::DecisionTree: {
            const auto& t = std::get<TreeModel>(m.params);
            return t.nodes[static_cast<size_t>(tree_leaf(t, x, i))].positive_frac;
        }
        case Algorithm::RandomForest: {
            const auto& f = std::get<ForestModel>(m.params);
            size_t votes = 0;
            for (const auto& t : f.trees)
                votes += static_cast<size_t>(t.nodes[static_cast<size_t>(tree_leaf(t, x, i))].label);
            return static_cast<double>(votes) / static_cast<double>(f.trees.size());
        }
    }
    return 0.0;
}

int label_one(const Model& m, const FeatureMatrix& x, size_t i, double x_norm_sq) {
    switch (m.algorithm) {
        case Algorithm::LogReg:
        case Algorithm::LogRegCV:
            return score_one(m, x, i, x_norm_sq) >= 0.5 ? 1 : 0;
        case Algorithm::LinearSVM:
        case Algorithm::KernelSvmC:
        case Algorithm::KernelSvmNu:
        case Algorithm::NaiveBayes:
            return score_one(m, x, i, x_norm_sq) >= 0.0 ? 1 : 0;
        case Algorithm::DecisionTree: {
            const auto& t = std::get<TreeModel>(m.params);
            return t.nodes[static_cast<size_t>(tree_leaf(t, x, i))].label;
        }
        case Algorithm::RandomForest: {
            const auto& f = std::get<ForestModel>(m.params);
            size_t votes = 0;
            for (const auto& t : f.trees)
                votes += static_cast<size_t>(t.nodes[static_cast<size_t>(tree_leaf(t, x, i))].label);
            return 2 * votes > f.trees.size() ? 1 : 0;  // tie -> 0
        }
    }
    return 0;
}

bool needs_norms(const Model& m) {
    return m.algorithm == Algorithm::KernelSvmC || m.algorithm == Algorithm::KernelSvmNu;
}

}  // namespace

std::vector<int> predict(const Model& model, const FeatureMatrix& x) {
    check_width(model, x);
    std::vector<int> out(x.rows());
    for (size_t i = 0; i < x.rows(); ++i) {
        double norm = needs_norms(model) ? x.row_norm_sq(i) : 0.0;
        out[i] = label_one(model, x, i, norm);
    }
    return out;
}

std::vector<double> predict_score(const Model& model, const FeatureMatrix& x) {
    check_width(model, x);
    std::vector<double> out(x.rows());
    for (size_t i = 0; i < x.rows(); ++i) {
        double norm = needs_norms(model) ? x.row_norm_sq(i) : 0.0;
        out[i] = score_one(model, x, i, norm);
    }
    return out;
}

namespace {

constexpr char kModelMagic[4] = {'J', 'M', 'D', '1'};

Tensor vec_tensor(const std::string& name, std::span<const double> v) {
    Tensor t;
    t.name = name;
    t.dims = {v.size()};
    t.data.assign(v.begin(), v.end());
    return t;
}

Tensor scalar_tensor(const std::string& name, double v) {
    Tensor t;
    t.name = name;
    t.dims = {1};
    t.data = {static_cast<float>(v)};
    return t;
}

Tensor matrix_tensor(const std::string& name, const DenseMatrix& m) {
    Tensor t;
    t.name = name;
    t.dims = {m.rows(), m.cols()};
    t.data.assign(m.data().begin(), m.data().end());
    return t;
}

DenseMatrix tensor_matrix(const Tensor& t) {
    if (t.dims.size() != 2) data_error("model tensor '" + t.name + "' is not a matrix");
    DenseMatrix m(t.dims[0], t.dims[1]);
    std::copy(t.data.begin(), t.data.end(), m.data().begin());
    return m;
}

std::vector<double> tensor_vec(const Tensor& t) {
    return std::vector<double>(t.data.begin(), t.data.end());
}

Tensor tree_tensor(const std::string& name, const TreeModel& t) {
    Tensor out;
    out.name = name;
    out.dims = {t.nodes.size(), 6};
    out.data.reserve(t.nodes.size() * 6);
    for (const auto& n : t.nodes) {
        out.data.push_back(static_cast<float>(n.feature));
        out.data.push_back(static_cast<float>(n.threshold));
        out.data.push_back(static_cast<float>(n.left));
        out.data.push_back(static_cast<float>(n.right));
        out.data.push_back(static_cast<float>(n.label));
        out.data.push_back(static_cast<float>(n.positive_frac));
    }
    return out;
}

TreeModel tensor_tree(const Tensor& t) {
    if (t.dims.size() != 2 || t.dims[1] != 6) data_error("malformed tree tensor '" + t.name + "'");
    TreeModel out;
    out.nodes.resize(t.dims[0]);
    for (size_t i = 0; i < out.nodes.size(); ++i) {
        const float* row = &t.data[i * 6];
        out.nodes[i].feature = static_cast<int32_t>(row[0]);
        out.nodes[i].threshold = row[1];
        out.nodes[i].left = static_cast<int32_t>(row[2]);
        out.nodes[i].right = static_cast<int32_t>(row[3]);
        out.nodes[i].label = static_cast<int32_t>(row[4]);
        out.nodes[i].positive_frac = row[5];
    }
    return out;
}

// support vectors flattened to a dense matrix; model files are a debug
// convenience, not a storage-optimized path
Tensor support_tensor(const FeatureMatrix& sv) {
    Tensor t;
    t.name = "support";
    t.dims = {sv.rows(), sv.cols()};
    t.data.assign(sv.rows() * sv.cols(), 0.0f);
    for (size_t i = 0; i < sv.rows(); ++i)
        for (size_t j = 0; j < sv.cols(); ++j)
            t.data[i * sv.cols() + j] = static_cast<float>(sv.get(i, j));
    return t;
}

void put_u32(std::ostream& out, uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) data_error("model file truncated");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

const Tensor& find_tensor(const std::vector<Tensor>& ts, const std::string& name) {
    for (const auto& t : ts)
        if (t.name == name) return t;
    data_error("model file is missing tensor '" + name + "'");
}

}  // namespace

void save_model(std::ostream& out, const Model& model) {
    out.write(kModelMagic, 4);
    put_u32(out, 1);  // version
    put_u32(out, static_cast<uint32_t>(model.algorithm));
    put_u32(out, static_cast<uint32_t>(model.feature_dim));

    std::vector<Tensor> ts;
    switch (model.algorithm) {
        case Algorithm::LogReg:
        case Algorithm::LogRegCV:
        case Algorithm::LinearSVM: {
            const auto& lm = std::get<LinearModel>(model.params);
            ts.push_back(vec_tensor("w", lm.w));
            ts.push_back(scalar_tensor("w0", lm.w0));
            ts.push_back(scalar_tensor("selected_l2", lm.selected_l2));
            break;
        }
        case Algorithm::KernelSvmC:
        case Algorithm::KernelSvmNu: {
            const auto& km = std::get<KernelSvmModel>(model.params);
            ts.push_back(support_tensor(km.support));
            ts.push_back(vec_tensor("alpha_y", km.alpha_y));
            ts.push_back(scalar_tensor("b", km.b));
            ts.push_back(scalar_tensor("gamma", km.gamma));
            ts.push_back(scalar_tensor("c_used", km.c_used));
            ts.push_back(scalar_tensor("nu_warning", km.nu_warning ? 1.0 : 0.0));
            break;
        }
        case Algorithm::NaiveBayes: {
            if (std::holds_alternative<BernoulliNbModel>(model.params)) {
                const auto& nb = std::get<BernoulliNbModel>(model.params);
                ts.push_back(scalar_tensor("bernoulli", 1.0));
                ts.push_back(vec_tensor("log_prior", nb.log_prior));
                ts.push_back(matrix_tensor("log_p", nb.log_p));
                ts.push_back(matrix_tensor("log_1mp", nb.log_1mp));
                ts.push_back(vec_tensor("base_score", nb.base_score));
            } else {
                const auto& nb = std::get<GaussianNbModel>(model.params);
                ts.push_back(scalar_tensor("bernoulli", 0.0));
                ts.push_back(vec_tensor("log_prior", nb.log_prior));
                ts.push_back(matrix_tensor("mean", nb.mean));
                ts.push_back(matrix_tensor("var", nb.var));
            }
            break;
        }
        case Algorithm::DecisionTree:
            ts.push_back(tree_tensor("tree", std::get<TreeModel>(model.params)));
            break;
        case Algorithm::RandomForest: {
            const auto& f = std::get<ForestModel>(model.params);
            ts.push_back(scalar_tensor("n_trees", static_cast<double>(f.trees.size())));
            for (size_t i = 0; i < f.trees.size(); ++i)
                ts.push_back(tree_tensor("tree" + std::to_string(i), f.trees[i]));
            break;
        }
    }
    write_tensors(out, ts);
}

Model load_model(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0)
        data_error("bad model file magic");
    uint32_t version = get_u32(in);
    if (version != 1) data_error("unsupported model file version " + std::to_string(version));

    Model m;
    m.algorithm = static_cast<Algorithm>(get_u32(in));
    m.feature_dim = get_u32(in);
    std::vector<Tensor> ts = read_tensors(in);

    switch (m.algorithm) {
        case Algorithm::LogReg:
        case Algorithm::LogRegCV:
        case Algorithm::LinearSVM: {
            LinearModel lm;
            lm.w = tensor_vec(find_tensor(ts, "w"));
            lm.w0 = find_tensor(ts, "w0").data[0];
            lm.selected_l2 = find_tensor(ts, "selected_l2").data[0];
            m.params = std::move(lm);
            break;
        }
        case Algorithm::KernelSvmC:
        case Algorithm::KernelSvmNu: {
            KernelSvmModel km;
            km.support = FeatureMatrix(tensor_matrix(find_tensor(ts, "support")));
            km.alpha_y = tensor_vec(find_tensor(ts, "alpha_y"));
            km.b = find_tensor(ts, "b").data[0];
            km.gamma = find_tensor(ts, "gamma").data[0];
            km.c_used = find_tensor(ts, "c_used").data[0];
            km.nu_warning = find_tensor(ts, "nu_warning").data[0] != 0.0f;
            km.sv_norm_sq.clear();
            for (size_t i = 0; i < km.support.rows(); ++i)
                km.sv_norm_sq.push_back(km.support.row_norm_sq(i));
            m.params = std::move(km);
            break;
        }
        case Algorithm::NaiveBayes: {
            if (find_tensor(ts, "bernoulli").data[0] != 0.0f) {
                BernoulliNbModel nb;
                nb.log_prior = tensor_vec(find_tensor(ts, "log_prior"));
                nb.log_p = tensor_matrix(find_tensor(ts, "log_p"));
                nb.log_1mp = tensor_matrix(find_tensor(ts, "log_1mp"));
                nb.base_score = tensor_vec(find_tensor(ts, "base_score"));
                m.params = std::move(nb);
            } else {
                GaussianNbModel nb;
                nb.log_prior = tensor_vec(find_tensor(ts, "log_prior"));
                nb.mean = tensor_matrix(find_tensor(ts, "mean"));
                nb.var = tensor_matrix(find_tensor(ts, "var"));
                m.params = std::move(nb);
            }
            break;
        }
        case Algorithm::DecisionTree:
            m.params = tensor_tree(find_tensor(ts, "tree"));
            break;
        case Algorithm::RandomForest: {
            ForestModel f;
            size_t n = static_cast<size_t>(find_tensor(ts, "n_trees").data[0]);
            for (size_t i = 0; i < n; ++i)
                f.trees.push_back(tensor_tree(find_tensor(ts, "tree" + std::to_string(i))));
            m.params = std::move(f);
            break;
        }
        default:
            data_error("model file has unknown algorithm tag");
    }
    return m;
}

}  // namespace jobrec
