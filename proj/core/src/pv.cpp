#include "jobrec/pv.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>

#include "jobrec/error.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {
namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// cumulative-table lookup; cum is nondecreasing and ends at 1
uint32_t sample_noise(const std::vector<double>& cum, Rng& rng) {
    double u = rng.uniform();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return static_cast<uint32_t>(it - cum.begin());
}

uint32_t sample_negative(const std::vector<double>& cum, uint32_t center, Rng& rng) {
    for (int tries = 0; tries < 100; ++tries) {
        uint32_t w = sample_noise(cum, rng);
        if (w != center) return w;
    }
    return (center + 1) % static_cast<uint32_t>(cum.size());
}

// h = (doc vector + sum of context word-input vectors) / (1 + |context|)
std::vector<double> context_mean(const ParagraphVectorModel& m, const PvExample& ex) {
    size_t dim = static_cast<size_t>(m.dim());
    std::vector<double> h(dim);
    auto dv = m.doc_vectors().row(ex.doc);
    for (size_t i = 0; i < dim; ++i) h[i] = dv[i];
    for (uint32_t c : ex.context) {
        auto wv = m.word_in().row(c);
        for (size_t i = 0; i < dim; ++i) h[i] += wv[i];
    }
    double inv = 1.0 / (1.0 + static_cast<double>(ex.context.size()));
    for (auto& v : h) v *= inv;
    return h;
}

}  // namespace

int ParagraphVectorModel::word_id(const std::string& token) const {
    auto it = word_index_.find(token);
    return it == word_index_.end() ? -1 : static_cast<int>(it->second);
}

double pv_example_loss(const ParagraphVectorModel& model, const PvExample& ex) {
    std::vector<double> h = context_mean(model, ex);
    size_t dim = static_cast<size_t>(model.dim());
    auto score = [&](uint32_t w) {
        auto out = model.word_out().row(w);
        double s = 0.0;
        for (size_t i = 0; i < dim; ++i) s += h[i] * out[i];
        return s;
    };
    // clamped log to keep the loss finite at saturated scores
    auto log_sig = [](double t) { return std::log(std::max(sigmoid(t), 1e-300)); };
    double loss = -log_sig(score(ex.center));
    for (uint32_t neg : ex.negatives) loss -= log_sig(-score(neg));
    return loss;
}

PvGradients pv_example_grads(const ParagraphVectorModel& model, const PvExample& ex) {
    size_t dim = static_cast<size_t>(model.dim());
    std::vector<double> h = context_mean(model, ex);

    PvGradients g;
    std::vector<double> dh(dim, 0.0);
    auto accumulate = [&](uint32_t w, double label) {
        auto out = model.word_out().row(w);
        double s = 0.0;
        for (size_t i = 0; i < dim; ++i) s += h[i] * out[i];
        double err = sigmoid(s) - label;  // d loss / d score
        std::vector<double> dout(dim);
        for (size_t i = 0; i < dim; ++i) {
            dout[i] = err * h[i];
            dh[i] += err * out[i];
        }
        g.word_out.emplace_back(w, std::move(dout));
    };
    accumulate(ex.center, 1.0);
    for (uint32_t neg : ex.negatives) accumulate(neg, 0.0);

    double inv = 1.0 / (1.0 + static_cast<double>(ex.context.size()));
    g.doc.resize(dim);
    for (size_t i = 0; i < dim; ++i) g.doc[i] = dh[i] * inv;
    for (uint32_t c : ex.context) {
        std::vector<double> dwin(dim);
        for (size_t i = 0; i < dim; ++i) dwin[i] = dh[i] * inv;
        g.word_in.emplace_back(c, std::move(dwin));
    }
    return g;
}

ParagraphVectorModel train_paragraph_vectors(const std::vector<std::vector<std::string>>& corpus,
                                             const PvConfig& cfg) {
    if (corpus.empty()) data_error("paragraph-vector corpus is empty");
    if (cfg.dim < 1 || cfg.window < 1 || cfg.epochs < 1)
        config_error("paragraph-vector dim, window and epochs must be >= 1");

    ParagraphVectorModel m;
    m.cfg_ = cfg;

    // lexicographic vocabulary with raw counts for the noise distribution
    std::map<std::string, uint64_t> counts;
    for (const auto& doc : corpus)
        for (const auto& t : doc) ++counts[t];
    if (counts.size() < 2) data_error("paragraph-vector corpus has fewer than 2 distinct tokens");
    m.vocab_.reserve(counts.size());
    for (auto& [tok, cnt] : counts) {
        m.word_index_.emplace(tok, static_cast<uint32_t>(m.vocab_.size()));
        m.vocab_.push_back(tok);
    }

    size_t V = m.vocab_.size();
    size_t dim = static_cast<size_t>(cfg.dim);
    double total = 0.0;
    m.noise_cum_.resize(V);
    for (size_t w = 0; w < V; ++w) {
        double p = std::pow(static_cast<double>(counts[m.vocab_[w]]), 0.75);
        m.noise_cum_[w] = p;
        total += p;
    }
    double run = 0.0;
    for (auto& v : m.noise_cum_) {
        run += v / total;
        v = run;
    }
    m.noise_cum_.back() = 1.0;

    Rng rng(cfg.seed);
    double half = 0.5 / static_cast<double>(cfg.dim);
    m.word_in_ = DenseMatrix(V, dim);
    m.word_out_ = DenseMatrix(V, dim);
    m.docs_ = DenseMatrix(corpus.size(), dim);
    for (auto& v : m.word_in_.data()) v = rng.uniform(-half, half);
    for (auto& v : m.docs_.data()) v = rng.uniform(-half, half);

    // word ids per document, fixed for all epochs
    std::vector<std::vector<uint32_t>> doc_ids(corpus.size());
    uint64_t total_centers = 0;
    for (size_t d = 0; d < corpus.size(); ++d) {
        doc_ids[d].reserve(corpus[d].size());
        for (const auto& t : corpus[d]) doc_ids[d].push_back(m.word_index_.at(t));
        total_centers += corpus[d].size();
    }

    uint64_t T = total_centers * static_cast<uint64_t>(cfg.epochs);
    uint64_t t = 0;
    m.epoch_losses_.clear();
    PvExample ex;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (size_t d = 0; d < corpus.size(); ++d) {
            const auto& ids = doc_ids[d];
            for (size_t pos = 0; pos < ids.size(); ++pos) {
                double alpha = cfg.learning_rate *
                               (1.0 - static_cast<double>(t) / static_cast<double>(std::max<uint64_t>(T, 1)));
                alpha = std::max(alpha, cfg.min_learning_rate);
                ++t;

                ex.doc = static_cast<uint32_t>(d);
                ex.center = ids[pos];
                ex.context.clear();
                size_t lo = pos >= static_cast<size_t>(cfg.window) ? pos - static_cast<size_t>(cfg.window) : 0;
                size_t hi = std::min(ids.size(), pos + static_cast<size_t>(cfg.window) + 1);
                for (size_t j = lo; j < hi; ++j)
                    if (j != pos) ex.context.push_back(ids[j]);
                ex.negatives.clear();
                for (int k = 0; k < cfg.negative_samples; ++k)
                    ex.negatives.push_back(sample_negative(m.noise_cum_, ex.center, rng));

                epoch_loss += pv_example_loss(m, ex);
                PvGradients grads = pv_example_grads(m, ex);
                auto dv = m.docs_.row(ex.doc);
                for (size_t i = 0; i < dim; ++i) dv[i] -= alpha * grads.doc[i];
                for (auto& [w, gw] : grads.word_in) {
                    auto row = m.word_in_.row(w);
                    for (size_t i = 0; i < dim; ++i) row[i] -= alpha * gw[i];
                }
                for (auto& [w, gw] : grads.word_out) {
                    auto row = m.word_out_.row(w);
                    for (size_t i = 0; i < dim; ++i) row[i] -= alpha * gw[i];
                }
            }
        }
        m.epoch_losses_.push_back(epoch_loss);
        for (double v : m.word_in_.data())
            if (!std::isfinite(v)) data_error("paragraph-vector training diverged (non-finite word vector)");
        for (double v : m.docs_.data())
            if (!std::isfinite(v)) data_error("paragraph-vector training diverged (non-finite doc vector)");
    }
    return m;
}

InferredVector infer_doc_vector(const std::vector<std::string>& tokens,
                                const ParagraphVectorModel& model, int steps,
                                double learning_rate, uint64_t seed) {
    size_t dim = static_cast<size_t>(model.dim());
    Rng rng(seed);
    double half = 0.5 / static_cast<double>(model.dim());
    InferredVector out;
    out.values.resize(dim);
    for (auto& v : out.values) v = rng.uniform(-half, half);

    std::vector<uint32_t> ids;
    for (const auto& t : tokens) {
        int id = model.word_id(t);
        if (id >= 0) ids.push_back(static_cast<uint32_t>(id));
    }
    if (ids.empty()) {
        out.all_oov = true;
        return out;
    }

    int window = model.config().window;
    int negatives = model.config().negative_samples;
    std::vector<double> h(dim), dh(dim);
    for (int step = 0; step < steps; ++step) {
        for (size_t pos = 0; pos < ids.size(); ++pos) {
            uint32_t center = ids[pos];
            size_t lo = pos >= static_cast<size_t>(window) ? pos - static_cast<size_t>(window) : 0;
            size_t hi = std::min(ids.size(), pos + static_cast<size_t>(window) + 1);
            size_t n_ctx = hi - lo - 1;
            for (size_t i = 0; i < dim; ++i) h[i] = out.values[i];
            for (size_t j = lo; j < hi; ++j) {
                if (j == pos) continue;
                auto wv = model.word_in().row(ids[j]);
                for (size_t i = 0; i < dim; ++i) h[i] += wv[i];
            }
            double inv = 1.0 / (1.0 + static_cast<double>(n_ctx));
            for (auto& v : h) v *= inv;

            std::fill(dh.begin(), dh.end(), 0.0);
            auto accumulate = [&](uint32_t w, double label) {
                auto ov = model.word_out().row(w);
                double s = 0.0;
                for (size_t i = 0; i < dim; ++i) s += h[i] * ov[i];
                double err = sigmoid(s) - label;
                for (size_t i = 0; i < dim; ++i) dh[i] += err * ov[i];
            };
            accumulate(center, 1.0);
            for (int k = 0; k < negatives; ++k)
                accumulate(sample_negative(model.noise_cumulative(), center, rng), 0.0);
            for (size_t i = 0; i < dim; ++i) out.values[i] -= learning_rate * dh[i] * inv;
        }
    }
    return out;
}

namespace {

constexpr char kPvMagic[4] = {'J', 'P', 'V', '1'};

void put_u32(std::ostream& out, uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) data_error("paragraph-vector file truncated");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

float get_f32(std::istream& in) {
    uint32_t bits = get_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

void put_matrix(std::ostream& out, const DenseMatrix& m) {
    for (double v : m.data()) put_f32(out, static_cast<float>(v));
}

void get_matrix(std::istream& in, DenseMatrix& m) {
    for (auto& v : m.data()) v = get_f32(in);
}

}  // namespace

void ParagraphVectorModel::save(std::ostream& out) const {
    out.write(kPvMagic, 4);
    put_u32(out, 1);  // version
    put_u32(out, static_cast<uint32_t>(cfg_.dim));
    put_u32(out, static_cast<uint32_t>(vocab_.size()));
    put_u32(out, static_cast<uint32_t>(docs_.rows()));
    put_u32(out, static_cast<uint32_t>(cfg_.window));
    put_u32(out, static_cast<uint32_t>(cfg_.negative_samples));
    for (const auto& tok : vocab_) {
        put_u32(out, static_cast<uint32_t>(tok.size()));
        out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
    }
    put_matrix(out, word_in_);
    put_matrix(out, word_out_);
    put_matrix(out, docs_);
    for (double v : noise_cum_) put_f32(out, static_cast<float>(v));
}

ParagraphVectorModel ParagraphVectorModel::load(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kPvMagic, 4) != 0)
        data_error("bad paragraph-vector file magic");
    uint32_t version = get_u32(in);
    if (version != 1)
        data_error("unsupported paragraph-vector file version " + std::to_string(version));
    ParagraphVectorModel m;
    m.cfg_.dim = static_cast<int>(get_u32(in));
    uint32_t V = get_u32(in);
    uint32_t D = get_u32(in);
    m.cfg_.window = static_cast<int>(get_u32(in));
    m.cfg_.negative_samples = static_cast<int>(get_u32(in));
    m.vocab_.resize(V);
    for (uint32_t w = 0; w < V; ++w) {
        uint32_t len = get_u32(in);
        m.vocab_[w].resize(len);
        if (!in.read(m.vocab_[w].data(), len)) data_error("paragraph-vector file truncated");
        m.word_index_.emplace(m.vocab_[w], w);
    }
    size_t dim = static_cast<size_t>(m.cfg_.dim);
    m.word_in_ = DenseMatrix(V, dim);
    m.word_out_ = DenseMatrix(V, dim);
    m.docs_ = DenseMatrix(D, dim);
    get_matrix(in, m.word_in_);
    get_matrix(in, m.word_out_);
    get_matrix(in, m.docs_);
    m.noise_cum_.resize(V);
    for (auto& v : m.noise_cum_) v = get_f32(in);
    return m;
}

}  // namespace jobrec
