#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "jobrec/matrix.hpp"

namespace jobrec {

struct PvConfig {
    int dim = 100;
    int window = 5;  // tokens on each side of the center
    int negative_samples = 5;
    int epochs = 20;
    double learning_rate = 0.025;  // decays linearly to min_learning_rate
    double min_learning_rate = 1e-4;
    uint64_t seed = 42;

    bool operator==(const PvConfig&) const = default;
};

// One SGD example: predict the center word from the mean of the doc vector
// and the context word-input vectors, scored against the center (positive)
// and sampled noise words (negatives) through the output matrix.
struct PvExample {
    uint32_t doc = 0;
    uint32_t center = 0;
    std::vector<uint32_t> context;    // word ids, may be empty
    std::vector<uint32_t> negatives;  // noise word ids, none equal to center
};

struct PvGradients {
    std::vector<double> doc;                                     // d loss / d doc vector
    std::vector<std::pair<uint32_t, std::vector<double>>> word_in;   // per context word
    std::vector<std::pair<uint32_t, std::vector<double>>> word_out;  // center + negatives
};

class ParagraphVectorModel {
public:
    int dim() const { return cfg_.dim; }
    size_t vocab_size() const { return vocab_.size(); }
    size_t doc_count() const { return docs_.rows(); }
    const PvConfig& config() const { return cfg_; }

    const std::vector<std::string>& vocab() const { return vocab_; }
    int word_id(const std::string& token) const;  // -1 if unknown

    DenseMatrix& word_in() { return word_in_; }
    DenseMatrix& word_out() { return word_out_; }
    DenseMatrix& doc_vectors() { return docs_; }
    const DenseMatrix& word_in() const { return word_in_; }
    const DenseMatrix& word_out() const { return word_out_; }
    const DenseMatrix& doc_vectors() const { return docs_; }

    const std::vector<double>& noise_cumulative() const { return noise_cum_; }

    // sum of pre-update example losses per training epoch
    const std::vector<double>& epoch_losses() const { return epoch_losses_; }

    void save(std::ostream& out) const;
    static ParagraphVectorModel load(std::istream& in);

    friend ParagraphVectorModel train_paragraph_vectors(
        const std::vector<std::vector<std::string>>& corpus, const PvConfig& cfg);

private:
    PvConfig cfg_;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, uint32_t> word_index_;
    DenseMatrix word_in_;   // |V| x dim
    DenseMatrix word_out_;  // |V| x dim
    DenseMatrix docs_;      // n_docs x dim
    std::vector<double> noise_cum_;  // cumulative unigram^0.75, sums to 1
    std::vector<double> epoch_losses_;
};

// negative-sampling logistic loss of one example
double pv_example_loss(const ParagraphVectorModel& model, const PvExample& ex);

// analytic gradients of pv_example_loss; training applies exactly these
PvGradients pv_example_grads(const ParagraphVectorModel& model, const PvExample& ex);

ParagraphVectorModel train_paragraph_vectors(const std::vector<std::vector<std::string>>& corpus,
                                             const PvConfig& cfg);

struct InferredVector {
    std::vector<double> values;
    bool all_oov = false;  // no known token; values are the seeded init
};

// SGD on a fresh doc vector with the word matrices frozen
InferredVector infer_doc_vector(const std::vector<std::string>& tokens,
                                const ParagraphVectorModel& model, int steps,
                                double learning_rate, uint64_t seed);

}  // namespace jobrec
