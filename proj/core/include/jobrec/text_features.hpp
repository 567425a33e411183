#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jobrec/matrix.hpp"

namespace jobrec {

struct NGramConfig {
    int n = 1;             // 1, 2 or 3
    int min_doc_freq = 1;  // n-gram kept if it appears in >= this many docs
};

// lowercase, split on maximal runs of non-alphanumeric ASCII; bytes >= 0x80
// are kept so multibyte UTF-8 words survive as tokens
std::vector<std::string> tokenize(std::string_view text);

// sliding window of width n, space-joined; < n tokens -> empty
std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, int n);

// n-gram string -> column index, lexicographic order
class Vocabulary {
public:
    static Vocabulary build(const std::vector<std::vector<std::string>>& corpus_tokens,
                            const NGramConfig& config);

    size_t size() const { return terms_.size(); }
    int n() const { return n_; }
    std::optional<uint32_t> index_of(std::string_view ngram) const;
    const std::vector<std::string>& terms() const { return terms_; }

    // "<index>\t<ngram>" per line, sorted by index
    void save(std::ostream& out) const;
    static Vocabulary load(std::istream& in);

private:
    int n_ = 1;
    std::vector<std::string> terms_;
    std::unordered_map<std::string, uint32_t> index_;
};

// sorted column indices of the document's in-vocabulary n-grams
std::vector<uint32_t> vectorize(std::span<const std::string> tokens, const Vocabulary& vocab);

SparseBinaryMatrix vectorize_corpus(const std::vector<std::vector<std::string>>& corpus_tokens,
                                    const Vocabulary& vocab);

}  // namespace jobrec
