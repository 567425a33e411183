#include "jobrec/text_features.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "jobrec/error.hpp"

namespace jobrec {
namespace {

bool token_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (token_char(c)) {
            cur.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, int n) {
    std::vector<std::string> grams;
    if (n < 1 || tokens.size() < static_cast<size_t>(n)) return grams;
    grams.reserve(tokens.size() - static_cast<size_t>(n) + 1);
    for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (int k = 1; k < n; ++k) {
            g.push_back(' ');
            g += tokens[i + static_cast<size_t>(k)];
        }
        grams.push_back(std::move(g));
    }
    return grams;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus_tokens,
                             const NGramConfig& config) {
    if (config.n < 1 || config.n > 3) config_error("ngram n must be 1, 2 or 3");
    if (config.min_doc_freq < 1) config_error("min_doc_freq must be >= 1");
    if (corpus_tokens.empty()) data_error("cannot build vocabulary from an empty corpus");

    // document frequency per n-gram; std::map gives the lexicographic order
    std::map<std::string, int> doc_freq;
    for (const auto& tokens : corpus_tokens) {
        auto grams = extract_ngrams(tokens, config.n);
        std::sort(grams.begin(), grams.end());
        grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
        for (auto& g : grams) ++doc_freq[g];
    }

    Vocabulary v;
    v.n_ = config.n;
    for (auto& [gram, df] : doc_freq) {
        if (df >= config.min_doc_freq) {
            v.index_.emplace(gram, static_cast<uint32_t>(v.terms_.size()));
            v.terms_.push_back(gram);
        }
    }
    if (v.terms_.empty()) data_error("vocabulary is empty after frequency pruning");
    return v;
}

std::optional<uint32_t> Vocabulary::index_of(std::string_view ngram) const {
    auto it = index_.find(std::string(ngram));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::save(std::ostream& out) const {
    for (size_t i = 0; i < terms_.size(); ++i)
        out << i << '\t' << terms_[i] << '\n';
}

Vocabulary Vocabulary::load(std::istream& in) {
    Vocabulary v;
    std::string line;
    size_t lineno = 0;
    int max_n = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            data_error("vocabulary line " + std::to_string(lineno) + ": missing tab");
        size_t index = std::stoull(line.substr(0, tab));
        if (index != v.terms_.size())
            data_error("vocabulary line " + std::to_string(lineno) + ": indices out of order");
        std::string term = line.substr(tab + 1);
        int words = 1 + static_cast<int>(std::count(term.begin(), term.end(), ' '));
        max_n = std::max(max_n, words);
        v.index_.emplace(term, static_cast<uint32_t>(v.terms_.size()));
        v.terms_.push_back(std::move(term));
    }
    if (v.terms_.empty()) data_error("empty vocabulary file");
    v.n_ = max_n;
    return v;
}

std::vector<uint32_t> vectorize(std::span<const std::string> tokens, const Vocabulary& vocab) {
    std::vector<uint32_t> cols;
    for (const auto& g : extract_ngrams(tokens, vocab.n())) {
        if (auto idx = vocab.index_of(g)) cols.push_back(*idx);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
}

SparseBinaryMatrix vectorize_corpus(const std::vector<std::vector<std::string>>& corpus_tokens,
                                    const Vocabulary& vocab) {
    SparseBinaryMatrix m(vocab.size());
    for (const auto& tokens : corpus_tokens)
        m.add_row(vectorize(tokens, vocab));
    return m;
}

}  // namespace jobrec
