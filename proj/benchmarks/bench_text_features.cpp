#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "jobrec/rng.hpp"
#include "jobrec/text_features.hpp"

namespace {

std::vector<std::vector<std::string>> synthetic_docs(size_t n_docs, size_t doc_len) {
    jobrec::Rng rng(11);
    std::vector<std::string> words;
    for (int i = 0; i < 60; ++i) words.push_back("term" + std::to_string(i));
    std::vector<std::vector<std::string>> docs(n_docs);
    for (auto& doc : docs) {
        doc.reserve(doc_len);
        for (size_t t = 0; t < doc_len; ++t) doc.push_back(words[rng.below(words.size())]);
    }
    return docs;
}

std::string flat_text(const std::vector<std::string>& tokens) {
    std::string text;
    for (const auto& t : tokens) {
        text += t;
        text += ' ';
    }
    return text;
}

void BM_Tokenize(benchmark::State& state) {
    std::string text = flat_text(synthetic_docs(1, 2000)[0]);
    for (auto _ : state) {
        auto tokens = jobrec::tokenize(text);
        benchmark::DoNotOptimize(tokens);
    }
}
BENCHMARK(BM_Tokenize);

void BM_ExtractNgrams(benchmark::State& state) {
    auto doc = synthetic_docs(1, 2000)[0];
    for (auto _ : state) {
        auto grams = jobrec::extract_ngrams(doc, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(grams);
    }
}
BENCHMARK(BM_ExtractNgrams)->Arg(1)->Arg(2)->Arg(3);

void BM_VocabularyBuild(benchmark::State& state) {
    auto docs = synthetic_docs(200, 300);
    jobrec::NGramConfig cfg;
    cfg.n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto vocab = jobrec::Vocabulary::build(docs, cfg);
        benchmark::DoNotOptimize(vocab);
    }
}
BENCHMARK(BM_VocabularyBuild)->Arg(1)->Arg(3);

void BM_VectorizeCorpus(benchmark::State& state) {
    auto docs = synthetic_docs(200, 300);
    jobrec::NGramConfig cfg;
    cfg.n = 3;
    auto vocab = jobrec::Vocabulary::build(docs, cfg);
    for (auto _ : state) {
        auto matrix = jobrec::vectorize_corpus(docs, vocab);
        benchmark::DoNotOptimize(matrix);
    }
}
BENCHMARK(BM_VectorizeCorpus);

}  // namespace

BENCHMARK_MAIN();
