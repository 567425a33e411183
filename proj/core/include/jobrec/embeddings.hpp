#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace jobrec {

struct EmbeddingTable {
    size_t dim = 0;
    std::unordered_map<std::string, std::vector<float>> vectors;
    size_t duplicate_count = 0;  // duplicate tokens in the source; last one won
};

// GloVe-style text: one line per token, "token v1 v2 ... vdim".  The first
// line fixes dim; any later mismatch or non-numeric component is fatal.
EmbeddingTable load_embeddings(std::istream& in);

struct DocVector {
    std::vector<double> values;
    double coverage = 0.0;  // fraction of tokens found in the table
};

// mean of the in-table token vectors; no in-table tokens -> zero vector,
// coverage 0
DocVector embed_document_avg(std::span<const std::string> tokens, const EmbeddingTable& table);

}  // namespace jobrec
