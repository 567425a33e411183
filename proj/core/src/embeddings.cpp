#include "jobrec/embeddings.hpp"

#include <cstdlib>
#include <istream>
#include <sstream>

#include "jobrec/error.hpp"

namespace jobrec {

EmbeddingTable load_embeddings(std::istream& in) {
    EmbeddingTable table;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t sp = line.find(' ');
        if (sp == std::string::npos || sp == 0)
            data_error("embedding line " + std::to_string(lineno) + ": expected 'token v1 ... vd'");
        std::string token = line.substr(0, sp);
        std::vector<float> vec;
        const char* p = line.c_str() + sp;
        while (*p) {
            while (*p == ' ') ++p;
            if (!*p) break;
            char* end = nullptr;
            float v = std::strtof(p, &end);
            if (end == p || (*end != ' ' && *end != '\0' && *end != '\r'))
                data_error("embedding line " + std::to_string(lineno) + ": non-numeric component");
            vec.push_back(v);
            p = end;
            if (*p == '\r') break;
        }
        if (vec.empty())
            data_error("embedding line " + std::to_string(lineno) + ": no vector components");
        if (table.dim == 0) {
            table.dim = vec.size();
        } else if (vec.size() != table.dim) {
            data_error("embedding line " + std::to_string(lineno) + ": dimension " +
                       std::to_string(vec.size()) + " != " + std::to_string(table.dim));
        }
        auto it = table.vectors.find(token);
        if (it == table.vectors.end()) {
            table.vectors.emplace(std::move(token), std::move(vec));
        } else {
            it->second = std::move(vec);
            ++table.duplicate_count;
        }
    }
    if (table.vectors.empty()) data_error("embedding file contains no vectors");
    return table;
}

DocVector embed_document_avg(std::span<const std::string> tokens, const EmbeddingTable& table) {
    DocVector out;
    out.values.assign(table.dim, 0.0);
    size_t hits = 0;
    for (const auto& t : tokens) {
        auto it = table.vectors.find(t);
        if (it == table.vectors.end()) continue;
        ++hits;
        for (size_t i = 0; i < table.dim; ++i) out.values[i] += it->second[i];
    }
    if (hits > 0) {
        for (auto& v : out.values) v /= static_cast<double>(hits);
        out.coverage = tokens.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(tokens.size());
    }
    return out;
}

}  // namespace jobrec
