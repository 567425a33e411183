#include "jobrec/embeddings.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "jobrec/error.hpp"

using namespace jobrec;

namespace {

EmbeddingTable load(const std::string& text) {
    std::istringstream in(text);
    return load_embeddings(in);
}

}  // namespace

TEST(Embeddings, LoadBasicTable) {
    const EmbeddingTable t = load("apple 1.0 2.0 3.0\nbanana -1.0 0.5 0.25\n");
    EXPECT_EQ(t.dim, 3u);
    EXPECT_EQ(t.vectors.size(), 2u);
    EXPECT_EQ(t.duplicate_count, 0u);
    ASSERT_TRUE(t.vectors.count("banana"));
    EXPECT_FLOAT_EQ(t.vectors.at("banana")[0], -1.0f);
    EXPECT_FLOAT_EQ(t.vectors.at("banana")[2], 0.25f);
}

TEST(Embeddings, DuplicateTokenLastWins) {
    const EmbeddingTable t = load("x 1.0\nx 2.0\ny 3.0\n");
    EXPECT_EQ(t.vectors.size(), 2u);
    EXPECT_EQ(t.duplicate_count, 1u);
    EXPECT_FLOAT_EQ(t.vectors.at("x")[0], 2.0f);
}

TEST(Embeddings, DimMismatchIsDataError) {
    try {
        load("a 1.0 2.0\nb 3.0\n");
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}

TEST(Embeddings, NonNumericComponentIsDataError) {
    try {
        load("a 1.0 oops\n");
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}

TEST(Embeddings, AverageSkipsUnknownTokens) {
    const EmbeddingTable t = load("a 1.0 3.0\nb 3.0 5.0\n");
    const std::vector<std::string> tokens = {"a", "missing", "b"};
    const DocVector v = embed_document_avg(tokens, t);
    ASSERT_EQ(v.values.size(), 2u);
    EXPECT_DOUBLE_EQ(v.values[0], 2.0);
    EXPECT_DOUBLE_EQ(v.values[1], 4.0);
    EXPECT_NEAR(v.coverage, 2.0 / 3.0, 1e-12);
}

TEST(Embeddings, RepeatedTokensCountEachOccurrence) {
    const EmbeddingTable t = load("a 1.0\nb 4.0\n");
    const std::vector<std::string> tokens = {"a", "a", "b"};
    const DocVector v = embed_document_avg(tokens, t);
    EXPECT_DOUBLE_EQ(v.values[0], 2.0);
    EXPECT_DOUBLE_EQ(v.coverage, 1.0);
}

TEST(Embeddings, AllUnknownGivesZeroVector) {
    const EmbeddingTable t = load("a 1.0 2.0\n");
    const DocVector v = embed_document_avg(std::vector<std::string>{"x", "y"}, t);
    ASSERT_EQ(v.values.size(), 2u);
    EXPECT_DOUBLE_EQ(v.values[0], 0.0);
    EXPECT_DOUBLE_EQ(v.values[1], 0.0);
    EXPECT_DOUBLE_EQ(v.coverage, 0.0);
}

TEST(Embeddings, EmptyDocument) {
    const EmbeddingTable t = load("a 1.0\n");
    const DocVector v = embed_document_avg(std::vector<std::string>{}, t);
    EXPECT_EQ(v.values.size(), 1u);
    EXPECT_DOUBLE_EQ(v.coverage, 0.0);
}
