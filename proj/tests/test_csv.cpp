#include "jobrec/csv.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "jobrec/error.hpp"

using namespace jobrec;

namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text) {
    std::istringstream in(text);
    csv::Reader reader(in);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    while (reader.next(fields)) rows.push_back(fields);
    return rows;
}

}  // namespace

TEST(Csv, PlainRows) {
    auto rows = read_all("a,b,c\n1,2,3\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "2", "3"}));
}

TEST(Csv, QuotedCommaQuoteNewline) {
    auto rows = read_all("\"a,b\",\"she said \"\"hi\"\"\",\"two\nlines\"\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][0], "a,b");
    EXPECT_EQ(rows[0][1], "she said \"hi\"");
    EXPECT_EQ(rows[0][2], "two\nlines");
}

TEST(Csv, CrLfAndMissingFinalNewline) {
    auto rows = read_all("a,b\r\nc,d");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], (std::vector<std::string>{"c", "d"}));
}

TEST(Csv, EmptyFields) {
    auto rows = read_all(",x,\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"", "x", ""}));
}

TEST(Csv, RecordLineTracksMultilineFields) {
    std::istringstream in("a,\"1\n2\n3\"\nb,c\n");
    csv::Reader reader(in);
    std::vector<std::string> fields;
    ASSERT_TRUE(reader.next(fields));
    EXPECT_EQ(reader.record_line(), 1u);
    ASSERT_TRUE(reader.next(fields));
    EXPECT_EQ(reader.record_line(), 4u);
    EXPECT_EQ(fields[0], "b");
}

TEST(Csv, EscapeOnlyWhenNeeded) {
    EXPECT_EQ(csv::escape("plain"), "plain");
    EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv::escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv::escape("line\nbreak"), "\"line\nbreak\"");
}

TEST(Csv, WriteRowRoundTrip) {
    std::ostringstream out;
    std::vector<std::string> nasty = {"a,b", "q\"q", "nl\nnl", "", "plain"};
    csv::write_row(out, nasty);
    auto rows = read_all(out.str());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0], nasty);
}

TEST(Csv, RejectsInvalidUtf8) {
    EXPECT_FALSE(csv::valid_utf8("\xff\xfe"));
    EXPECT_TRUE(csv::valid_utf8("caf\xc3\xa9"));
    std::istringstream in("ok,\xc3(\n");
    csv::Reader reader(in);
    std::vector<std::string> fields;
    try {
        reader.next(fields);
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}

TEST(Csv, UnterminatedQuoteIsDataError) {
    std::istringstream in("\"open\n");
    csv::Reader reader(in);
    std::vector<std::string> fields;
    try {
        reader.next(fields);
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}
