#include "jobrec/profile.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "jobrec/datagen.hpp"
#include "jobrec/error.hpp"

using namespace jobrec;

namespace {

Profile sample_profile() {
    Profile p;
    p.id = "u42";
    p.name = "dana smith";
    p.connections = 310;
    p.current_job.job_title = "software engineer";
    p.current_job.org_summary = "initech";
    p.current_job.org_detail = "large software company";
    p.current_job.location = "berlin";
    p.current_job.description = "owned scalable systems design";
    p.current_job.duration_months = 30;
    WorkExperience past;
    past.job_title = "consultant";
    past.org_summary = "deloitte";
    past.location = "london";
    past.description = "client account planning";
    past.duration_months = 40;
    p.past_jobs[0] = past;
    p.highest_education.university_name = "tu delft";
    p.highest_education.degree = "msc";
    p.highest_education.major = "computer science";
    p.highest_education.end_date = "2015";
    p.highest_education.detail = "thesis on compilers";
    p.skills = {"systems design", "data analysis"};
    p.languages = {"english", "dutch"};
    return p;
}

std::vector<Profile> small_corpus() {
    GenSpec spec = default_gen_spec();
    spec.n_users = 300;
    spec.seed = 5;
    return generate_corpus(spec);
}

}  // namespace

TEST(Profile, HeaderHas67Columns) {
    const auto& h = profile_csv_header();
    EXPECT_EQ(h.size(), 67u);
    EXPECT_EQ(h[0], "id");
    EXPECT_EQ(std::set<std::string>(h.begin(), h.end()).size(), h.size());
}

TEST(Profile, WriteParseRoundTrip) {
    std::vector<Profile> corpus = small_corpus();
    std::ostringstream out;
    write_profiles(out, corpus);
    std::istringstream in(out.str());
    ParseReport report;
    std::vector<Profile> back = parse_profiles(in, &report);
    EXPECT_EQ(report.malformed_rows, 0u);
    ASSERT_EQ(back.size(), corpus.size());
    // duration_norm is a corpus-level derivation, recomputed after parse
    normalize_durations(back);
    for (size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(back[i], corpus[i]);
}

TEST(Profile, ParseDuration) {
    EXPECT_EQ(parse_duration("3 years 2 months"), 38);
    EXPECT_EQ(parse_duration("1 year"), 12);
    EXPECT_EQ(parse_duration("1 year 1 month"), 13);
    EXPECT_EQ(parse_duration("7 months"), 7);
    EXPECT_EQ(parse_duration("2 Years 0 Months"), 24);
    EXPECT_EQ(parse_duration(""), std::nullopt);
    EXPECT_EQ(parse_duration("present"), std::nullopt);
    EXPECT_EQ(parse_duration("years"), std::nullopt);
}

TEST(Profile, NormalizeDurationsScalesByCorpusMax) {
    std::vector<Profile> v(2);
    v[0].current_job.duration_months = 50;
    WorkExperience w;
    w.job_title = "x";
    w.duration_months = 25;
    v[1].past_jobs[2] = w;
    normalize_durations(v);
    EXPECT_DOUBLE_EQ(v[0].current_job.duration_norm.value(), 1.0);
    EXPECT_DOUBLE_EQ(v[1].past_jobs[2]->duration_norm.value(), 0.5);
}

TEST(Profile, NormalizeTitle) {
    EXPECT_EQ(normalize_title("  Software   Engineer "), "software engineer");
    EXPECT_EQ(normalize_title("CONSULTANT"), "consultant");
    EXPECT_EQ(normalize_title(""), "");
}

TEST(Profile, LabelForTitle) {
    Profile p = sample_profile();
    EXPECT_EQ(label_for_title(p, "Software  Engineer"), 1);
    EXPECT_EQ(label_for_title(p, "consultant"), 0);
}

TEST(Profile, SubsetNamesRoundTrip) {
    for (FieldSubset s : {FieldSubset::All, FieldSubset::WorkExperience, FieldSubset::Education,
                          FieldSubset::Skills})
        EXPECT_EQ(field_subset_from_name(field_subset_name(s)).value(), s);
    EXPECT_FALSE(field_subset_from_name("everything").has_value());
}

TEST(Profile, AssembleSkillsSubset) {
    const Profile p = sample_profile();
    const std::string text = assemble_field_text(p, FieldSubset::Skills);
    EXPECT_NE(text.find("systems design"), std::string::npos);
    EXPECT_NE(text.find("data analysis"), std::string::npos);
    EXPECT_EQ(text.find("initech"), std::string::npos);
    EXPECT_EQ(text.find("tu delft"), std::string::npos);
    EXPECT_EQ(text.find("english"), std::string::npos);
}

TEST(Profile, AssembleEducationSubset) {
    const Profile p = sample_profile();
    const std::string text = assemble_field_text(p, FieldSubset::Education);
    EXPECT_NE(text.find("tu delft"), std::string::npos);
    EXPECT_NE(text.find("msc"), std::string::npos);
    EXPECT_NE(text.find("computer science"), std::string::npos);
    EXPECT_NE(text.find("thesis on compilers"), std::string::npos);
    EXPECT_EQ(text.find("2015"), std::string::npos);  // end dates are not features
    EXPECT_EQ(text.find("systems design"), std::string::npos);
}

TEST(Profile, AssembleWorkSubset) {
    const Profile p = sample_profile();
    const std::string text = assemble_field_text(p, FieldSubset::WorkExperience);
    EXPECT_NE(text.find("software engineer"), std::string::npos);
    EXPECT_NE(text.find("consultant"), std::string::npos);
    EXPECT_NE(text.find("deloitte"), std::string::npos);
    EXPECT_NE(text.find("berlin"), std::string::npos);
    EXPECT_NE(text.find("client account planning"), std::string::npos);
    EXPECT_EQ(text.find("tu delft"), std::string::npos);
    EXPECT_EQ(text.find("40"), std::string::npos);  // durations are not features
    EXPECT_EQ(text.find("u42"), std::string::npos);
    EXPECT_EQ(text.find("dana"), std::string::npos);
}

TEST(Profile, AssembleAllIncludesLanguages) {
    const Profile p = sample_profile();
    const std::string text = assemble_field_text(p, FieldSubset::All);
    EXPECT_NE(text.find("dutch"), std::string::npos);
    EXPECT_NE(text.find("software engineer"), std::string::npos);
    EXPECT_NE(text.find("tu delft"), std::string::npos);
    EXPECT_NE(text.find("systems design"), std::string::npos);
    EXPECT_EQ(text.find("310"), std::string::npos);
}

TEST(Profile, MalformedRowsReported) {
    std::ostringstream out;
    write_profiles(out, std::vector<Profile>{sample_profile()});
    std::string text = out.str();
    text += "short,row\n";
    std::istringstream in(text);
    ParseReport report;
    std::vector<Profile> got = parse_profiles(in, &report);
    EXPECT_EQ(got.size(), 2u);
    EXPECT_EQ(report.rows_read, 2u);
    EXPECT_EQ(report.malformed_rows, 1u);
    ASSERT_EQ(report.row_errors.size(), 1u);
    EXPECT_EQ(got[1].id, "short");
}

TEST(Profile, WrongHeaderWidthIsDataError) {
    std::istringstream in("id,name\nu1,bob\n");
    try {
        parse_profiles(in);
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}

TEST(Profile, BalancedSampleCountsAndOrder) {
    const std::vector<Profile> corpus = small_corpus();
    const LabeledDataset ds = balanced_sample(corpus, "software engineer", 20, 30, 99);
    ASSERT_EQ(ds.examples.size(), 50u);
    for (size_t i = 0; i < 20; ++i) EXPECT_EQ(ds.examples[i].second, 1);
    for (size_t i = 20; i < 50; ++i) EXPECT_EQ(ds.examples[i].second, 0);
    // each group ascends by profile index and repeats nothing
    std::set<size_t> seen;
    for (size_t i = 0; i < 50; ++i) seen.insert(ds.examples[i].first);
    EXPECT_EQ(seen.size(), 50u);
    for (size_t i = 1; i < 20; ++i) EXPECT_LT(ds.examples[i - 1].first, ds.examples[i].first);
    for (size_t i = 21; i < 50; ++i) EXPECT_LT(ds.examples[i - 1].first, ds.examples[i].first);
    // labels agree with the profiles
    for (const auto& [pi, label] : ds.examples)
        EXPECT_EQ(label, label_for_title(corpus[pi], "software engineer"));
}

TEST(Profile, BalancedSampleDeterministicAndSeedSensitive) {
    const std::vector<Profile> corpus = small_corpus();
    const LabeledDataset a = balanced_sample(corpus, "consultant", 15, 15, 7);
    const LabeledDataset b = balanced_sample(corpus, "consultant", 15, 15, 7);
    const LabeledDataset c = balanced_sample(corpus, "consultant", 15, 15, 8);
    EXPECT_EQ(a.examples, b.examples);
    EXPECT_NE(a.examples, c.examples);
}

TEST(Profile, BalancedSampleInsufficientPositives) {
    const std::vector<Profile> corpus = small_corpus();
    try {
        balanced_sample(corpus, "software engineer", 100000, 10, 1);
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Data);
    }
}

TEST(Profile, TrainTestSplitStratifiedSizes) {
    const std::vector<Profile> corpus = small_corpus();
    LabeledDataset ds = balanced_sample(corpus, "consultant", 20, 20, 3);
    train_test_split(ds, 0.8, 11);
    EXPECT_EQ(ds.train.size(), 32u);
    EXPECT_EQ(ds.test.size(), 8u);
    size_t train_pos = 0, test_pos = 0;
    for (size_t i : ds.train) train_pos += ds.examples[i].second;
    for (size_t i : ds.test) test_pos += ds.examples[i].second;
    EXPECT_EQ(train_pos, 16u);
    EXPECT_EQ(test_pos, 4u);
    std::set<size_t> all(ds.train.begin(), ds.train.end());
    all.insert(ds.test.begin(), ds.test.end());
    EXPECT_EQ(all.size(), 40u);
}

TEST(Profile, TrainTestSplitKeepsBothSidesNonEmpty) {
    const std::vector<Profile> corpus = small_corpus();
    LabeledDataset ds = balanced_sample(corpus, "consultant", 2, 2, 3);
    train_test_split(ds, 0.99, 1);
    EXPECT_GE(ds.train.size(), 2u);
    EXPECT_GE(ds.test.size(), 1u);
}

TEST(Profile, TrainTestSplitDeterministic) {
    const std::vector<Profile> corpus = small_corpus();
    LabeledDataset a = balanced_sample(corpus, "consultant", 20, 20, 3);
    LabeledDataset b = balanced_sample(corpus, "consultant", 20, 20, 3);
    train_test_split(a, 0.8, 5);
    train_test_split(b, 0.8, 5);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
}
