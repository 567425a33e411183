#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jobrec {

struct WorkExperience {
    std::string job_title;  // lowercase-normalized at parse time
    std::string org_summary;
    std::string org_detail;
    std::string location;
    std::string description;
    std::optional<int> duration_months;
    std::optional<double> duration_norm;  // set by normalize_durations

    bool empty() const {
        return job_title.empty() && org_summary.empty() && org_detail.empty() &&
               location.empty() && description.empty() && !duration_months.has_value();
    }
    bool operator==(const WorkExperience&) const = default;
};

struct Education {
    std::string university_name;
    std::string degree;
    std::string major;
    std::string end_date;  // parsed but never used as a feature
    std::string detail;

    bool empty() const {
        return university_name.empty() && degree.empty() && major.empty() &&
               end_date.empty() && detail.empty();
    }
    bool operator==(const Education&) const = default;
};

// One user profile.  Seven work-experience slots (current + 6 past) and
// four education slots (highest + 3 other) always exist structurally;
// absent past/other slots are nullopt.
struct Profile {
    std::string id;
    std::string name;      // excluded from features
    int connections = 0;   // excluded from features
    WorkExperience current_job;
    std::array<std::optional<WorkExperience>, 6> past_jobs;
    Education highest_education;
    std::array<std::optional<Education>, 3> other_educations;
    std::vector<std::string> skills;
    std::vector<std::string> languages;

    bool operator==(const Profile&) const = default;
};

struct ParseReport {
    size_t rows_read = 0;       // data rows seen (header excluded)
    size_t malformed_rows = 0;  // rows with wrong column count (kept, padded/truncated)
    std::vector<std::pair<size_t, std::string>> row_errors;  // (line, message)
};

// 67 column names, header order
const std::vector<std::string>& profile_csv_header();

// Reads header + rows.  Malformed rows (wrong column count) are recorded
// in the report and parsed with missing cells empty / extras dropped.
// Invalid UTF-8 is fatal.
std::vector<Profile> parse_profiles(std::istream& in, ParseReport* report = nullptr);

void write_profiles(std::ostream& out, std::span<const Profile> profiles);

// "x year(s) y month(s)" / "x year(s)" / "y month(s)", case-insensitive,
// anything else -> absent
std::optional<int> parse_duration(std::string_view text);

// duration_norm = duration_months / corpus max; see module contract
void normalize_durations(std::vector<Profile>& profiles);

// lowercase + trim + collapse internal whitespace runs to single spaces
std::string normalize_title(std::string_view s);

// 1 iff the current job title equals target_title after normalization
int label_for_title(const Profile& p, std::string_view target_title);

enum class FieldSubset { All, WorkExperience, Education, Skills };

const char* field_subset_name(FieldSubset s);
std::optional<FieldSubset> field_subset_from_name(std::string_view name);

// Space-joined text of the selected fields.  Durations, end dates, id,
// name and connections never contribute; languages only under All.
std::string assemble_field_text(const Profile& p, FieldSubset subset);

struct LabeledDataset {
    std::string target_title;
    std::vector<std::pair<size_t, int>> examples;  // (profile index, label)
    std::vector<size_t> train;                     // indices into examples
    std::vector<size_t> test;
};

// Uniform without-replacement sample of exactly n_pos positives and n_neg
// negatives for the title; examples list positives first, each group in
// ascending profile order.
LabeledDataset balanced_sample(std::span<const Profile> profiles, std::string_view target_title,
                               size_t n_pos, size_t n_neg, uint64_t seed);

// Stratified split; per class round(train_fraction * n) train examples,
// clamped so both sides stay nonempty.
void train_test_split(LabeledDataset& dataset, double train_fraction, uint64_t seed);

}  // namespace jobrec
