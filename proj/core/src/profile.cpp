#include "jobrec/profile.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>
#include <regex>

#include "jobrec/csv.hpp"
#include "jobrec/error.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {
namespace {

constexpr size_t kColumns = 67;

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& cell) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : cell) {
        if (c == ',') {
            std::string t = trim(cur);
            if (!t.empty()) out.push_back(std::move(t));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    std::string t = trim(cur);
    if (!t.empty()) out.push_back(std::move(t));
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void append_work_header(std::vector<std::string>& h, const std::string& prefix) {
    h.push_back(prefix + "_title");
    h.push_back(prefix + "_org_summary");
    h.push_back(prefix + "_org_detail");
    h.push_back(prefix + "_duration");
    h.push_back(prefix + "_location");
    h.push_back(prefix + "_description");
}

void append_edu_header(std::vector<std::string>& h, const std::string& prefix) {
    h.push_back(prefix + "_university");
    h.push_back(prefix + "_degree");
    h.push_back(prefix + "_major");
    h.push_back(prefix + "_end_date");
    h.push_back(prefix + "_detail");
}

WorkExperience parse_work(const std::vector<std::string>& row, size_t base) {
    WorkExperience w;
    w.job_title = normalize_title(row[base]);
    w.org_summary = trim(row[base + 1]);
    w.org_detail = trim(row[base + 2]);
    w.duration_months = parse_duration(row[base + 3]);
    w.location = trim(row[base + 4]);
    w.description = trim(row[base + 5]);
    return w;
}

Education parse_edu(const std::vector<std::string>& row, size_t base) {
    Education e;
    e.university_name = trim(row[base]);
    e.degree = trim(row[base + 1]);
    e.major = trim(row[base + 2]);
    e.end_date = trim(row[base + 3]);
    e.detail = trim(row[base + 4]);
    return e;
}

std::string duration_text(const std::optional<int>& months) {
    if (!months) return "";
    int y = *months / 12, m = *months % 12;
    std::string out;
    if (y > 0) out = std::to_string(y) + (y == 1 ? " year" : " years");
    if (m > 0 || y == 0) {
        if (!out.empty()) out += " ";
        out += std::to_string(m) + (m == 1 ? " month" : " months");
    }
    return out;
}

void append_work_cells(std::vector<std::string>& row, const WorkExperience& w) {
    row.push_back(w.job_title);
    row.push_back(w.org_summary);
    row.push_back(w.org_detail);
    row.push_back(duration_text(w.duration_months));
    row.push_back(w.location);
    row.push_back(w.description);
}

void append_edu_cells(std::vector<std::string>& row, const Education& e) {
    row.push_back(e.university_name);
    row.push_back(e.degree);
    row.push_back(e.major);
    row.push_back(e.end_date);
    row.push_back(e.detail);
}

void append_text(std::string& out, std::string_view piece) {
    if (piece.empty()) return;
    if (!out.empty()) out.push_back(' ');
    out += piece;
}

void append_work_text(std::string& out, const WorkExperience& w) {
    append_text(out, w.job_title);
    append_text(out, w.org_summary);
    append_text(out, w.org_detail);
    append_text(out, w.location);
    append_text(out, w.description);
}

void append_edu_text(std::string& out, const Education& e) {
    append_text(out, e.university_name);
    append_text(out, e.degree);
    append_text(out, e.major);
    append_text(out, e.detail);
}

}  // namespace

const std::vector<std::string>& profile_csv_header() {
    static const std::vector<std::string> header = [] {
        std::vector<std::string> h = {"id", "name", "connections"};
        append_work_header(h, "current_job");
        for (int i = 1; i <= 6; ++i) append_work_header(h, "past_job" + std::to_string(i));
        append_edu_header(h, "highest_education");
        for (int i = 1; i <= 3; ++i) append_edu_header(h, "other_education" + std::to_string(i));
        h.push_back("skills");
        h.push_back("languages");
        return h;
    }();
    return header;
}

std::optional<int> parse_duration(std::string_view text) {
    static const std::regex both(R"(^\s*(\d+)\s*years?\s+(\d+)\s*months?\s*$)", std::regex::icase);
    static const std::regex years_only(R"(^\s*(\d+)\s*years?\s*$)", std::regex::icase);
    static const std::regex months_only(R"(^\s*(\d+)\s*months?\s*$)", std::regex::icase);
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_match(text.begin(), text.end(), m, both))
        return 12 * std::stoi(m[1]) + std::stoi(m[2]);
    if (std::regex_match(text.begin(), text.end(), m, years_only))
        return 12 * std::stoi(m[1]);
    if (std::regex_match(text.begin(), text.end(), m, months_only))
        return std::stoi(m[1]);
    return std::nullopt;
}

std::vector<Profile> parse_profiles(std::istream& in, ParseReport* report) {
    csv::Reader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) data_error("empty profile CSV: missing header");
    if (row.size() != kColumns)
        data_error("profile CSV header has " + std::to_string(row.size()) +
                   " columns, expected " + std::to_string(kColumns));

    std::vector<Profile> profiles;
    ParseReport local;
    while (reader.next(row)) {
        ++local.rows_read;
        if (row.size() != kColumns) {
            ++local.malformed_rows;
            local.row_errors.emplace_back(
                reader.record_line(),
                "expected " + std::to_string(kColumns) + " cells, got " + std::to_string(row.size()));
            row.resize(kColumns);  // extras dropped, missing cells empty
        }
        Profile p;
        p.id = trim(row[0]);
        p.name = trim(row[1]);
        {
            char* end = nullptr;
            long v = std::strtol(row[2].c_str(), &end, 10);
            p.connections = (end != row[2].c_str()) ? static_cast<int>(v) : 0;
        }
        p.current_job = parse_work(row, 3);
        for (int i = 0; i < 6; ++i) {
            WorkExperience w = parse_work(row, 9 + 6 * static_cast<size_t>(i));
            if (!w.empty()) p.past_jobs[i] = std::move(w);
        }
        p.highest_education = parse_edu(row, 45);
        for (int i = 0; i < 3; ++i) {
            Education e = parse_edu(row, 50 + 5 * static_cast<size_t>(i));
            if (!e.empty()) p.other_educations[i] = std::move(e);
        }
        p.skills = split_commas(row[65]);
        p.languages = split_commas(row[66]);
        profiles.push_back(std::move(p));
    }
    if (report) *report = std::move(local);
    return profiles;
}

void write_profiles(std::ostream& out, std::span<const Profile> profiles) {
    csv::write_row(out, profile_csv_header());
    std::vector<std::string> row;
    for (const Profile& p : profiles) {
        row.clear();
        row.push_back(p.id);
        row.push_back(p.name);
        row.push_back(std::to_string(p.connections));
        append_work_cells(row, p.current_job);
        for (const auto& w : p.past_jobs) {
            if (w) append_work_cells(row, *w);
            else row.insert(row.end(), 6, "");
        }
        append_edu_cells(row, p.highest_education);
        for (const auto& e : p.other_educations) {
            if (e) append_edu_cells(row, *e);
            else row.insert(row.end(), 5, "");
        }
        row.push_back(join(p.skills, ", "));
        row.push_back(join(p.languages, ", "));
        csv::write_row(out, row);
    }
}

void normalize_durations(std::vector<Profile>& profiles) {
    int max_months = 0;
    auto scan = [&](const WorkExperience& w) {
        if (w.duration_months) max_months = std::max(max_months, *w.duration_months);
    };
    for (const auto& p : profiles) {
        scan(p.current_job);
        for (const auto& w : p.past_jobs)
            if (w) scan(*w);
    }
    auto apply = [&](WorkExperience& w) {
        if (w.duration_months && max_months > 0)
            w.duration_norm = static_cast<double>(*w.duration_months) / max_months;
        else
            w.duration_norm.reset();
    };
    for (auto& p : profiles) {
        apply(p.current_job);
        for (auto& w : p.past_jobs)
            if (w) apply(*w);
    }
}

std::string normalize_title(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isspace(u)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

int label_for_title(const Profile& p, std::string_view target_title) {
    std::string target = normalize_title(target_title);
    if (target.empty()) return 0;
    return normalize_title(p.current_job.job_title) == target ? 1 : 0;
}

const char* field_subset_name(FieldSubset s) {
    switch (s) {
        case FieldSubset::All: return "all";
        case FieldSubset::WorkExperience: return "work_experience";
        case FieldSubset::Education: return "education";
        case FieldSubset::Skills: return "skills";
    }
    return "all";
}

std::optional<FieldSubset> field_subset_from_name(std::string_view name) {
    if (name == "all") return FieldSubset::All;
    if (name == "work_experience") return FieldSubset::WorkExperience;
    if (name == "education") return FieldSubset::Education;
    if (name == "skills") return FieldSubset::Skills;
    return std::nullopt;
}

std::string assemble_field_text(const Profile& p, FieldSubset subset) {
    std::string out;
    bool want_work = subset == FieldSubset::All || subset == FieldSubset::WorkExperience;
    bool want_edu = subset == FieldSubset::All || subset == FieldSubset::Education;
    bool want_skills = subset == FieldSubset::All || subset == FieldSubset::Skills;
    if (want_work) {
        append_work_text(out, p.current_job);
        for (const auto& w : p.past_jobs)
            if (w) append_work_text(out, *w);
    }
    if (want_edu) {
        append_edu_text(out, p.highest_education);
        for (const auto& e : p.other_educations)
            if (e) append_edu_text(out, *e);
    }
    if (want_skills) {
        for (const auto& s : p.skills) append_text(out, s);
    }
    if (subset == FieldSubset::All) {
        for (const auto& l : p.languages) append_text(out, l);
    }
    return out;
}

LabeledDataset balanced_sample(std::span<const Profile> profiles, std::string_view target_title,
                               size_t n_pos, size_t n_neg, uint64_t seed) {
    std::string target = normalize_title(target_title);
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < profiles.size(); ++i) {
        if (label_for_title(profiles[i], target)) pos.push_back(i);
        else neg.push_back(i);
    }
    if (pos.size() < n_pos)
        data_error("title '" + target + "': need " + std::to_string(n_pos) +
                   " positives, corpus has " + std::to_string(pos.size()));
    if (neg.size() < n_neg)
        data_error("title '" + target + "': need " + std::to_string(n_neg) +
                   " negatives, corpus has " + std::to_string(neg.size()));

    Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);
    pos.resize(n_pos);
    neg.resize(n_neg);
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    LabeledDataset ds;
    ds.target_title = target;
    ds.examples.reserve(n_pos + n_neg);
    for (size_t i : pos) ds.examples.emplace_back(i, 1);
    for (size_t i : neg) ds.examples.emplace_back(i, 0);
    return ds;
}

void train_test_split(LabeledDataset& dataset, double train_fraction, uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        config_error("train_fraction must be in (0,1)");
    std::vector<size_t> by_label[2];
    for (size_t k = 0; k < dataset.examples.size(); ++k)
        by_label[dataset.examples[k].second].push_back(k);

    Rng rng(seed);
    dataset.train.clear();
    dataset.test.clear();
    for (int label : {1, 0}) {
        auto& idx = by_label[label];
        if (idx.empty()) continue;
        if (idx.size() < 2)
            data_error("label " + std::to_string(label) + " has fewer than 2 examples");
        rng.shuffle(idx);
        auto n_train = static_cast<size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
        n_train = std::clamp<size_t>(n_train, 1, idx.size() - 1);
        dataset.train.insert(dataset.train.end(), idx.begin(), idx.begin() + static_cast<long>(n_train));
        dataset.test.insert(dataset.test.end(), idx.begin() + static_cast<long>(n_train), idx.end());
    }
    std::sort(dataset.train.begin(), dataset.train.end());
    std::sort(dataset.test.begin(), dataset.test.end());
}

}  // namespace jobrec
