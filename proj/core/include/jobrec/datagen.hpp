#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jobrec/profile.hpp"

namespace jobrec {

// Generator knobs.  Counts per user have a floor of one (every profile has
// a current job, a highest education and at least a few skills), so the
// work/education means are matched by 1 + truncated Poisson.
struct GenSpec {
    size_t n_users = 7000;
    double signal_strength = 0.9;  // probability a skill/description/major follows the first-job title
    double mean_work = 2.19;       // work experiences per user, current job included
    double mean_edu = 1.76;        // educations per user
    double mean_skills = 19.72;    // skills per user
    int max_skills = 40;
    uint64_t seed = 42;
    std::vector<std::pair<std::string, double>> title_pool;  // empty -> built-in pool

    bool operator==(const GenSpec&) const = default;
};

// The six job titles the experiments target.
std::span<const std::string> target_titles();

// Title-specific skill phrases; titles without a dedicated pool share the
// background pool.  Every phrase is exactly three tokens.
const std::vector<std::string>& skill_phrases(std::string_view title);
const std::vector<std::string>& background_skill_phrases();

GenSpec default_gen_spec();

// Flat key=value file: n_users, signal_strength, mean_work_experiences,
// mean_educations, mean_skills, max_skills, seed, titles, title_weights.
// Unknown keys are errors.
GenSpec load_gen_spec(const std::string& path);

// Deterministic per seed; profiles come out ready for feature assembly
// (titles normalized, durations in months).
std::vector<Profile> generate_corpus(const GenSpec& spec);

// "id,first_title" sidecar; first_title is the current job title.
void write_truth(std::ostream& out, std::span<const Profile> profiles);

}  // namespace jobrec
