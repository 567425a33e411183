#include "jobrec/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>

#include "jobrec/csv.hpp"
#include "jobrec/error.hpp"
#include "jobrec/kvconfig.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {

namespace {

// Skill phrases are built from three disjoint word classes: the first word
// of a phrase is always a "lead" word, the second a "noun", the third a
// "tail".  Concatenating phrases therefore never forms another phrase
// across a boundary (a boundary trigram mixes the classes in the wrong
// order), so a title's phrases occur in exactly the documents that drew
// them.  Words deliberately recur across pools; only full phrases are
// discriminative.
const std::vector<std::string> kAccountManagerSkills = {
    "strategic account planning",      "client relationship management",
    "enterprise account management",   "client portfolio planning",
    "strategic market analysis",       "client engagement planning",
    "enterprise relationship management", "strategic portfolio forecasting",
    "client account reporting",        "enterprise market forecasting",
    "strategic engagement assessment", "client market planning",
    "enterprise account forecasting",  "strategic relationship reporting",
    "client portfolio assessment",     "enterprise engagement coordination",
    "financial account analysis",      "operational account management",
};

const std::vector<std::string> kSoftwareEngineerSkills = {
    "scalable systems design",         "technical infrastructure automation",
    "agile delivery planning",         "scalable data modeling",
    "technical systems testing",       "scalable infrastructure design",
    "agile process automation",        "technical data modeling",
    "digital systems optimization",    "scalable delivery automation",
    "technical workflow automation",   "digital infrastructure testing",
    "agile systems planning",          "technical process optimization",
    "scalable workflow design",        "digital delivery testing",
    "technical risk modeling",         "agile infrastructure coordination",
};

const std::vector<std::string> kResearchAssistantSkills = {
    "statistical data analysis",       "experimental research design",
    "statistical research modeling",   "experimental data assessment",
    "statistical research reporting",  "experimental process analysis",
    "statistical risk modeling",       "experimental systems analysis",
    "statistical data modeling",       "experimental research testing",
    "statistical workflow analysis",   "experimental data modeling",
    "statistical research assessment", "experimental risk assessment",
    "statistical market analysis",     "experimental workflow testing",
    "statistical process modeling",    "experimental research coordination",
};

const std::vector<std::string> kProjectManagerSkills = {
    "agile delivery coordination",     "operational risk planning",
    "strategic delivery management",   "operational resource planning",
    "agile resource coordination",     "strategic risk assessment",
    "operational delivery reporting",  "agile risk management",
    "strategic resource forecasting",  "operational workflow coordination",
    "agile engagement management",     "strategic process planning",
    "operational engagement reporting", "agile workflow management",
    "strategic delivery forecasting",  "operational process assessment",
    "financial resource reporting",    "digital delivery management",
};

const std::vector<std::string> kProcessEngineerSkills = {
    "industrial process optimization", "technical process design",
    "industrial workflow optimization", "operational process testing",
    "industrial systems testing",      "technical workflow assessment",
    "industrial risk analysis",        "operational systems automation",
    "industrial process modeling",     "technical systems coordination",
    "industrial infrastructure optimization", "operational workflow testing",
    "industrial data reporting",       "technical resource optimization",
    "industrial workflow modeling",    "operational infrastructure automation",
    "industrial process coordination", "scalable process testing",
};

const std::vector<std::string> kConsultantSkills = {
    "strategic engagement management", "financial market analysis",
    "digital process optimization",    "financial risk assessment",
    "strategic market planning",       "digital engagement optimization",
    "financial portfolio analysis",    "strategic data reporting",
    "digital market assessment",       "financial process reporting",
    "strategic workflow planning",     "digital engagement reporting",
    "financial market forecasting",    "strategic infrastructure planning",
    "digital data analysis",           "financial engagement analysis",
    "strategic risk reporting",        "digital workflow assessment",
};

const std::vector<std::string> kBackgroundSkills = {
    "operational data analysis",       "client systems testing",
    "financial data modeling",         "agile market planning",
    "industrial engagement planning",  "experimental portfolio design",
    "statistical account forecasting", "scalable market modeling",
    "digital account planning",        "technical engagement testing",
    "operational portfolio optimization", "strategic systems reporting",
    "client data coordination",        "industrial market assessment",
    "experimental delivery modeling",  "financial workflow forecasting",
    "agile account assessment",        "scalable research planning",
    "digital risk coordination",       "technical market management",
    "operational research optimization", "client infrastructure reporting",
    "statistical delivery design",     "enterprise data testing",
    "financial infrastructure management", "experimental account optimization",
    "digital relationship management",
};

const std::vector<std::string> kTargetTitles = {
    "account manager", "software engineer", "research assistant",
    "project manager", "process engineer",  "consultant",
};

const std::vector<std::pair<std::string, double>> kDefaultTitlePool = {
    {"account manager", 0.12},   {"software engineer", 0.12},
    {"research assistant", 0.12}, {"project manager", 0.12},
    {"process engineer", 0.12},  {"consultant", 0.12},
    {"sales associate", 0.05},   {"marketing specialist", 0.04},
    {"data analyst", 0.04},      {"financial analyst", 0.04},
    {"operations manager", 0.03}, {"hr coordinator", 0.03},
    {"business analyst", 0.03},  {"graphic designer", 0.02},
};

const std::vector<std::string> kFirstNames = {
    "anna",  "david", "maria",  "james", "wei",    "priya", "lucas", "sofia",
    "omar",  "elena", "pierre", "ingrid", "carlos", "yuki",  "ahmed", "petra",
};
const std::vector<std::string> kLastNames = {
    "mueller", "smith", "tanaka", "garcia", "kowalski", "chen", "dubois", "rossi",
    "novak",   "silva", "khan",   "berg",   "costa",    "ito",  "weber",  "moreau",
};
const std::vector<std::string> kCompanies = {
    "deloitte", "ibm",       "siemens",  "accenture", "pwc",     "infosys",
    "oracle",   "sap",       "capgemini", "unilever", "nestle",  "bosch",
    "philips",  "ericsson",  "nokia",    "airbus",
};
const std::vector<std::string> kOrgAdjectives = {"global", "leading", "regional", "independent"};
const std::vector<std::string> kOrgSectors = {
    "consulting", "manufacturing", "banking", "healthcare",
    "retail",     "telecom",       "energy",  "logistics",
};
const std::vector<std::string> kOrgNouns = {"firm", "company", "group", "provider"};
const std::vector<std::string> kCities = {
    "london", "berlin", "singapore", "toronto",  "sydney", "dublin", "amsterdam", "zurich",
    "mumbai", "austin", "seattle",   "boston",   "munich", "stockholm", "madrid", "lisbon",
};
const std::vector<std::string> kUniversities = {
    "university of manchester", "university of edinburgh", "national university of singapore",
    "university of toronto",    "university of melbourne", "trinity college dublin",
    "university of amsterdam",  "eth zurich",              "university of mumbai",
    "university of texas",      "northeastern university", "university of copenhagen",
    "university of stockholm",  "university of madrid",
};
const std::vector<std::string> kDegrees = {
    "bachelor of science", "master of science",       "bachelor of arts",
    "master of business administration", "doctor of philosophy", "bachelor of engineering",
};
const std::vector<std::string> kGeneralMajors = {
    "accounting", "sociology", "physics", "mathematics", "psychology", "history",
};
const std::vector<std::string> kEduDetails = {
    "graduated with honors", "exchange semester abroad", "dean list award",
    "student society member",
};
const std::vector<std::string> kDescriptionOpeners = {"responsible for", "led", "owned", "drove"};
const std::vector<std::string> kExtraLanguages = {
    "spanish", "french", "german", "mandarin", "hindi", "portuguese",
};

const std::string& major_for(const std::string& title) {
    static const std::vector<std::pair<std::string, std::string>> kMajors = {
        {"account manager", "marketing"},   {"software engineer", "computer science"},
        {"research assistant", "biology"},  {"project manager", "civil engineering"},
        {"process engineer", "chemistry"},  {"consultant", "economics"},
    };
    for (const auto& [t, m] : kMajors)
        if (t == title) return m;
    static const std::string kNone;
    return kNone;
}

void validate(const GenSpec& spec) {
    if (spec.n_users < 1) config_error("datagen n_users must be >= 1");
    if (spec.signal_strength < 0.0 || spec.signal_strength > 1.0)
        config_error("datagen signal_strength must lie in [0,1]");
    if (spec.mean_work <= 0.0 || spec.mean_edu <= 0.0 || spec.mean_skills <= 0.0)
        config_error("datagen means must be positive");
    if (spec.max_skills < 1) config_error("datagen max_skills must be >= 1");
    for (const auto& [title, w] : spec.title_pool) {
        if (title.empty()) config_error("datagen title_pool contains an empty title");
        if (w <= 0.0) config_error("datagen title weight must be positive: " + title);
    }
}

class Generator {
public:
    Generator(const GenSpec& spec) : spec_(spec), rng_(spec.seed) {
        for (const auto& [title, w] : spec_.title_pool) {
            titles_.push_back(title);
            weights_.push_back(w);
        }
    }

    std::vector<Profile> run() {
        std::vector<Profile> out;
        out.reserve(spec_.n_users);
        for (size_t i = 0; i < spec_.n_users; ++i) out.push_back(make_profile(i));
        normalize_durations(out);
        return out;
    }

private:
    const std::string& draw_phrase(const std::string& first_title) {
        const auto& pool = rng_.uniform() < spec_.signal_strength ? skill_phrases(first_title)
                                                                  : background_skill_phrases();
        return pool[rng_.below(pool.size())];
    }

    WorkExperience make_job(const std::string& title, const std::string& first_title,
                            bool is_past) {
        WorkExperience job;
        job.job_title = title;
        job.org_summary = kCompanies[rng_.below(kCompanies.size())];
        job.org_detail = kOrgAdjectives[rng_.below(kOrgAdjectives.size())] + " " +
                         kOrgSectors[rng_.below(kOrgSectors.size())] + " " +
                         kOrgNouns[rng_.below(kOrgNouns.size())];
        job.location = kCities[rng_.below(kCities.size())];
        if (rng_.uniform() < (is_past ? 0.9 : 0.92)) {
            if (is_past && title == first_title)
                job.duration_months = 24 + static_cast<int>(rng_.below(97));
            else if (is_past)
                job.duration_months = 3 + static_cast<int>(rng_.below(58));
            else
                job.duration_months = 6 + static_cast<int>(rng_.below(115));
        }
        std::string desc = kDescriptionOpeners[rng_.below(kDescriptionOpeners.size())];
        desc += " " + draw_phrase(first_title);
        desc += " and " + draw_phrase(first_title);
        if (rng_.uniform() < 0.3) desc += " across multiple teams";
        job.description = std::move(desc);
        return job;
    }

    Education make_education(const std::string& first_title) {
        Education ed;
        ed.university_name = kUniversities[rng_.below(kUniversities.size())];
        ed.degree = kDegrees[rng_.below(kDegrees.size())];
        const std::string& aligned = major_for(first_title);
        const bool use_aligned = rng_.uniform() < spec_.signal_strength && !aligned.empty();
        ed.major = use_aligned ? aligned : kGeneralMajors[rng_.below(kGeneralMajors.size())];
        ed.end_date = std::to_string(1998 + rng_.below(25));
        if (rng_.uniform() < 0.5) ed.detail = kEduDetails[rng_.below(kEduDetails.size())];
        return ed;
    }

    Profile make_profile(size_t index) {
        Profile p;
        char id[16];
        std::snprintf(id, sizeof id, "u%06zu", index + 1);
        p.id = id;
        const std::string& title = titles_[rng_.weighted(weights_)];
        p.name = kFirstNames[rng_.below(kFirstNames.size())] + " " +
                 kLastNames[rng_.below(kLastNames.size())];
        p.connections = static_cast<int>(rng_.below(3000));

        const int n_work = 1 + std::min(rng_.poisson(std::max(0.0, spec_.mean_work - 1.0)), 6);
        p.current_job = make_job(title, title, false);
        for (int i = 0; i < n_work - 1; ++i) {
            const std::string& past = rng_.uniform() < 0.5 * spec_.signal_strength
                                          ? title
                                          : titles_[rng_.weighted(weights_)];
            p.past_jobs[i] = make_job(past, title, true);
        }

        const int n_edu = 1 + std::min(rng_.poisson(std::max(0.0, spec_.mean_edu - 1.0)), 3);
        p.highest_education = make_education(title);
        for (int i = 0; i < n_edu - 1; ++i) p.other_educations[i] = make_education(title);

        const int wanted = std::clamp(rng_.poisson(spec_.mean_skills), 3, spec_.max_skills);
        const int attempts_cap = 8 * wanted;
        for (int a = 0; a < attempts_cap && static_cast<int>(p.skills.size()) < wanted; ++a) {
            const std::string& phrase = draw_phrase(title);
            if (std::find(p.skills.begin(), p.skills.end(), phrase) == p.skills.end())
                p.skills.push_back(phrase);
        }

        p.languages.push_back("english");
        if (rng_.uniform() < 0.4) {
            const std::string& l = kExtraLanguages[rng_.below(kExtraLanguages.size())];
            p.languages.push_back(l);
            if (rng_.uniform() < 0.15) {
                const std::string& l2 = kExtraLanguages[rng_.below(kExtraLanguages.size())];
                if (l2 != l) p.languages.push_back(l2);
            }
        }
        return p;
    }

    const GenSpec& spec_;
    Rng rng_;
    std::vector<std::string> titles_;
    std::vector<double> weights_;
};

}  // namespace

std::span<const std::string> target_titles() { return kTargetTitles; }

const std::vector<std::string>& skill_phrases(std::string_view title) {
    if (title == "account manager") return kAccountManagerSkills;
    if (title == "software engineer") return kSoftwareEngineerSkills;
    if (title == "research assistant") return kResearchAssistantSkills;
    if (title == "project manager") return kProjectManagerSkills;
    if (title == "process engineer") return kProcessEngineerSkills;
    if (title == "consultant") return kConsultantSkills;
    return kBackgroundSkills;
}

const std::vector<std::string>& background_skill_phrases() { return kBackgroundSkills; }

GenSpec default_gen_spec() {
    GenSpec spec;
    spec.title_pool = kDefaultTitlePool;
    return spec;
}

GenSpec load_gen_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open datagen spec: " + path);
    KvFile kv = KvFile::parse(in);
    GenSpec spec = default_gen_spec();
    spec.n_users = static_cast<size_t>(kv.get_int("n_users", static_cast<int64_t>(spec.n_users)));
    spec.signal_strength = kv.get_double("signal_strength", spec.signal_strength);
    spec.mean_work = kv.get_double("mean_work_experiences", spec.mean_work);
    spec.mean_edu = kv.get_double("mean_educations", spec.mean_edu);
    spec.mean_skills = kv.get_double("mean_skills", spec.mean_skills);
    spec.max_skills = static_cast<int>(kv.get_int("max_skills", spec.max_skills));
    spec.seed = static_cast<uint64_t>(kv.get_int("seed", static_cast<int64_t>(spec.seed)));
    if (kv.has("titles") || kv.has("title_weights")) {
        const auto names = kv.get_list("titles", {});
        const auto weight_text = kv.get_list("title_weights", {});
        if (names.size() != weight_text.size() || names.empty())
            config_error("titles and title_weights must be non-empty lists of equal length");
        spec.title_pool.clear();
        for (size_t i = 0; i < names.size(); ++i) {
            char* end = nullptr;
            const double w = std::strtod(weight_text[i].c_str(), &end);
            if (end == weight_text[i].c_str() || *end != '\0')
                config_error("title_weights entry is not a number: " + weight_text[i]);
            spec.title_pool.emplace_back(normalize_title(names[i]), w);
        }
    }
    kv.check_consumed();
    validate(spec);
    return spec;
}

std::vector<Profile> generate_corpus(const GenSpec& spec) {
    GenSpec filled = spec;
    if (filled.title_pool.empty()) filled.title_pool = kDefaultTitlePool;
    validate(filled);
    return Generator(filled).run();
}

void write_truth(std::ostream& out, std::span<const Profile> profiles) {
    csv::write_row(out, {"id", "first_title"});
    for (const Profile& p : profiles) csv::write_row(out, {p.id, p.current_job.job_title});
}

}  // namespace jobrec
