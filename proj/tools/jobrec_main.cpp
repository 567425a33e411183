// Command-line front end.  Exit codes: 0 success, 1 config error,
// 2 data error, 3 cell failures present in an otherwise completed run.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "jobrec/datagen.hpp"
#include "jobrec/error.hpp"
#include "jobrec/experiment.hpp"
#include "jobrec/profile.hpp"

namespace {

uint64_t parse_seed(const std::string& text) {
    uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || ptr != text.data() + text.size())
        jobrec::config_error("--seed must be a non-negative integer, got '" + text + "'");
    return seed;
}

std::ofstream open_out_file(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) jobrec::data_error("cannot write " + path);
    return out;
}

int run_command(const std::string& name, const std::string& config_path,
                const std::string& spec_path, const std::string& out_path,
                const std::string& in_dir, const std::string& seed_text, int jobs,
                bool verbose) {
    using namespace jobrec;
    std::ostream* log = verbose ? &std::cerr : nullptr;
    if (jobs < 1) config_error("--jobs must be >= 1");

    if (name == "datagen") {
        GenSpec spec = spec_path.empty() ? default_gen_spec() : load_gen_spec(spec_path);
        if (!seed_text.empty()) spec.seed = parse_seed(seed_text);
        const std::vector<Profile> profiles = generate_corpus(spec);
        std::filesystem::create_directories(out_path);
        auto profiles_out = open_out_file(out_path + "/profiles.csv");
        write_profiles(profiles_out, profiles);
        auto truth_out = open_out_file(out_path + "/truth.csv");
        write_truth(truth_out, profiles);
        if (verbose)
            std::cerr << "wrote " << profiles.size() << " profiles to " << out_path << "\n";
        return 0;
    }

    if (name == "report") {
        std::cout << rerender_report(in_dir) << "\n";
        return 0;
    }

    ExperimentConfig cfg = load_config(config_path);
    if (!seed_text.empty()) cfg.seed = parse_seed(seed_text);

    if (name == "run") {
        const std::vector<Profile> profiles = load_corpus(cfg);
        const EvalReport report = run_grid(cfg, profiles, jobs, log);
        write_report(report, out_path);
        size_t failed = 0;
        for (const CellResult& c : report.cells) failed += c.ok ? 0 : 1;
        std::cout << report.cells.size() << " cells, " << failed << " failed; report in "
                  << out_path << "\n";
        return failed == 0 ? 0 : 3;
    }
    if (name == "featurize") {
        const std::vector<Profile> profiles = load_corpus(cfg);
        auto out = open_out_file(out_path);
        dump_features(cfg, profiles, out);
        return 0;
    }
    if (name == "cf") {
        const std::vector<Profile> profiles = load_corpus(cfg);
        const CfReport report = run_cf(cfg, profiles, log);
        write_cf_report(report, out_path);
        size_t failed = 0;
        for (const CfCellResult& c : report.cells) failed += c.ok ? 0 : 1;
        std::cout << report.cells.size() << " cf cells, " << failed << " failed; report in "
                  << out_path << "\n";
        return failed == 0 ? 0 : 3;
    }
    config_error("unknown subcommand: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recommendation experiment engine"};
    app.require_subcommand(1);

    std::string config_path, spec_path, out_path, in_dir, seed_text;
    int jobs = 1;
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed_text, "override the master seed");
        sub->add_option("--jobs", jobs, "concurrent cell groups");
        sub->add_flag("--verbose", verbose, "log progress to stderr");
    };

    CLI::App* datagen = app.add_subcommand("datagen", "generate a synthetic profile corpus");
    datagen->add_option("--spec", spec_path, "generator spec file (default spec when omitted)");
    datagen->add_option("--out", out_path, "output directory")->required();
    add_common(datagen);

    CLI::App* run = app.add_subcommand("run", "run the experiment grid");
    run->add_option("--config", config_path, "experiment config")->required();
    run->add_option("--out", out_path, "report directory")->required();
    add_common(run);

    CLI::App* featurize =
        app.add_subcommand("featurize", "dump feature matrix shapes for the first title");
    featurize->add_option("--config", config_path, "experiment config")->required();
    featurize->add_option("--out", out_path, "output file")->required();
    add_common(featurize);

    CLI::App* cf = app.add_subcommand("cf", "run the collaborative-filtering experiment");
    cf->add_option("--config", config_path, "experiment config")->required();
    cf->add_option("--out", out_path, "report directory")->required();
    add_common(cf);

    CLI::App* report = app.add_subcommand("report", "re-render tables from an existing report");
    report->add_option("--in", in_dir, "report directory")->required();
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run_command(name, config_path, spec_path, out_path, in_dir, seed_text, jobs,
                           verbose);
    } catch (const jobrec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
