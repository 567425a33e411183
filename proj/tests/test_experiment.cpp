#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jobrec/csv.hpp"
#include "jobrec/datagen.hpp"
#include "jobrec/error.hpp"
#include "jobrec/experiment.hpp"

using namespace jobrec;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// one title, small sample, all defaults otherwise: 5 reps x 4 subsets
// minus the PV skips, times 8 algorithms
const char* kSmallGrid =
    "titles = consultant\n"
    "sampling.positives = 30\n"
    "sampling.negatives = 30\n"
    "data.source = generate\n";

std::vector<Profile> small_corpus() {
    GenSpec spec = default_gen_spec();
    spec.n_users = 600;
    spec.seed = 9;
    return generate_corpus(spec);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path(::testing::TempDir()) / name;
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Config, DefaultsFill) {
    const ExperimentConfig c = parse_text("");
    EXPECT_EQ(c.data_source, "generate");
    EXPECT_EQ(c.titles.size(), 6u);
    ASSERT_EQ(c.representations.size(), 3u);
    EXPECT_EQ(c.representations[0], Representation::Unigram);
    EXPECT_EQ(c.representations[2], Representation::Trigram);
    EXPECT_EQ(c.subsets.size(), 4u);
    EXPECT_EQ(c.algorithms.size(), 8u);
    EXPECT_EQ(c.dimred_k, 0);
    EXPECT_EQ(c.n_pos, 500u);
    EXPECT_EQ(c.n_neg, 500u);
    EXPECT_DOUBLE_EQ(c.split_fraction, 0.8);
    EXPECT_EQ(c.seed, 42u);
}

TEST(Config, RejectsUnknownAxisValue) {
    try {
        parse_text("algorithms = xgboost\n");
        FAIL() << "expected a config error";
    } catch (const Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("xgboost"), std::string::npos);
        EXPECT_NE(msg.find("random_forest"), std::string::npos);
    }
    EXPECT_THROW(parse_text("representations = char_ngram\n"), Error);
    EXPECT_THROW(parse_text("subsets = hobbies\n"), Error);
    EXPECT_THROW(parse_text("split.fraction = 1.0\n"), Error);
    EXPECT_THROW(parse_text("sampling.positives = 0\n"), Error);
    EXPECT_THROW(parse_text("nonsense.key = 1\n"), Error);
    EXPECT_THROW(parse_text("titles = consultant, consultant\n"), Error);
}

TEST(Config, DumpRoundTripsAndHashes) {
    const ExperimentConfig c = parse_text(
        "titles = consultant, software engineer\n"
        "representations = trigram, word_avg\n"
        "subsets = skills, work_experience\n"
        "algorithms = random_forest, naive_bayes\n"
        "dimred.k = 50\n"
        "sampling.positives = 40\n"
        "sampling.negatives = 60\n"
        "split.fraction = 0.75\n"
        "seed = 7\n"
        "embeddings.path = /dev/null\n"
        "pv.dim = 64\n"
        "cf.mode = asvdpp\n"
        "cf.threshold = 0.25\n");
    const ExperimentConfig back = parse_text(dump_config(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(config_hash(back), config_hash(c));

    ExperimentConfig d = c;
    d.seed = 8;
    EXPECT_NE(config_hash(d), config_hash(c));
}

TEST(Config, LoadValidatesPaths) {
    const fs::path dir = fs::path(::testing::TempDir());
    const fs::path cfg = dir / "exp.cfg";
    std::ofstream(cfg) << "data.source = csv\ndata.path = " << (dir / "missing.csv").string()
                       << "\n";
    EXPECT_THROW(load_config(cfg.string()), Error);
    EXPECT_THROW(load_config("/nonexistent/exp.cfg"), Error);
}

TEST(Grid, CellCountAndCanonicalOrder) {
    const ExperimentConfig c = parse_text(kSmallGrid);
    const std::vector<Profile> ps = small_corpus();
    ExperimentConfig tiny = c;
    tiny.representations = {Representation::Unigram};
    tiny.subsets = {FieldSubset::Skills};
    tiny.algorithms = {Algorithm::NaiveBayes};
    const EvalReport one = run_grid(tiny, ps);
    ASSERT_EQ(one.cells.size(), 1u);
    EXPECT_TRUE(one.cells[0].ok) << one.cells[0].error;
    EXPECT_EQ(one.cells[0].title, "consultant");

    ExperimentConfig defaults = c;  // 3 reps x 4 subsets x 8 algorithms
    const EvalReport full = run_grid(defaults, ps);
    EXPECT_EQ(full.cells.size(), 96u);
    EXPECT_TRUE(full.skipped.empty());

    // title-major, then representation, subset, algorithm
    size_t idx = 0;
    for (Representation r : defaults.representations)
        for (FieldSubset s : defaults.subsets)
            for (Algorithm a : defaults.algorithms) {
                EXPECT_EQ(full.cells[idx].representation, r);
                EXPECT_EQ(full.cells[idx].subset, s);
                EXPECT_EQ(full.cells[idx].algorithm, a);
                ++idx;
            }

    size_t failed = 0;
    for (const CellResult& cell : full.cells) failed += !cell.ok;
    EXPECT_EQ(failed, 0u);
}

TEST(Grid, ParagraphVectorRunsOnlyOnAllSubset) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.representations = {Representation::ParagraphVector};
    c.algorithms = {Algorithm::NaiveBayes, Algorithm::DecisionTree};
    c.pv.dim = 16;
    c.pv.epochs = 2;
    const EvalReport rep = run_grid(c, small_corpus());
    ASSERT_EQ(rep.cells.size(), 2u);  // All subset only
    for (const CellResult& cell : rep.cells) {
        EXPECT_EQ(cell.subset, FieldSubset::All);
        EXPECT_TRUE(cell.ok) << cell.error;
    }
    EXPECT_EQ(rep.skipped.size(), 3u);
    for (const std::string& s : rep.skipped)
        EXPECT_EQ(s.rfind("paragraph_vector x ", 0), 0u) << s;
}

TEST(Grid, PerTitleFailureIsCapturedNotThrown) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.titles = {"consultant", "definitely absent title"};
    c.representations = {Representation::Unigram};
    c.subsets = {FieldSubset::Skills};
    c.algorithms = {Algorithm::NaiveBayes};
    const EvalReport rep = run_grid(c, small_corpus());
    ASSERT_EQ(rep.cells.size(), 2u);
    EXPECT_TRUE(rep.cells[0].ok);
    EXPECT_FALSE(rep.cells[1].ok);
    EXPECT_FALSE(rep.cells[1].error.empty());
}

TEST(Grid, SerialAndParallelReportsAreIdentical) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.representations = {Representation::Unigram, Representation::Bigram};
    const std::vector<Profile> ps = small_corpus();
    const EvalReport serial = run_grid(c, ps, 1);
    const EvalReport parallel = run_grid(c, ps, 3);

    const fs::path d1 = fresh_dir("serial_rep");
    const fs::path d2 = fresh_dir("parallel_rep");
    write_report(serial, d1.string());
    write_report(parallel, d2.string());
    EXPECT_EQ(slurp(d1 / "results.csv"), slurp(d2 / "results.csv"));
    EXPECT_EQ(slurp(d1 / "macro_summary.csv"), slurp(d2 / "macro_summary.csv"));
    EXPECT_EQ(slurp(d1 / "manifest.txt"), slurp(d2 / "manifest.txt"));
}

TEST(Report, FilesRowsAndRerender) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.representations = {Representation::Unigram};
    c.algorithms = {Algorithm::NaiveBayes, Algorithm::DecisionTree, Algorithm::LogReg};
    const EvalReport rep = run_grid(c, small_corpus());
    const fs::path dir = fresh_dir("report_files");
    write_report(rep, dir.string());

    for (const char* name : {"results.csv", "timings.csv", "macro_summary.csv",
                             "manifest.txt", "config.cfg"})
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    EXPECT_TRUE(fs::exists(dir / "tables"));

    // one header plus one row per cell
    std::ifstream in(dir / "results.csv");
    csv::Reader reader(in);
    std::vector<std::string> row;
    size_t rows = 0;
    ASSERT_TRUE(reader.next(row));
    EXPECT_EQ(row[0], "title");
    while (reader.next(row)) ++rows;
    EXPECT_EQ(rows, rep.cells.size());

    // a rerender from results.csv reproduces the derived outputs exactly
    const std::string macro_before = slurp(dir / "macro_summary.csv");
    std::vector<std::pair<fs::path, std::string>> tables_before;
    for (const auto& entry : fs::directory_iterator(dir / "tables"))
        tables_before.emplace_back(entry.path(), slurp(entry.path()));
    ASSERT_FALSE(tables_before.empty());

    const std::string summary = rerender_report(dir.string());
    EXPECT_NE(summary.find("re-rendered"), std::string::npos);
    EXPECT_EQ(slurp(dir / "macro_summary.csv"), macro_before);
    for (const auto& [path, before] : tables_before) EXPECT_EQ(slurp(path), before);

    // config.cfg round-trips to the same config and hash
    const ExperimentConfig back = load_config((dir / "config.cfg").string());
    EXPECT_EQ(back, rep.config);
    EXPECT_EQ(config_hash(back), rep.hash);
}

TEST(Report, BestCellMarkersMatchColumnMax) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.representations = {Representation::Unigram, Representation::Bigram};
    c.algorithms = {Algorithm::NaiveBayes, Algorithm::DecisionTree};
    c.subsets = {FieldSubset::Skills};
    const EvalReport rep = run_grid(c, small_corpus());
    const fs::path dir = fresh_dir("report_tables");
    write_report(rep, dir.string());

    const fs::path table = dir / "tables" / "skills_accuracy.txt";
    ASSERT_TRUE(fs::exists(table));
    std::ifstream in(table);
    std::string line;
    std::getline(in, line);  // title line
    std::getline(in, line);  // blank separator
    std::getline(in, line);  // header
    // collect (value, starred) per representation row, column-major scan
    std::vector<std::vector<std::pair<double, bool>>> cols(2);
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string label;
        row >> label;
        for (size_t a = 0; a < 2; ++a) {
            std::string cell;
            row >> cell;
            ASSERT_FALSE(cell.empty());
            const bool starred = cell.back() == '*';
            if (starred) cell.pop_back();
            cols[a].emplace_back(std::stod(cell), starred);
        }
    }
    for (const auto& col : cols) {
        ASSERT_EQ(col.size(), 2u);
        double best = std::max(col[0].first, col[1].first);
        for (const auto& [v, starred] : col) EXPECT_EQ(starred, v == best);
    }
}

TEST(Report, EmptyReportStillWritesHeaders) {
    EvalReport rep;
    rep.config = parse_text(kSmallGrid);
    rep.hash = config_hash(rep.config);
    const fs::path dir = fresh_dir("report_empty");
    write_report(rep, dir.string());
    const std::string results = slurp(dir / "results.csv");
    EXPECT_EQ(results.rfind("title,", 0), 0u);
    EXPECT_EQ(std::count(results.begin(), results.end(), '\n'), 1);
}

TEST(Cf, RunAndReportSmoke) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.cf.epochs = 30;
    const CfReport rep = run_cf(c, small_corpus());
    ASSERT_EQ(rep.cells.size(), 1u);
    EXPECT_TRUE(rep.cells[0].ok) << rep.cells[0].error;
    EXPECT_EQ(rep.cells[0].mode, CfMode::SVDpp);
    EXPECT_GT(rep.cells[0].ratings.users(), 0u);

    const fs::path dir = fresh_dir("cf_report");
    write_cf_report(rep, dir.string());
    EXPECT_TRUE(fs::exists(dir / "cf_results.csv"));
    EXPECT_TRUE(fs::exists(dir / "cf_timings.csv"));
    EXPECT_TRUE(fs::exists(dir / "manifest.txt"));
    EXPECT_TRUE(fs::exists(dir / "ratings_consultant.csv"));
}

TEST(Features, DumpListsEveryGroup) {
    ExperimentConfig c = parse_text(kSmallGrid);
    c.representations = {Representation::Unigram, Representation::Trigram};
    std::stringstream out;
    dump_features(c, small_corpus(), out);
    std::string line;
    std::getline(out, line);
    EXPECT_EQ(line, "title\trepresentation\tsubset\trows\tcols\tstored");
    size_t rows = 0;
    while (std::getline(out, line)) ++rows;
    EXPECT_EQ(rows, 8u);  // 2 reps x 4 subsets
}

TEST(Corpus, CsvSourceErrors) {
    ExperimentConfig c;
    c.data_source = "csv";
    c.data_path = "/nonexistent/profiles.csv";
    EXPECT_THROW(load_corpus(c), Error);
    c.data_source = "torrent";
    EXPECT_THROW(load_corpus(c), Error);
}
