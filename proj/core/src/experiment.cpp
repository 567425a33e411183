#include "jobrec/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "jobrec/datagen.hpp"
#include "jobrec/embeddings.hpp"
#include "jobrec/error.hpp"
#include "jobrec/kvconfig.hpp"
#include "jobrec/rng.hpp"
#include "jobrec/svd.hpp"
#include "jobrec/text_features.hpp"

namespace jobrec {

namespace {

const std::vector<std::pair<Representation, const char*>> kRepNames = {
    {Representation::Unigram, "unigram"},
    {Representation::Bigram, "bigram"},
    {Representation::Trigram, "trigram"},
    {Representation::WordAvg, "word_avg"},
    {Representation::ParagraphVector, "paragraph_vector"},
};

template <class Enum>
std::string allowed_values(const std::vector<std::pair<Enum, const char*>>& names) {
    std::string out;
    for (const auto& [v, name] : names) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

// shortest decimal form that parses back to the same double
std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ",";
        out += p;
    }
    return out;
}

void require_unique(const std::vector<std::string>& values, const std::string& key) {
    std::set<std::string> seen;
    for (const auto& v : values)
        if (!seen.insert(v).second) config_error(key + " lists '" + v + "' more than once");
}

std::vector<std::string> default_title_list() {
    auto span = target_titles();
    return {span.begin(), span.end()};
}

struct TitleData {
    bool ok = false;
    std::string error;
    LabeledDataset ds;
    std::vector<int> labels;  // per example
};

TitleData prepare_title(const ExperimentConfig& cfg, std::span<const Profile> profiles,
                        const std::string& title) {
    TitleData td;
    try {
        td.ds = balanced_sample(profiles, title, cfg.n_pos, cfg.n_neg,
                                derive_seed(cfg.seed, "sample:" + title));
        train_test_split(td.ds, cfg.split_fraction, derive_seed(cfg.seed, "split:" + title));
        td.labels.reserve(td.ds.examples.size());
        for (const auto& [pi, label] : td.ds.examples) td.labels.push_back(label);
        td.ok = true;
    } catch (const Error& e) {
        td.error = e.what();
    }
    return td;
}

std::string group_key(const std::string& title, Representation rep, FieldSubset subset) {
    return title + ":" + representation_name(rep) + ":" + field_subset_name(subset);
}

// Feature rows follow dataset.examples order.  Vocabularies, paragraph
// vectors and the rank-k projection are fitted on the training rows only.
FeatureMatrix build_features(const ExperimentConfig& cfg, std::span<const Profile> profiles,
                             const TitleData& td, const std::string& title, Representation rep,
                             FieldSubset subset, const EmbeddingTable* table) {
    const size_t n = td.ds.examples.size();
    std::vector<std::vector<std::string>> tokens(n);
    for (size_t i = 0; i < n; ++i)
        tokens[i] = tokenize(assemble_field_text(profiles[td.ds.examples[i].first], subset));

    FeatureMatrix features;
    if (rep == Representation::Unigram || rep == Representation::Bigram ||
        rep == Representation::Trigram) {
        const int order = rep == Representation::Unigram ? 1
                          : rep == Representation::Bigram ? 2
                                                          : 3;
        std::vector<std::vector<std::string>> train_tokens;
        train_tokens.reserve(td.ds.train.size());
        for (size_t idx : td.ds.train) train_tokens.push_back(tokens[idx]);
        const Vocabulary vocab = Vocabulary::build(train_tokens, {order, 1});
        features = FeatureMatrix(vectorize_corpus(tokens, vocab));
    } else if (rep == Representation::WordAvg) {
        DenseMatrix dense(n, table->dim);
        for (size_t i = 0; i < n; ++i) {
            const DocVector dv = embed_document_avg(tokens[i], *table);
            std::copy(dv.values.begin(), dv.values.end(), dense.row(i).begin());
        }
        features = FeatureMatrix(std::move(dense));
    } else {
        PvConfig pv = cfg.pv;
        pv.seed = derive_seed(cfg.seed, "pv:" + title);
        std::vector<std::vector<std::string>> train_tokens;
        train_tokens.reserve(td.ds.train.size());
        for (size_t idx : td.ds.train) train_tokens.push_back(tokens[idx]);
        const ParagraphVectorModel model = train_paragraph_vectors(train_tokens, pv);
        DenseMatrix dense(n, static_cast<size_t>(pv.dim));
        for (size_t j = 0; j < td.ds.train.size(); ++j) {
            auto src = model.doc_vectors().row(j);
            std::copy(src.begin(), src.end(), dense.row(td.ds.train[j]).begin());
        }
        for (size_t idx : td.ds.test) {
            const InferredVector iv =
                infer_doc_vector(tokens[idx], model, pv.epochs, pv.learning_rate,
                                 derive_seed(cfg.seed, "pv_infer:" + title + ":" +
                                                           std::to_string(idx)));
            std::copy(iv.values.begin(), iv.values.end(), dense.row(idx).begin());
        }
        features = FeatureMatrix(std::move(dense));
    }

    if (cfg.dimred_k > 0) {
        const SVDResult svd =
            truncated_svd(features.select_rows(td.ds.train), cfg.dimred_k,
                          derive_seed(cfg.seed, "svd:" + group_key(title, rep, subset)));
        features = FeatureMatrix(project(features, svd));
    }
    return features;
}

}  // namespace

const char* representation_name(Representation r) {
    for (const auto& [v, name] : kRepNames)
        if (v == r) return name;
    return "unigram";
}

std::optional<Representation> representation_from_name(std::string_view name) {
    for (const auto& [v, n] : kRepNames)
        if (name == n) return v;
    return std::nullopt;
}

ExperimentConfig parse_config(std::istream& in) {
    KvFile kv = KvFile::parse(in);
    ExperimentConfig cfg;

    cfg.data_source = kv.get_string("data.source", "generate");
    if (cfg.data_source != "generate" && cfg.data_source != "csv")
        config_error("data.source must be 'generate' or 'csv', got '" + cfg.data_source + "'");
    cfg.data_path = kv.get_string("data.path", "");
    cfg.gen_spec_path = kv.get_string("data.spec", "");
    if (cfg.data_source == "csv" && cfg.data_path.empty())
        config_error("data.source = csv requires data.path");

    cfg.titles = kv.get_list("titles", default_title_list());
    for (std::string& t : cfg.titles) t = normalize_title(t);
    if (cfg.titles.empty()) config_error("titles must name at least one job title");
    require_unique(cfg.titles, "titles");

    const auto rep_names = kv.get_list("representations", {"unigram", "bigram", "trigram"});
    if (rep_names.empty()) config_error("representations must name at least one representation");
    require_unique(rep_names, "representations");
    for (const auto& name : rep_names) {
        const auto rep = representation_from_name(name);
        if (!rep)
            config_error("representations: unknown value '" + name +
                         "' (allowed: " + allowed_values(kRepNames) + ")");
        cfg.representations.push_back(*rep);
    }

    const auto subset_names =
        kv.get_list("subsets", {"all", "work_experience", "education", "skills"});
    if (subset_names.empty()) config_error("subsets must name at least one field subset");
    require_unique(subset_names, "subsets");
    for (const auto& name : subset_names) {
        const auto s = field_subset_from_name(name);
        if (!s)
            config_error("subsets: unknown value '" + name +
                         "' (allowed: all, work_experience, education, skills)");
        cfg.subsets.push_back(*s);
    }

    const auto algo_names =
        kv.get_list("algorithms", {"logreg", "logreg_cv", "linear_svm", "svc", "nusvc",
                                   "naive_bayes", "decision_tree", "random_forest"});
    if (algo_names.empty()) config_error("algorithms must name at least one algorithm");
    require_unique(algo_names, "algorithms");
    for (const auto& name : algo_names) {
        const auto a = algorithm_from_name(name);
        if (!a)
            config_error("algorithms: unknown value '" + name +
                         "' (allowed: logreg, logreg_cv, linear_svm, svc, nusvc, naive_bayes, "
                         "decision_tree, random_forest)");
        cfg.algorithms.push_back(*a);
    }

    cfg.dimred_k = static_cast<int>(kv.get_int("dimred.k", 0));
    if (cfg.dimred_k < 0) config_error("dimred.k must be >= 0");
    cfg.n_pos = static_cast<size_t>(kv.get_int("sampling.positives", 500));
    cfg.n_neg = static_cast<size_t>(kv.get_int("sampling.negatives", 500));
    if (cfg.n_pos < 1 || cfg.n_neg < 1)
        config_error("sampling.positives and sampling.negatives must be >= 1");
    cfg.split_fraction = kv.get_double("split.fraction", 0.8);
    if (cfg.split_fraction <= 0.0 || cfg.split_fraction >= 1.0)
        config_error("split.fraction must lie strictly between 0 and 1");
    cfg.seed = static_cast<uint64_t>(kv.get_int("seed", 42));

    cfg.embeddings_path = kv.get_string("embeddings.path", "");
    const bool wants_word_avg =
        std::find(cfg.representations.begin(), cfg.representations.end(),
                  Representation::WordAvg) != cfg.representations.end();
    if (wants_word_avg && cfg.embeddings_path.empty())
        config_error("representations include word_avg: embeddings.path is required");

    cfg.pv.dim = static_cast<int>(kv.get_int("pv.dim", cfg.pv.dim));
    cfg.pv.window = static_cast<int>(kv.get_int("pv.window", cfg.pv.window));
    cfg.pv.negative_samples =
        static_cast<int>(kv.get_int("pv.negative_samples", cfg.pv.negative_samples));
    cfg.pv.epochs = static_cast<int>(kv.get_int("pv.epochs", cfg.pv.epochs));
    cfg.pv.learning_rate = kv.get_double("pv.learning_rate", cfg.pv.learning_rate);

    const std::string mode = kv.get_string("cf.mode", "svdpp");
    const auto cf_mode = cf_mode_from_name(mode);
    if (!cf_mode) config_error("cf.mode must be 'svdpp' or 'asvdpp', got '" + mode + "'");
    cfg.cf.mode = *cf_mode;
    cfg.cf.factors = static_cast<int>(kv.get_int("cf.factors", cfg.cf.factors));
    cfg.cf.epochs = static_cast<int>(kv.get_int("cf.epochs", cfg.cf.epochs));
    cfg.cf.learning_rate = kv.get_double("cf.learning_rate", cfg.cf.learning_rate);
    cfg.cf.lambda = kv.get_double("cf.lambda", cfg.cf.lambda);
    cfg.cf_threshold = kv.get_double("cf.threshold", cfg.cf_threshold);

    kv.check_consumed();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config: " + path);
    ExperimentConfig cfg = parse_config(in);
    const std::vector<std::pair<std::string, std::string>> paths = {
        {"data.path", cfg.data_path},
        {"data.spec", cfg.gen_spec_path},
        {"embeddings.path", cfg.embeddings_path},
    };
    for (const auto& [key, p] : paths)
        if (!p.empty() && !std::filesystem::exists(p))
            config_error(key + " does not exist: " + p);
    return cfg;
}

std::string dump_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "data.source = " << cfg.data_source << "\n";
    if (!cfg.data_path.empty()) out << "data.path = " << cfg.data_path << "\n";
    if (!cfg.gen_spec_path.empty()) out << "data.spec = " << cfg.gen_spec_path << "\n";
    out << "titles = " << join(cfg.titles) << "\n";
    std::vector<std::string> names;
    for (auto r : cfg.representations) names.push_back(representation_name(r));
    out << "representations = " << join(names) << "\n";
    names.clear();
    for (auto s : cfg.subsets) names.push_back(field_subset_name(s));
    out << "subsets = " << join(names) << "\n";
    names.clear();
    for (auto a : cfg.algorithms) names.push_back(algorithm_name(a));
    out << "algorithms = " << join(names) << "\n";
    out << "dimred.k = " << cfg.dimred_k << "\n";
    out << "sampling.positives = " << cfg.n_pos << "\n";
    out << "sampling.negatives = " << cfg.n_neg << "\n";
    out << "split.fraction = " << format_double(cfg.split_fraction) << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (!cfg.embeddings_path.empty()) out << "embeddings.path = " << cfg.embeddings_path << "\n";
    out << "pv.dim = " << cfg.pv.dim << "\n";
    out << "pv.window = " << cfg.pv.window << "\n";
    out << "pv.negative_samples = " << cfg.pv.negative_samples << "\n";
    out << "pv.epochs = " << cfg.pv.epochs << "\n";
    out << "pv.learning_rate = " << format_double(cfg.pv.learning_rate) << "\n";
    out << "cf.mode = " << cf_mode_name(cfg.cf.mode) << "\n";
    out << "cf.factors = " << cfg.cf.factors << "\n";
    out << "cf.epochs = " << cfg.cf.epochs << "\n";
    out << "cf.learning_rate = " << format_double(cfg.cf.learning_rate) << "\n";
    out << "cf.lambda = " << format_double(cfg.cf.lambda) << "\n";
    out << "cf.threshold = " << format_double(cfg.cf_threshold) << "\n";
    return out.str();
}

uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(dump_config(cfg)); }

std::vector<Profile> load_corpus(const ExperimentConfig& cfg) {
    if (cfg.data_source == "csv") {
        std::ifstream in(cfg.data_path);
        if (!in) data_error("cannot open profile csv: " + cfg.data_path);
        return parse_profiles(in);
    }
    if (cfg.data_source != "generate")
        config_error("data.source must be generate or csv, got: " + cfg.data_source);
    const GenSpec spec =
        cfg.gen_spec_path.empty() ? default_gen_spec() : load_gen_spec(cfg.gen_spec_path);
    return generate_corpus(spec);
}

EvalReport run_grid(const ExperimentConfig& cfg, std::span<const Profile> profiles, int jobs,
                    std::ostream* log) {
    if (jobs < 1) config_error("jobs must be >= 1");
    EvalReport report;
    report.config = cfg;
    report.hash = config_hash(cfg);

    EmbeddingTable table;
    const bool wants_word_avg =
        std::find(cfg.representations.begin(), cfg.representations.end(),
                  Representation::WordAvg) != cfg.representations.end();
    if (wants_word_avg) {
        std::ifstream in(cfg.embeddings_path);
        if (!in) data_error("cannot open embeddings: " + cfg.embeddings_path);
        table = load_embeddings(in);
    }

    std::vector<TitleData> titles(cfg.titles.size());
    for (size_t t = 0; t < cfg.titles.size(); ++t)
        titles[t] = prepare_title(cfg, profiles, cfg.titles[t]);

    struct Group {
        size_t title = 0;
        Representation rep = Representation::Unigram;
        FieldSubset subset = FieldSubset::All;
        size_t cell_base = 0;
    };
    std::vector<Group> groups;
    std::set<std::string> skipped;
    for (size_t t = 0; t < cfg.titles.size(); ++t) {
        for (Representation rep : cfg.representations) {
            for (FieldSubset subset : cfg.subsets) {
                if (rep == Representation::ParagraphVector && subset != FieldSubset::All) {
                    skipped.insert(std::string(representation_name(rep)) + " x " +
                                   field_subset_name(subset));
                    continue;
                }
                groups.push_back({t, rep, subset, report.cells.size()});
                for (Algorithm algo : cfg.algorithms) {
                    CellResult cell;
                    cell.title = cfg.titles[t];
                    cell.representation = rep;
                    cell.subset = subset;
                    cell.algorithm = algo;
                    cell.cell_seed = derive_seed(
                        cfg.seed, "fit:" + group_key(cell.title, rep, subset) + ":" +
                                      algorithm_name(algo));
                    report.cells.push_back(std::move(cell));
                }
            }
        }
    }
    report.skipped.assign(skipped.begin(), skipped.end());

    std::mutex work_mutex;
    size_t next_group = 0;
    auto run_group = [&](const Group& g) {
        const std::string& title = cfg.titles[g.title];
        const TitleData& td = titles[g.title];
        CellResult* cells = report.cells.data() + g.cell_base;
        const size_t n_algos = cfg.algorithms.size();
        if (!td.ok) {
            for (size_t a = 0; a < n_algos; ++a) cells[a].error = td.error;
            return;
        }
        FeatureMatrix features;
        try {
            features = build_features(cfg, profiles, td, title, g.rep, g.subset,
                                      wants_word_avg ? &table : nullptr);
        } catch (const std::exception& e) {
            for (size_t a = 0; a < n_algos; ++a) cells[a].error = e.what();
            return;
        }
        const FeatureMatrix x_train = features.select_rows(td.ds.train);
        const FeatureMatrix x_test = features.select_rows(td.ds.test);
        std::vector<int> y_train, y_test;
        for (size_t idx : td.ds.train) y_train.push_back(td.labels[idx]);
        for (size_t idx : td.ds.test) y_test.push_back(td.labels[idx]);

        for (size_t a = 0; a < n_algos; ++a) {
            CellResult& cell = cells[a];
            try {
                Hyperparams hp = default_hyperparams(cell.algorithm);
                hp.seed = cell.cell_seed;
                const Model model = train(x_train, y_train, hp);
                const std::vector<int> pred = predict(model, x_test);
                cell.confusion = confusion(pred, y_test);
                cell.precision = precision(cell.confusion);
                cell.recall = recall(cell.confusion);
                cell.accuracy = accuracy(cell.confusion);
                cell.train_seconds = model.training_seconds;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            if (log) {
                std::lock_guard<std::mutex> lock(work_mutex);
                *log << "cell " << cell.title << " " << representation_name(cell.representation)
                     << " " << field_subset_name(cell.subset) << " "
                     << algorithm_name(cell.algorithm) << ": "
                     << (cell.ok ? "ok" : cell.error) << "\n";
            }
        }
    };

    const size_t workers =
        std::min<size_t>(static_cast<size_t>(jobs), std::max<size_t>(groups.size(), 1));
    if (workers <= 1) {
        for (const Group& g : groups) run_group(g);
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    size_t g;
                    {
                        std::lock_guard<std::mutex> lock(work_mutex);
                        if (next_group >= groups.size()) return;
                        g = next_group++;
                    }
                    run_group(groups[g]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return report;
}

CfReport run_cf(const ExperimentConfig& cfg, std::span<const Profile> profiles,
                std::ostream* log) {
    CfReport report;
    report.config = cfg;
    report.hash = config_hash(cfg);
    for (const std::string& title : cfg.titles) {
        CfCellResult cell;
        cell.title = title;
        cell.mode = cfg.cf.mode;
        cell.cell_seed =
            derive_seed(cfg.seed, std::string("cf:") + cf_mode_name(cfg.cf.mode) + ":" + title);
        try {
            const TitleData td = prepare_title(cfg, profiles, title);
            if (!td.ok) data_error(td.error);
            cell.ratings = build_rating_matrix(profiles, td.ds);
            CfConfig cf_cfg = cfg.cf;
            cf_cfg.seed = cell.cell_seed;
            auto [model, seconds] = time_fit([&] { return train_cf(cell.ratings, cf_cfg); });
            cell.train_seconds = seconds;
            std::vector<uint32_t> test_users(td.ds.test.begin(), td.ds.test.end());
            const std::vector<int> pred = classify_from_cf(model, test_users, cfg.cf_threshold);
            std::vector<int> y_test;
            for (size_t idx : td.ds.test) y_test.push_back(td.labels[idx]);
            cell.confusion = confusion(pred, y_test);
            cell.precision = precision(cell.confusion);
            cell.recall = recall(cell.confusion);
            cell.accuracy = accuracy(cell.confusion);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        if (log)
            *log << "cf " << title << ": " << (cell.ok ? "ok" : cell.error) << "\n";
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void dump_features(const ExperimentConfig& cfg, std::span<const Profile> profiles,
                   std::ostream& out) {
    if (cfg.titles.empty()) config_error("no titles configured");
    const std::string& title = cfg.titles.front();
    const TitleData td = prepare_title(cfg, profiles, title);
    if (!td.ok) data_error(td.error);

    EmbeddingTable table;
    const bool wants_word_avg =
        std::find(cfg.representations.begin(), cfg.representations.end(),
                  Representation::WordAvg) != cfg.representations.end();
    if (wants_word_avg) {
        std::ifstream in(cfg.embeddings_path);
        if (!in) data_error("cannot open embeddings: " + cfg.embeddings_path);
        table = load_embeddings(in);
    }

    out << "title\trepresentation\tsubset\trows\tcols\tstored\n";
    for (Representation rep : cfg.representations) {
        for (FieldSubset subset : cfg.subsets) {
            if (rep == Representation::ParagraphVector && subset != FieldSubset::All) continue;
            const FeatureMatrix features = build_features(cfg, profiles, td, title, rep, subset,
                                                          wants_word_avg ? &table : nullptr);
            const size_t stored = features.is_sparse() ? features.sparse().nnz()
                                                       : features.rows() * features.cols();
            out << title << "\t" << representation_name(rep) << "\t"
                << field_subset_name(subset) << "\t" << features.rows() << "\t"
                << features.cols() << "\t" << stored << "\n";
        }
    }
}

}  // namespace jobrec
