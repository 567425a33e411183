#include "jobrec/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "jobrec/csv.hpp"
#include "jobrec/error.hpp"
#include "jobrec/rng.hpp"

namespace jobrec {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string slug(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) data_error("cannot write " + path.string());
    return out;
}

// one results.csv row in normalized form; metrics are blank when the cell
// failed or the ratio was 0/0
struct Row {
    std::string title, rep, subset, algo;
    bool ok = false;
    double precision = 0.0, recall = 0.0, accuracy = 0.0;
    bool precision_defined = false, recall_defined = false, accuracy_defined = false;
};

struct Axes {
    std::vector<std::string> titles, reps, subsets, algos;
};

void push_unique(std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

Axes collect_axes(const std::vector<Row>& rows) {
    Axes axes;
    for (const Row& r : rows) {
        push_unique(axes.titles, r.title);
        push_unique(axes.reps, r.rep);
        push_unique(axes.subsets, r.subset);
        push_unique(axes.algos, r.algo);
    }
    return axes;
}

// macro over the full title set; failed or undefined cells contribute 0
struct MacroRow {
    std::string rep, subset, algo;
    double precision = 0.0, recall = 0.0, accuracy = 0.0;
    size_t titles = 0, precision_defined = 0, recall_defined = 0;
};

std::vector<MacroRow> macro_rows(const std::vector<Row>& rows, const Axes& axes) {
    std::vector<MacroRow> out;
    for (const auto& rep : axes.reps) {
        for (const auto& subset : axes.subsets) {
            for (const auto& algo : axes.algos) {
                MacroRow m{rep, subset, algo};
                double ps = 0.0, rs = 0.0, as = 0.0;
                for (const Row& r : rows) {
                    if (r.rep != rep || r.subset != subset || r.algo != algo) continue;
                    ++m.titles;
                    if (r.precision_defined) {
                        ps += r.precision;
                        ++m.precision_defined;
                    }
                    if (r.recall_defined) {
                        rs += r.recall;
                        ++m.recall_defined;
                    }
                    if (r.accuracy_defined) as += r.accuracy;
                }
                if (m.titles == 0) continue;  // skipped combo, no cells
                m.precision = ps / static_cast<double>(m.titles);
                m.recall = rs / static_cast<double>(m.titles);
                m.accuracy = as / static_cast<double>(m.titles);
                out.push_back(std::move(m));
            }
        }
    }
    return out;
}

void write_macro_csv(const fs::path& path, const std::vector<MacroRow>& macros) {
    std::ofstream out = open_out(path);
    csv::write_row(out, {"representation", "subset", "algorithm", "macro_precision",
                         "macro_recall", "macro_accuracy", "titles", "precision_defined",
                         "recall_defined"});
    for (const MacroRow& m : macros)
        csv::write_row(out, {m.rep, m.subset, m.algo, fmt(m.precision), fmt(m.recall),
                             fmt(m.accuracy), std::to_string(m.titles),
                             std::to_string(m.precision_defined),
                             std::to_string(m.recall_defined)});
}

// One table per (subset, metric): representations down, algorithms across,
// every cell holding the metric's max marked with '*'.
size_t write_tables(const fs::path& dir, const std::vector<MacroRow>& macros,
                    const Axes& axes) {
    fs::create_directories(dir);
    const std::vector<std::pair<const char*, double MacroRow::*>> metrics = {
        {"precision", &MacroRow::precision},
        {"recall", &MacroRow::recall},
        {"accuracy", &MacroRow::accuracy},
    };
    size_t written = 0;
    for (const auto& subset : axes.subsets) {
        for (const auto& [metric_name, field] : metrics) {
            std::map<std::pair<std::string, std::string>, double> values;
            double best = 0.0;
            bool any = false;
            for (const MacroRow& m : macros) {
                if (m.subset != subset) continue;
                const double v = m.*field;
                values[{m.rep, m.algo}] = v;
                best = any ? std::max(best, v) : v;
                any = true;
            }
            if (!any) continue;

            size_t label_width = std::string("representation").size();
            for (const auto& rep : axes.reps) label_width = std::max(label_width, rep.size());
            const size_t cell_width = 10;  // "0.1234*" plus padding

            std::ofstream tbl = open_out(dir / (slug(subset) + "_" + metric_name + ".txt"));
            tbl << metric_name << " on subset " << subset << " (* marks the best cell)\n\n";
            tbl << std::string(label_width, ' ');
            std::vector<size_t> widths;
            for (const auto& algo : axes.algos) {
                const size_t w = std::max(algo.size(), cell_width);
                widths.push_back(w);
                tbl << "  " << std::string(w - algo.size(), ' ') << algo;
            }
            tbl << "\n";
            for (const auto& rep : axes.reps) {
                tbl << rep << std::string(label_width - rep.size(), ' ');
                for (size_t a = 0; a < axes.algos.size(); ++a) {
                    const auto it = values.find({rep, axes.algos[a]});
                    std::string cell;
                    if (it == values.end()) {
                        cell = "-";
                    } else {
                        cell = fmt(it->second, "%.4f");
                        if (it->second == best) cell += "*";
                    }
                    tbl << "  " << std::string(widths[a] - cell.size(), ' ') << cell;
                }
                tbl << "\n";
            }
            ++written;
        }
    }
    return written;
}

std::vector<Row> rows_from_cells(const std::vector<CellResult>& cells) {
    std::vector<Row> rows;
    rows.reserve(cells.size());
    for (const CellResult& c : cells) {
        Row r;
        r.title = c.title;
        r.rep = representation_name(c.representation);
        r.subset = field_subset_name(c.subset);
        r.algo = algorithm_name(c.algorithm);
        r.ok = c.ok;
        if (c.ok) {
            r.precision_defined = !c.precision.undefined;
            r.precision = c.precision.value;
            r.recall_defined = !c.recall.undefined;
            r.recall = c.recall.value;
            r.accuracy_defined = true;
            r.accuracy = c.accuracy;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

void write_report(const EvalReport& report, const std::string& dir) {
    fs::create_directories(dir);
    const std::string hash = std::to_string(report.hash);

    {
        std::ofstream out = open_out(fs::path(dir) / "results.csv");
        csv::write_row(out, {"title", "representation", "subset", "algorithm", "dimred",
                             "status", "tp", "fp", "tn", "fn", "precision", "recall",
                             "accuracy", "cell_seed", "config_hash", "error"});
        for (const CellResult& c : report.cells) {
            std::vector<std::string> f(16);
            f[0] = c.title;
            f[1] = representation_name(c.representation);
            f[2] = field_subset_name(c.subset);
            f[3] = algorithm_name(c.algorithm);
            f[4] = std::to_string(report.config.dimred_k);
            f[5] = c.ok ? "ok" : "error";
            if (c.ok) {
                f[6] = std::to_string(c.confusion.tp);
                f[7] = std::to_string(c.confusion.fp);
                f[8] = std::to_string(c.confusion.tn);
                f[9] = std::to_string(c.confusion.fn);
                if (!c.precision.undefined) f[10] = fmt(c.precision.value);
                if (!c.recall.undefined) f[11] = fmt(c.recall.value);
                f[12] = fmt(c.accuracy);
            }
            f[13] = std::to_string(c.cell_seed);
            f[14] = hash;
            f[15] = c.error;
            csv::write_row(out, f);
        }
    }
    {
        std::ofstream out = open_out(fs::path(dir) / "timings.csv");
        csv::write_row(out, {"title", "representation", "subset", "algorithm",
                             "train_seconds"});
        for (const CellResult& c : report.cells)
            if (c.ok)
                csv::write_row(out, {c.title, representation_name(c.representation),
                                     field_subset_name(c.subset), algorithm_name(c.algorithm),
                                     fmt(c.train_seconds)});
    }

    const std::vector<Row> rows = rows_from_cells(report.cells);
    const Axes axes = collect_axes(rows);
    const std::vector<MacroRow> macros = macro_rows(rows, axes);
    write_macro_csv(fs::path(dir) / "macro_summary.csv", macros);
    write_tables(fs::path(dir) / "tables", macros, axes);

    {
        std::ofstream out = open_out(fs::path(dir) / "manifest.txt");
        out << "config_hash = " << hash << "\n";
        out << "seed = " << report.config.seed << "\n";
        for (const auto& title : report.config.titles) {
            out << "seed.sample." << slug(title) << " = "
                << derive_seed(report.config.seed, "sample:" + title) << "\n";
            out << "seed.split." << slug(title) << " = "
                << derive_seed(report.config.seed, "split:" + title) << "\n";
        }
        size_t ok = 0;
        for (const CellResult& c : report.cells) ok += c.ok ? 1 : 0;
        out << "cells = " << report.cells.size() << "\n";
        out << "cells_ok = " << ok << "\n";
        out << "cells_failed = " << report.cells.size() - ok << "\n";
        if (report.skipped.empty())
            out << "skipped = none\n";
        else
            for (const auto& s : report.skipped) out << "skipped = " << s << "\n";
    }
    {
        std::ofstream out = open_out(fs::path(dir) / "config.cfg");
        out << dump_config(report.config);
    }
}

void write_cf_report(const CfReport& report, const std::string& dir) {
    fs::create_directories(dir);
    const std::string hash = std::to_string(report.hash);
    {
        std::ofstream out = open_out(fs::path(dir) / "cf_results.csv");
        csv::write_row(out, {"title", "mode", "status", "tp", "fp", "tn", "fn", "precision",
                             "recall", "accuracy", "cell_seed", "config_hash", "error"});
        for (const CfCellResult& c : report.cells) {
            std::vector<std::string> f(13);
            f[0] = c.title;
            f[1] = cf_mode_name(c.mode);
            f[2] = c.ok ? "ok" : "error";
            if (c.ok) {
                f[3] = std::to_string(c.confusion.tp);
                f[4] = std::to_string(c.confusion.fp);
                f[5] = std::to_string(c.confusion.tn);
                f[6] = std::to_string(c.confusion.fn);
                if (!c.precision.undefined) f[7] = fmt(c.precision.value);
                if (!c.recall.undefined) f[8] = fmt(c.recall.value);
                f[9] = fmt(c.accuracy);
            }
            f[10] = std::to_string(c.cell_seed);
            f[11] = hash;
            f[12] = c.error;
            csv::write_row(out, f);
        }
    }
    {
        std::ofstream out = open_out(fs::path(dir) / "cf_timings.csv");
        csv::write_row(out, {"title", "mode", "train_seconds"});
        for (const CfCellResult& c : report.cells)
            if (c.ok)
                csv::write_row(out, {c.title, cf_mode_name(c.mode), fmt(c.train_seconds)});
    }
    for (const CfCellResult& c : report.cells) {
        if (c.ratings.users() == 0) continue;
        std::ofstream out = open_out(fs::path(dir) / ("ratings_" + slug(c.title) + ".csv"));
        dump_rating_matrix(out, c.ratings);
    }
    {
        std::ofstream out = open_out(fs::path(dir) / "manifest.txt");
        out << "config_hash = " << hash << "\n";
        out << "seed = " << report.config.seed << "\n";
        out << "mode = " << cf_mode_name(report.config.cf.mode) << "\n";
        size_t ok = 0;
        for (const CfCellResult& c : report.cells) ok += c.ok ? 1 : 0;
        out << "cells = " << report.cells.size() << "\n";
        out << "cells_ok = " << ok << "\n";
        out << "cells_failed = " << report.cells.size() - ok << "\n";
    }
}

std::string rerender_report(const std::string& dir) {
    const fs::path results = fs::path(dir) / "results.csv";
    std::ifstream in(results, std::ios::binary);
    if (!in) data_error("cannot open " + results.string());

    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) data_error("results.csv is empty: " + results.string());
    const std::vector<std::string> expected_head = {"title", "representation", "subset",
                                                    "algorithm"};
    for (size_t i = 0; i < expected_head.size(); ++i)
        if (fields.size() <= i || fields[i] != expected_head[i])
            data_error("results.csv has an unexpected header: " + results.string());

    std::vector<Row> rows;
    size_t ok_count = 0;
    while (reader.next(fields)) {
        if (fields.size() < 16)
            data_error("results.csv row " + std::to_string(reader.record_line()) +
                       " has too few columns");
        Row r;
        r.title = fields[0];
        r.rep = fields[1];
        r.subset = fields[2];
        r.algo = fields[3];
        r.ok = fields[5] == "ok";
        if (r.ok) {
            ++ok_count;
            if (!fields[10].empty()) {
                r.precision = std::strtod(fields[10].c_str(), nullptr);
                r.precision_defined = true;
            }
            if (!fields[11].empty()) {
                r.recall = std::strtod(fields[11].c_str(), nullptr);
                r.recall_defined = true;
            }
            if (!fields[12].empty()) {
                r.accuracy = std::strtod(fields[12].c_str(), nullptr);
                r.accuracy_defined = true;
            }
        }
        rows.push_back(std::move(r));
    }

    const Axes axes = collect_axes(rows);
    const std::vector<MacroRow> macros = macro_rows(rows, axes);
    write_macro_csv(fs::path(dir) / "macro_summary.csv", macros);
    const size_t tables = write_tables(fs::path(dir) / "tables", macros, axes);

    std::ostringstream summary;
    summary << rows.size() << " cells (" << ok_count << " ok, " << rows.size() - ok_count
            << " failed); re-rendered macro_summary.csv and " << tables << " tables";
    return summary.str();
}

}  // namespace jobrec
