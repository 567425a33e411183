#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace jobrec {

// Flat key=value config file: '#' starts a comment, blank lines are
// ignored, keys use dotted prefixes for grouping (e.g. "cf.epochs").
// Keys are unique; a duplicate raises Error(Config).  Getters mark keys
// as consumed so check_consumed() can reject unknown keys.
class KvFile {
public:
    static KvFile parse(std::istream& in);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const;
    int64_t get_int(const std::string& key, int64_t dflt) const;
    double get_double(const std::string& key, double dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;

    // comma-separated list; empty value or missing key -> dflt
    std::vector<std::string> get_list(const std::string& key,
                                      const std::vector<std::string>& dflt) const;

    // raises Error(Config) naming every key never read by a getter
    void check_consumed() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> consumed_;
};

}  // namespace jobrec
