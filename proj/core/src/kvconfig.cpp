#include "jobrec/kvconfig.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>

#include "jobrec/error.hpp"

namespace jobrec {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KvFile KvFile::parse(std::istream& in) {
    KvFile kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            config_error("line " + std::to_string(lineno) + ": expected key=value, got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            config_error("line " + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key))
            config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.values_[key] = value;
        kv.consumed_[key] = false;
    }
    return kv;
}

std::string KvFile::get_string(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    consumed_[key] = true;
    return it->second;
}

int64_t KvFile::get_int(const std::string& key, int64_t dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    consumed_[key] = true;
    char* end = nullptr;
    long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        config_error("key '" + key + "': expected integer, got '" + it->second + "'");
    return v;
}

double KvFile::get_double(const std::string& key, double dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    consumed_[key] = true;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        config_error("key '" + key + "': expected number, got '" + it->second + "'");
    return v;
}

bool KvFile::get_bool(const std::string& key, bool dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    consumed_[key] = true;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    config_error("key '" + key + "': expected boolean, got '" + it->second + "'");
}

std::vector<std::string> KvFile::get_list(const std::string& key,
                                          const std::vector<std::string>& dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    consumed_[key] = true;
    std::vector<std::string> out;
    std::string cur;
    for (char c : it->second) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    out.erase(std::remove(out.begin(), out.end(), ""), out.end());
    return out;
}

void KvFile::check_consumed() const {
    std::string unknown;
    for (const auto& [k, used] : consumed_) {
        if (!used) {
            if (!unknown.empty()) unknown += ", ";
            unknown += k;
        }
    }
    if (!unknown.empty()) config_error("unknown config key(s): " + unknown);
}

}  // namespace jobrec
