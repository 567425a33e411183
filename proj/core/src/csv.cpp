#include "jobrec/csv.hpp"

#include <istream>
#include <ostream>

#include "jobrec/error.hpp"

namespace jobrec::csv {

bool valid_utf8(std::string_view s) {
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t extra;
        unsigned cp_min;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xe0) == 0xc0) {
            extra = 1;
            cp_min = 0x80;
        } else if ((c & 0xf0) == 0xe0) {
            extra = 2;
            cp_min = 0x800;
        } else if ((c & 0xf8) == 0xf0) {
            extra = 3;
            cp_min = 0x10000;
        } else {
            return false;
        }
        if (i + extra >= s.size()) return false;
        unsigned cp = c & (0x3f >> extra);
        for (size_t k = 1; k <= extra; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xc0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        if (cp < cp_min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
        i += extra + 1;
    }
    return true;
}

bool Reader::next(std::vector<std::string>& fields) {
    fields.clear();
    int first = in_.peek();
    if (first == std::char_traits<char>::eof()) return false;
    record_line_ = line_;

    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    for (;;) {
        int ci = in_.get();
        if (ci == std::char_traits<char>::eof()) {
            if (in_quotes) data_error("unterminated quoted field starting at line " + std::to_string(record_line_));
            break;
        }
        char c = static_cast<char>(ci);
        saw_any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            ++line_;
            break;
        } else if (c == '\r') {
            if (in_.peek() == '\n') {
                in_.get();
                ++line_;
                break;
            }
            field.push_back(c);
        } else {
            field.push_back(c);
        }
    }
    (void)saw_any;
    fields.push_back(std::move(field));
    for (const auto& f : fields) {
        if (!valid_utf8(f))
            data_error("invalid UTF-8 in record at line " + std::to_string(record_line_));
    }
    return true;
}

std::string escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << escape(fields[i]);
    }
    out.put('\n');
}

}  // namespace jobrec::csv
