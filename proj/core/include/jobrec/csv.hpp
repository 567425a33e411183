#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jobrec::csv {

// RFC-4180 reader: quoted fields may contain commas, doubled quotes and
// newlines.  Accepts both \n and \r\n row terminators.  Input must be
// valid UTF-8; a malformed byte sequence raises Error(Data).
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // reads one record; returns false on clean EOF
    bool next(std::vector<std::string>& fields);

    // 1-based physical line on which the last record started
    size_t record_line() const { return record_line_; }

private:
    std::istream& in_;
    size_t line_ = 1;
    size_t record_line_ = 1;
};

// quotes a field iff it contains a comma, quote or newline
std::string escape(const std::string& field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

bool valid_utf8(std::string_view s);

}  // namespace jobrec::csv
