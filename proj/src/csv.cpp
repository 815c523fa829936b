#include "qtaylor/csv.hpp"

#include <cmath>
#include <locale>
#include <ostream>
#include <sstream>

namespace qtaylor {

std::string format_number(double value) {
    if (std::isnan(value)) return "NA";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(12);
    os << value;
    return os.str();
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    auto trim = [](std::string_view s) {
        const auto ws = " \t\r\n\"";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string_view::npos) return std::string_view{};
        const auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (const auto& n : names) field(n);
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
    if (row_started_) out_ << ',';
    out_ << text;
    row_started_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(format_number(value)); }

CsvWriter& CsvWriter::field(int value) { return field(std::to_string(value)); }

void CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
}

}  // namespace qtaylor
