#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qtaylor {

/// Twelve significant digits, locale independent; NaN written as `NA`.
std::string format_number(double value);

/// Splits one delimited line on commas and trims surrounding whitespace.
std::vector<std::string> split_fields(std::string_view line);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    CsvWriter& field(std::string_view text);
    CsvWriter& field(double value);
    CsvWriter& field(int value);
    void end_row();

private:
    std::ostream& out_;
    bool row_started_ = false;
};

}  // namespace qtaylor
