#include "qtaylor/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "qtaylor/errors.hpp"

namespace qtaylor {

namespace {

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

Month Month::next() const {
    return month == 12 ? Month{year + 1, 1} : Month{year, month + 1};
}

Month Month::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const int y = parse_int(text.substr(0, 4), "year");
    const int m = parse_int(text.substr(5, 2), "month");
    const int d = parse_int(text.substr(8, 2), "day");
    if (m < 1 || m > 12 || d < 1 || d > 31) {
        throw DataError("invalid date '" + std::string(text) + "'");
    }
    return {y, m};
}

std::string Month::to_iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-01", year, month);
    return buf;
}

Quarter Quarter::next() const {
    return quarter == 4 ? Quarter{year + 1, 1} : Quarter{year, quarter + 1};
}

Quarter Quarter::prev() const {
    return quarter == 1 ? Quarter{year - 1, 4} : Quarter{year, quarter - 1};
}

Quarter Quarter::parse(std::string_view text) {
    auto pos = text.find('Q');
    if (pos == std::string_view::npos) pos = text.find('q');
    if (pos == std::string_view::npos || pos + 2 != text.size()) {
        throw ConfigError("invalid quarter '" + std::string(text) + "' (expected e.g. 1954Q4)");
    }
    auto year_part = text.substr(0, pos);
    if (!year_part.empty() && year_part.back() == '-') year_part.remove_suffix(1);
    Quarter q;
    try {
        q = {parse_int(year_part, "year"), parse_int(text.substr(pos + 1), "quarter")};
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    if (q.quarter < 1 || q.quarter > 4) {
        throw ConfigError("invalid quarter '" + std::string(text) + "'");
    }
    return q;
}

std::string Quarter::to_string() const {
    return std::to_string(year) + "Q" + std::to_string(quarter);
}

int quarter_offset(Quarter from, Quarter to) {
    return (to.year - from.year) * 4 + (to.quarter - from.quarter);
}

int quarters_inclusive(Quarter first, Quarter last) {
    const int n = quarter_offset(first, last) + 1;
    return n > 0 ? n : 0;
}

}  // namespace qtaylor
