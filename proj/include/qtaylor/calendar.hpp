#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace qtaylor {

/// Calendar month, used to stamp raw observations. Quarterly observations
/// carry the first month of their quarter.
struct Month {
    int year = 0;
    int month = 1;  // 1..12

    auto operator<=>(const Month&) const = default;

    Month next() const;
    /// Parses an ISO date `YYYY-MM-DD`; the day is validated but discarded.
    static Month parse_iso(std::string_view text);
    std::string to_iso() const;
};

struct Quarter {
    int year = 0;
    int quarter = 1;  // 1..4

    auto operator<=>(const Quarter&) const = default;

    Quarter next() const;
    Quarter prev() const;
    Month first_month() const { return {year, 3 * (quarter - 1) + 1}; }

    static Quarter of(Month m) { return {m.year, (m.month - 1) / 3 + 1}; }
    /// Accepts `1954Q4` or `1954-Q4`.
    static Quarter parse(std::string_view text);
    std::string to_string() const;
};

/// Number of quarters in the closed interval [first, last]; 0 when last < first.
int quarters_inclusive(Quarter first, Quarter last);

/// Signed distance in quarters from `from` to `to`.
int quarter_offset(Quarter from, Quarter to);

}  // namespace qtaylor
