#include "qtaylor/root_finding.hpp"

#include <cmath>

#include "qtaylor/csv.hpp"
#include "qtaylor/errors.hpp"

namespace qtaylor {

namespace {

bool opposite(double a, double b) { return (a <= 0 && b >= 0) || (a >= 0 && b <= 0); }

}  // namespace

RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       const BracketOptions& options) {
    if (!(lo < hi)) throw std::invalid_argument("bisect_root: empty bracket");
    const double center = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo);
    double f_lo = f(lo), f_hi = f(hi);
    while (!opposite(f_lo, f_hi)) {
        if (half * 2 > options.max_half_width) {
            throw NumericalError("no sign change on [" + format_number(lo) + ", " +
                                 format_number(hi) + "]: residuals " + format_number(f_lo) +
                                 " and " + format_number(f_hi));
        }
        half *= 2;
        lo = center - half;
        hi = center + half;
        f_lo = f(lo);
        f_hi = f(hi);
    }

    RootResult r;
    r.lo = lo;
    r.hi = hi;
    if (f_lo == 0) return {lo, 0.0, 0, r.lo, r.hi, true};
    if (f_hi == 0) return {hi, 0.0, 0, r.lo, r.hi, true};
    double a = lo, b = hi, fa = f_lo;
    for (r.iterations = 1; r.iterations <= options.max_iterations; ++r.iterations) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        r.x = mid;
        r.fx = fm;
        if (std::abs(fm) < options.residual_tol) {
            r.converged = true;
            return r;
        }
        if (mid <= a || mid >= b) break;  // interval exhausted
        if (opposite(fa, fm)) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    return r;
}

int count_sign_changes(const std::function<double(double)>& f, double lo, double hi,
                       int samples) {
    int changes = 0;
    double prev = f(lo);
    for (int k = 1; k < samples; ++k) {
        const double x = lo + (hi - lo) * k / (samples - 1);
        const double cur = f(x);
        if ((prev < 0 && cur > 0) || (prev > 0 && cur < 0)) ++changes;
        if (cur != 0) prev = cur;
    }
    return changes;
}

}  // namespace qtaylor
