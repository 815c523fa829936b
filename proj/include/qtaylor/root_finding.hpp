#pragma once

#include <functional>

namespace qtaylor {

struct BracketOptions {
    double max_half_width = 400.0;  // bracket expansion stops here
    double residual_tol = 1e-9;
    int max_iterations = 200;
};

struct RootResult {
    double x = 0;
    double fx = 0;
    int iterations = 0;
    double lo = 0;  // final expanded bracket, before bisection
    double hi = 0;
    bool converged = false;
};

/// Bisection on [lo, hi]. When f has the same sign at both ends the bracket
/// is doubled about its midpoint until a sign change appears or the half
/// width exceeds `max_half_width`, in which case NumericalError is thrown with
/// the endpoint values. Stops at |f| < residual_tol or when the interval can
/// no longer be split in floating point.
RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       const BracketOptions& options = {});

/// Sign changes of f on `samples` equally spaced points of [lo, hi].
int count_sign_changes(const std::function<double(double)>& f, double lo, double hi,
                       int samples = 257);

}  // namespace qtaylor
