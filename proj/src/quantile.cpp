#include "qtaylor/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtaylor/errors.hpp"

namespace qtaylor {

TauGrid::TauGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ConfigError("tau grid is empty");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] > 0.0 && values_[k] < 1.0)) {
            throw ConfigError("tau grid values must lie in (0,1)");
        }
        if (k > 0 && !(values_[k - 1] < values_[k])) {
            throw ConfigError("tau grid must be strictly increasing");
        }
    }
}

TauGrid TauGrid::uniform(int m) {
    if (m < 1) throw ConfigError("tau grid needs at least one point");
    std::vector<double> v;
    for (int j = 1; j <= m; ++j) v.push_back(static_cast<double>(j) / static_cast<double>(m + 1));
    return TauGrid(std::move(v));
}

TauGrid TauGrid::parse(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    try {
        while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    } catch (const std::exception&) {
        throw ConfigError("invalid tau grid '" + text + "'");
    }
    if (parts.size() != 3 || !(parts[2] > 0)) {
        throw ConfigError("tau grid must be first:last:step, got '" + text + "'");
    }
    // Express values as k/scale with an integer scale so grid points are
    // correctly rounded decimals (0.07, not 0.07000000000000001).
    const double scale = std::round(1.0 / parts[2]);
    if (std::abs(scale * parts[2] - 1.0) > 1e-9) {
        throw ConfigError("tau grid step must be 1/N for an integer N");
    }
    const long lo = std::lround(parts[0] * scale);
    const long hi = std::lround(parts[1] * scale);
    std::vector<double> v;
    for (long k = lo; k <= hi; ++k) v.push_back(static_cast<double>(k) / scale);
    return TauGrid(std::move(v));
}

std::vector<double> sorted_combination(const ShockPanel& shocks, double w_pi, double w_y) {
    if (shocks.size() == 0) throw DataError("shock panel is empty");
    std::vector<double> w(static_cast<std::size_t>(shocks.size()));
    for (Eigen::Index k = 0; k < shocks.size(); ++k) {
        w[static_cast<std::size_t>(k)] = w_pi * shocks.z_pi[k] + w_y * shocks.z_y[k];
    }
    std::sort(w.begin(), w.end());
    return w;
}

double shock_combination_quantile(const ShockPanel& shocks, double w_pi, double w_y,
                                  double tau) {
    if (shocks.size() == 0) throw DataError("shock panel is empty");
    std::vector<double> w(static_cast<std::size_t>(shocks.size()));
    for (Eigen::Index k = 0; k < shocks.size(); ++k) {
        w[static_cast<std::size_t>(k)] = w_pi * shocks.z_pi[k] + w_y * shocks.z_y[k];
    }
    return quantile_in_place(std::span<double>(w), tau);
}

namespace {

DirectionWeights normalize(double a, double b) {
    const double norm = std::hypot(a, b);
    if (!(norm > 0.0)) {
        throw NumericalError("policy exerts no effect on shocks' direction");
    }
    return {a / norm, b / norm};
}

}  // namespace

DirectionWeights direction_weights_location_shift(const LawOfMotion& law, double lambda) {
    return normalize(-law.pi_eq.rate, -lambda * law.y_eq.rate);
}

DirectionWeights direction_weights_location_scale(const LawOfMotion& law,
                                                  const SkedasticModel& sked, double lambda,
                                                  double pi, double y) {
    const double h_pi = h_value(sked, Equation::inflation, pi, y, 0.0);
    const double h_y = h_value(sked, Equation::output_gap, pi, y, 0.0);
    return normalize(-h_pi * law.pi_eq.rate, -lambda * h_y * law.y_eq.rate);
}

Eigen::Vector4d conditional_quantile_coefficients(const LawOfMotion& law,
                                                  const SkedasticModel& sked,
                                                  const ShockPanel& shocks, Equation eq,
                                                  double tau, double pi, double y, double i) {
    const auto& a = eq == Equation::inflation ? law.pi_eq : law.y_eq;
    const auto& z = eq == Equation::inflation ? shocks.z_pi : shocks.z_y;
    const double q = empirical_quantile(z, tau);
    const ScaleGradient g = h_gradient(sked, eq, pi, y, i);

    Eigen::Vector4d c;
    c[1] = a.rate + g.d_rate * q;
    c[2] = a.inflation + g.d_inflation * q;
    c[3] = a.output_gap + g.d_output_gap * q;
    const double h_linear_part = g.d_rate * i + g.d_inflation * pi + g.d_output_gap * y;
    c[0] = a.intercept + (g.value - h_linear_part) * q;
    return c;
}

}  // namespace qtaylor
