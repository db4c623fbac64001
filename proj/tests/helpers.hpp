#pragma once

#include <cmath>
#include <vector>

#include "delayq/model.hpp"

namespace delayq::testing {

/// Single-class model with unit batches.
inline ModelSpec single_type(InterarrivalModel ia, DelayModel delay, double delta) {
    ModelSpec m;
    m.k = 1;
    m.interarrival = std::move(ia);
    m.delays = {std::move(delay)};
    m.delta = delta;
    m.batch = BatchMomentProvider::multinomial(1, {1.0});
    return m;
}

/// Infinite-server queue with Poisson(lambda) arrivals and E(mu) service.
inline ModelSpec mm_infty(double lambda, double mu, double delta = 0.0) {
    return single_type(InterarrivalModel::exponential(lambda), DelayModel::exponential(mu),
                       delta);
}

/// The two-type reference model: exponential(1) arrivals, common E(1)
/// delays, delta = 0.2, multinomial(2, (1/2, 1/2)) batches.
inline ModelSpec two_type_reference(InterarrivalModel ia = InterarrivalModel::exponential(1.0),
                                    double delta = 0.2) {
    ModelSpec m;
    m.k = 2;
    m.interarrival = std::move(ia);
    m.delays = {DelayModel::exponential(1.0), DelayModel::exponential(1.0)};
    m.delta = delta;
    m.batch = BatchMomentProvider::multinomial(2, {0.5, 0.5});
    return m;
}

/// Raw moment of a Poisson(lambda) variable by direct pmf summation.
inline double poisson_raw_moment(double lambda, int order) {
    double acc = 0.0, pmf = std::exp(-lambda);
    for (int j = 0; j <= 400; ++j) {
        double term = pmf;
        for (int r = 0; r < order; ++r) term *= j;
        acc += term;
        pmf *= lambda / (j + 1);
    }
    return acc;
}

/// Least-squares slope of y against x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Regularized upper incomplete gamma Q(a, x); series / continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return 1.0;
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // lower series, then complement
        double term = 1.0 / a, sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return 1.0 - p;
    }
    // Lentz continued fraction for Q
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Chi-square upper-tail p-value with dof degrees of freedom.
inline double chi_square_pvalue(double stat, int dof) {
    return gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace delayq::testing
