#include "delayq/expansion.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "delayq/moment_engine.hpp"

namespace delayq {

namespace {

// Roots of the polynomial with ascending coefficients c (c.back() != 0),
// via eigenvalues of the companion matrix.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c) {
    int d = static_cast<int>(c.size()) - 1;
    while (d > 0 && c[static_cast<std::size_t>(d)] == 0.0) --d;
    if (d < 1) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(d)];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> out;
    for (int i = 0; i < d; ++i) out.push_back(solver.eigenvalues()[i]);
    return out;
}

}  // namespace

RootSet find_roots(const InterarrivalModel& model, double search_bound) {
    if (!model.has_rational_transform())
        throw UnsupportedFamily("find_roots: interarrival family has no rational continuation");
    RationalTransform rt = model.rational_transform();

    // E[e^{z tau}] = 1  <=>  num(z) - den(z) = 0; z = 0 always solves and is
    // simple, so deflate one factor of z.
    std::vector<double> diff(std::max(rt.num.size(), rt.den.size()), 0.0);
    for (std::size_t i = 0; i < rt.num.size(); ++i) diff[i] += rt.num[i];
    for (std::size_t i = 0; i < rt.den.size(); ++i) diff[i] -= rt.den[i];
    std::vector<double> deflated(diff.begin() + 1, diff.end());

    const double scale = rt.smallest_pole();
    RootSet rs;
    rs.tail_rate = scale;

    std::vector<std::complex<double>> polished;
    for (std::complex<double> z : polynomial_roots(deflated)) {
        // Newton refinement against the analytic transform.
        for (int it = 0; it < 50; ++it) {
            std::complex<double> g = rt.eval(z) - 1.0;
            std::complex<double> dg = rt.derivative(z);
            if (std::abs(dg) == 0.0) break;
            std::complex<double> step = g / dg;
            z -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        if (std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z))) z = {z.real(), 0.0};
        if (z.real() <= 1e-12 * scale) continue;  // the deflated origin, numerically
        if (std::isfinite(search_bound) && z.real() > search_bound * (1.0 + 1e-12)) continue;
        if (std::abs(rt.eval(z) - 1.0) > 1e-9)
            throw MultipleRootError("find_roots: a candidate root failed to converge");
        polished.push_back(z);
    }

    // Keep the upper half plane representative and emit conjugates explicitly.
    std::vector<std::complex<double>> half;
    for (const auto& z : polished)
        if (z.imag() >= 0.0) half.push_back(z);
    for (std::size_t i = 0; i < half.size(); ++i)
        for (std::size_t j = i + 1; j < half.size(); ++j)
            if (std::abs(half[i] - half[j]) < 1e-8 * (1.0 + std::abs(half[i])))
                throw MultipleRootError("find_roots: root of multiplicity > 1 detected");

    std::sort(half.begin(), half.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    for (const auto& z : half) {
        std::complex<double> dgdz = rt.derivative(z);
        if (std::abs(dgdz) < 1e-12)
            throw MultipleRootError("find_roots: transform derivative vanishes at a root");
        std::complex<double> gamma = -1.0 / (z * dgdz);
        rs.roots.push_back(z);
        rs.gammas.push_back(gamma);
        if (z.imag() > 0.0) {
            rs.roots.push_back(std::conj(z));
            rs.gammas.push_back(std::conj(gamma));
        }
    }

    // Stable order: by real part, conjugates adjacent.
    std::vector<std::size_t> perm(rs.roots.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        const auto &za = rs.roots[a], &zb = rs.roots[b];
        return za.real() != zb.real() ? za.real() < zb.real() : za.imag() > zb.imag();
    });
    RootSet sorted;
    sorted.tail_rate = rs.tail_rate;
    for (std::size_t i : perm) {
        sorted.roots.push_back(rs.roots[i]);
        sorted.gammas.push_back(rs.gammas[i]);
    }
    return sorted;
}

double v_expansion(const RootSet& roots, double x) {
    if (x < 0.0) throw RangeError("v_expansion: x must be >= 0");
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < roots.size(); ++j)
        acc += roots.gammas[j] * std::exp(-roots.roots[j] * x);
    if (std::abs(acc.imag()) > 1e-12 * (1.0 + std::abs(acc.real())))
        throw DivergenceError("v_expansion: imaginary residue did not cancel");
    return acc.real();
}

ExpansionResult expansion_coeffs(int type, const ModelSpec& model, const RootSet& roots,
                                 bool paper_literal_sign) {
    if (type < 1 || type > model.k) throw RangeError("expansion_coeffs: bad type index");
    const DelayModel& delay = model.delays[static_cast<std::size_t>(type - 1)];
    const double mu = delay.exponential_rate();  // NonExponentialDelay otherwise
    if (mu >= roots.tail_rate * (1.0 - 1e-12))
        throw PoleError("expansion_coeffs: mu reaches the transform pole; L^tau(-mu) diverges");
    for (const auto& z : roots.roots)
        if (std::abs(z - std::complex<double>(mu, 0.0)) < 1e-9 * (1.0 + mu))
            throw NondegeneracyError("expansion_coeffs: a root coincides with mu");

    const double ex = model.batch_mean(type);
    const double mean_tau = model.mean_interarrival();
    const double ratio2 = model.interarrival.second_moment() / (2.0 * mean_tau * mean_tau);
    const double front = mu / (mu + model.delta);
    const double lt_neg_mu = model.interarrival.laplace(-mu);

    // Truncation keeps the roots with Re(z) < mu; the dropped root terms
    // join the non-constructive remainder, so the bracket sums only the
    // retained gammas and the residual decays at the min(mu, Re z_{i0+1}) rate.
    std::complex<double> root_sum(0.0, 0.0);
    for (std::size_t j = 0; j < roots.size(); ++j)
        if (roots.roots[j].real() < mu) root_sum += roots.gammas[j] * mu / (roots.roots[j] - mu);

    // Bracket of the e^{-mu t} coefficient; the remainder integral is not
    // constructive and is dropped. Corrected sign flips the v(0-) term.
    double a_i;
    if (paper_literal_sign) {
        a_i = -ex * front * lt_neg_mu * (ratio2 + root_sum.real());
    } else {
        a_i = ex * front * lt_neg_mu * (ratio2 - root_sum.real());
    }
    const double a_star = a_i - ex / mean_tau / (mu + model.delta) * lt_neg_mu;

    ExpansionResult r;
    r.chi = chi_first_general_delay(type, model);
    r.mu = mu;
    r.a_star = a_star;
    r.paper_literal_sign = paper_literal_sign;

    int i0 = 0;
    const RationalTransform rt = model.interarrival.rational_transform();
    for (std::size_t j = 0; j < roots.size(); ++j) {
        const auto& z = roots.roots[j];
        std::complex<double> lt_neg_z = rt.eval(z);  // equals 1 at a root, kept explicit
        std::complex<double> coeff = ex * front * roots.gammas[j] * z / (z - mu) * lt_neg_z;
        r.b_terms.push_back({z, coeff});
        if (z.real() < mu) ++i0;
    }
    r.truncation_order = i0;
    r.truncated = i0 < static_cast<int>(roots.size());
    if (roots.size() == 0) {
        r.error_rate = mu;
    } else if (r.truncated) {
        r.error_rate = std::min(mu, roots.roots[static_cast<std::size_t>(i0)].real());
    } else {
        r.error_rate = mu;
    }
    return r;
}

double expansion_eval(const ExpansionResult& r, double t) {
    if (t < 0.0) throw RangeError("expansion_eval: t must be >= 0");
    std::complex<double> acc(r.chi + r.a_star * std::exp(-r.mu * t), 0.0);
    for (const auto& term : r.b_terms)
        if (term.z.real() < r.mu) acc += term.coeff * std::exp(-term.z * t);
    return acc.real();
}

}  // namespace delayq
