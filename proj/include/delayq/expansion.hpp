#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "delayq/model.hpp"

namespace delayq {

/// Characteristic roots of E[e^{z tau}] = 1 on the analytic continuation of
/// the interarrival transform, with their expansion weights gamma_j.
/// Roots are ordered by increasing real part and closed under conjugation.
struct RootSet {
    std::vector<std::complex<double>> roots;
    std::vector<std::complex<double>> gammas;
    /// Light-tail boundary: the smallest pole of the transform.
    double tail_rate = 0.0;

    std::size_t size() const { return roots.size(); }
};

/// Solves the polynomial equation behind E[e^{z tau}] = 1 exactly
/// (companion-matrix eigenvalues plus Newton polish on the closed-form
/// transform) and keeps the roots with 0 < Re(z) <= search_bound. Every
/// root must be simple. Uniform interarrivals have no rational continuation.
RootSet find_roots(const InterarrivalModel& model,
                   double search_bound = std::numeric_limits<double>::infinity());

/// Exponential correction of the renewal function:
/// v(x) = sum_j gamma_j e^{-z_j x}; the imaginary residue must vanish.
double v_expansion(const RootSet& roots, double x);

struct ExpansionTerm {
    std::complex<double> z;
    std::complex<double> coeff;
};

/// Truncated asymptotic expansion of M~ for a unit index:
/// chi + a_star e^{-mu t} + sum of the retained root terms.
struct ExpansionResult {
    double chi = 0.0;
    double mu = 0.0;
    double a_star = 0.0;
    std::vector<ExpansionTerm> b_terms;  // every explicit root term
    int truncation_order = 0;            // i0 = #roots with Re(z) < mu
    bool truncated = false;              // i0 < number of roots
    double error_rate = 0.0;             // guaranteed residual decay rate
    bool paper_literal_sign = false;
};

/// Coefficients of the expansion for type i. The default corrects the sign
/// of the v(0-) boundary term in the e^{-mu t} coefficient (the constant
/// hazard closed form decides the sign); `paper_literal_sign` reproduces the
/// uncorrected variant for comparison. The remainder integral has no
/// constructive form and is dropped; the truncation order records which
/// root terms remain explicit.
ExpansionResult expansion_coeffs(int type, const ModelSpec& model, const RootSet& roots,
                                 bool paper_literal_sign = false);

double expansion_eval(const ExpansionResult& r, double t);

}  // namespace delayq
