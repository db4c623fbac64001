#pragma once

#include <map>
#include <utility>
#include <vector>

#include "delayq/model.hpp"

namespace delayq {

/// Exact limiting joint moments chi_n of e^{delta t} Z(t) for exponential
/// delays with one common rate, computed through the Laplace-transform
/// recursion on D_n(j). Values are memoized: the D table is keyed by
/// (index, shift) and kept across chi calls, so higher moments reuse lower
/// ones. Build is single-threaded; a finished table is read-only.
class MomentTable {
public:
    explicit MomentTable(ModelSpec model);

    const ModelSpec& model() const { return model_; }

    /// Limiting joint moment chi_n; requires eta_n >= 1.
    double chi(const MultiIndex& n);

    /// D_n(j), the Laplace transform of b~_n at j*mu; requires j >= 1.
    double d_value(const MultiIndex& n, int j);

    std::size_t chi_entries() const { return chi_.size(); }
    std::size_t d_entries() const { return d_.size(); }

private:
    ModelSpec model_;
    double mu_;
    double mean_tau_;

    std::map<MultiIndex, double> chi_;
    std::map<std::pair<MultiIndex, int>, double> d_;

    double laplace_tau(double s) const;
};

/// B_{l,n}: binomial products times the batch moment of n-l times the
/// per-coordinate transform factors mu/(mu + (n_j - l_j) delta).
double coeff_B(const MultiIndex& l, const MultiIndex& n, const ModelSpec& model);

/// First limiting moment for type i under an arbitrary delay law:
/// E[X_i] * integral of e^{-delta x} Pr(L_i > x) dx / E[tau].
double chi_first_general_delay(int type, const ModelSpec& model);

struct CovariancePair {
    double chi11;  // limiting joint moment E[Z1 Z2] of the rescaled process
    double xi;     // limiting covariance
};

/// k = 2 only: chi_(1,1) through the recursion, cross-checked against the
/// closed form, and the limiting covariance xi.
CovariancePair covariance_pair(MomentTable& table);

struct MgfResult {
    double value;       // truncated series
    double tail_bound;  // geometric bound on the dropped tail
    int max_order;
};

/// Diagnostic mgf of the limiting vector: truncated moment series with a
/// geometric tail bound built from the R_n bounds. Throws RadiusError when
/// no tail bound below 1e-6 is attainable at this truncation order.
MgfResult mgf_series(const std::vector<double>& q, MomentTable& table, int max_order);

}  // namespace delayq
