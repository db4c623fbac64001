#pragma once

#include <map>
#include <optional>
#include <vector>

#include "delayq/model.hpp"

namespace delayq {

/// Uniformly sampled function of time on [0, t_max]: samples at 0, h, ..., h*(size-1).
struct GridFunction {
    double h = 0.0;
    std::vector<double> v;

    std::size_t size() const { return v.size(); }
    double t_max() const { return v.empty() ? 0.0 : h * static_cast<double>(v.size() - 1); }
    double t(std::size_t i) const { return h * static_cast<double>(i); }
    double back() const { return v.back(); }
    double max() const;

    /// Linear interpolation; clamps to the last sample beyond t_max.
    double at_time(double time) const;

    bool same_grid(const GridFunction& o) const { return h == o.h && v.size() == o.v.size(); }
};

/// Grid with floor(t_max/h) + 1 sample points.
GridFunction make_grid(double h, double t_max);

/// Cumulative trapezoid integral of g from 0.
GridFunction cumulative_trapezoid(const GridFunction& g);

/// Uniform upper bounds R_n of Prop-type recursions; R_0 = 1 anchors the
/// l = 0 term, and the unit base case uses the analytic delta -> 0 limit.
class BoundTable {
public:
    BoundTable(ModelSpec model, int max_order);
    double at(const MultiIndex& n) const;
    const std::map<MultiIndex, double>& all() const { return r_; }

private:
    std::map<MultiIndex, double> r_;
};

double bound_R(const MultiIndex& n, const ModelSpec& model);
BoundTable bound_table(const ModelSpec& model, int max_order);

enum class BoundDirection { Lower, Upper, Exact };
std::string to_string(BoundDirection d);

/// b~_n on the grid from the solutions of every lower index: each phi_l is
/// the convolution of the interarrival density with
/// g_l(u) = e^{(eta_n - eta_l) delta u} M~_l(u) prod_{j in C_l} omega_bar_j(u).
/// The zero index is implicit (M~_0 == 1) and need not be present in `lower`.
GridFunction build_b_tilde(const MultiIndex& n, const ModelSpec& model,
                           const std::map<MultiIndex, GridFunction>& lower,
                           const GridFunction& grid);

/// Deterministic transient oracle. Solves the second-kind Volterra renewal
/// equation M~_n = b~_n + M~_n * F on a uniform grid with trapezoid weights,
/// recursing over the partial order, and builds the hazard-direction
/// transient bounds h_n. Results are memoized per index.
class TransientSolver {
public:
    TransientSolver(ModelSpec model, double h, double t_max);

    const ModelSpec& model() const { return model_; }
    double h() const { return h_; }
    std::size_t points() const { return npts_; }

    /// M~_n. For unit n with a rational interarrival transform the direct
    /// renewal-density form b~ + b~ * u is used; Volterra otherwise.
    const GridFunction& m_tilde(const MultiIndex& n);

    /// b~_n built from already-solved lower indices.
    GridFunction b_tilde(const MultiIndex& n);

    /// Transient bound h_n = b^_n + f(0+) * integral of b^_n, where b^ is
    /// b~ with every inner M~_l replaced by h_l. Lower bound under IFR,
    /// upper under DFR; exact for constant hazard.
    const GridFunction& transient_bound(const MultiIndex& n);

    BoundDirection bound_direction() const;

    /// Forces the generic Volterra path even for unit indices (test hook).
    void force_volterra(bool on) { force_volterra_ = on; }

private:
    ModelSpec model_;
    double h_;
    std::size_t npts_;
    std::vector<double> f_;  // interarrival density on the grid
    bool force_volterra_ = false;

    std::map<MultiIndex, GridFunction> solved_;
    std::map<MultiIndex, GridFunction> bounds_;

    GridFunction grid_like() const;
    GridFunction build_b_from(const MultiIndex& n,
                              const std::map<MultiIndex, GridFunction>& lower) const;
    GridFunction solve_volterra(const GridFunction& b) const;
    std::optional<std::vector<double>> closed_form_renewal_density() const;
};

/// One-call helpers matching the CLI surface.
GridFunction solve_renewal(const MultiIndex& n, const ModelSpec& model, double h, double t_max);

struct TransientBound {
    GridFunction values;
    BoundDirection direction;
};
TransientBound bound_transient(const MultiIndex& n, const ModelSpec& model, double h,
                               double t_max);

/// Default discretization: h = 1e-3 * E[tau], t_max = 40 * max_j E[L_j].
void default_grid_params(const ModelSpec& model, double& h, double& t_max);

}  // namespace delayq
