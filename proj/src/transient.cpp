#include "delayq/transient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "delayq/expansion.hpp"

namespace delayq {

std::string to_string(BoundDirection d) {
    switch (d) {
        case BoundDirection::Lower: return "lower";
        case BoundDirection::Upper: return "upper";
        case BoundDirection::Exact: return "exact";
    }
    return "?";
}

double GridFunction::max() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

double GridFunction::at_time(double time) const {
    if (v.empty()) throw GridMismatch("GridFunction: empty grid");
    if (time <= 0.0) return v.front();
    double idx = time / h;
    auto i = static_cast<std::size_t>(idx);
    if (i + 1 >= v.size()) return v.back();
    double w = idx - static_cast<double>(i);
    return v[i] * (1.0 - w) + v[i + 1] * w;
}

GridFunction make_grid(double h, double t_max) {
    if (!(h > 0.0) || !(t_max > 0.0)) throw RangeError("grid: h and t_max must be positive");
    GridFunction g;
    g.h = h;
    g.v.assign(static_cast<std::size_t>(std::floor(t_max / h)) + 1, 0.0);
    return g;
}

GridFunction cumulative_trapezoid(const GridFunction& g) {
    GridFunction out;
    out.h = g.h;
    out.v.assign(g.v.size(), 0.0);
    for (std::size_t i = 1; i < g.v.size(); ++i)
        out.v[i] = out.v[i - 1] + 0.5 * g.h * (g.v[i - 1] + g.v[i]);
    return out;
}

namespace {

// Trapezoid convolution (g * f)(t_i) on a shared grid; f given as samples.
GridFunction convolve(const GridFunction& g, const std::vector<double>& f) {
    GridFunction out;
    out.h = g.h;
    const std::size_t n = g.v.size();
    out.v.assign(n, 0.0);
    const double* gv = g.v.data();
    const double* fv = f.data();
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.5 * (gv[i] * fv[0] + gv[0] * fv[i]);
        for (std::size_t m = 1; m < i; ++m) acc += gv[i - m] * fv[m];
        out.v[i] = g.h * acc;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// R_n bounds

namespace {

double bound_R_impl(const MultiIndex& n, const ModelSpec& model,
                    std::map<MultiIndex, double>& memo) {
    if (n.is_zero()) return 1.0;  // sup of M~_0
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const double C = model.interarrival.density_sup();
    double value;
    if (n.is_unit()) {
        int i = n.unit_type();
        value = C * model.batch_mean(i) *
                model.delays[static_cast<std::size_t>(i - 1)].equilibrium_integral(model.delta);
    } else {
        NeumaierSum sum;
        for (const auto& l : iterate_below(n)) {
            double min_delay_mean = std::numeric_limits<double>::infinity();
            for (int j : support_set(l, n))
                min_delay_mean =
                    std::min(min_delay_mean, model.delays[static_cast<std::size_t>(j - 1)].mean());
            sum.add(binom_product(l, n) * model.batch.moment(n.minus(l)) * min_delay_mean *
                    bound_R_impl(l, model, memo));
        }
        value = C * sum.value();
    }
    memo.emplace(n, value);
    return value;
}

}  // namespace

double bound_R(const MultiIndex& n, const ModelSpec& model) {
    std::map<MultiIndex, double> memo;
    return bound_R_impl(n, model, memo);
}

BoundTable::BoundTable(ModelSpec model, int max_order) {
    std::map<MultiIndex, double> memo;
    for (const auto& n : indices_with_order_leq(model.k, max_order))
        r_[n] = bound_R_impl(n, model, memo);
}

double BoundTable::at(const MultiIndex& n) const {
    auto it = r_.find(n);
    if (it == r_.end()) throw RangeError("BoundTable: no bound stored for " + n.str());
    return it->second;
}

BoundTable bound_table(const ModelSpec& model, int max_order) {
    return BoundTable(model, max_order);
}

// ---------------------------------------------------------------------------
// b~ construction

GridFunction build_b_tilde(const MultiIndex& n, const ModelSpec& model,
                           const std::map<MultiIndex, GridFunction>& lower,
                           const GridFunction& grid) {
    if (n.order() < 1) throw OrderError("build_b_tilde: requires eta_n >= 1");
    for (const auto& [idx, gf] : lower)
        if (!gf.same_grid(grid)) throw GridMismatch("build_b_tilde: mixed grids");

    const std::size_t npts = grid.v.size();
    std::vector<double> f(npts);
    for (std::size_t i = 0; i < npts; ++i) f[i] = model.interarrival.density(grid.t(i));

    GridFunction b;
    b.h = grid.h;
    b.v.assign(npts, 0.0);

    for (const auto& l : iterate_below(n)) {
        const GridFunction* ml = nullptr;
        if (!l.is_zero()) {
            auto it = lower.find(l);
            if (it == lower.end())
                throw GridMismatch("build_b_tilde: missing lower solution for " + l.str());
            ml = &it->second;
        }
        const double weight = binom_product(l, n) * model.batch.moment(n.minus(l));
        if (weight == 0.0) continue;
        const double growth = (n.order() - l.order()) * model.delta;

        GridFunction g;
        g.h = grid.h;
        g.v.assign(npts, 0.0);
        for (std::size_t i = 0; i < npts; ++i) {
            double u = grid.t(i);
            double x = std::exp(growth * u) * (ml ? ml->v[i] : 1.0);
            for (int j : support_set(l, n)) {
                x *= model.delays[static_cast<std::size_t>(j - 1)].omega_bar(
                    (n[j - 1] - l[j - 1]) * model.delta, u);
            }
            g.v[i] = x;
        }
        GridFunction phi = convolve(g, f);
        for (std::size_t i = 0; i < npts; ++i) b.v[i] += weight * phi.v[i];
    }
    return b;
}

// ---------------------------------------------------------------------------
// TransientSolver

TransientSolver::TransientSolver(ModelSpec model, double h, double t_max)
    : model_(std::move(model)), h_(h) {
    if (!(h > 0.0) || !(t_max > h)) throw RangeError("TransientSolver: bad grid parameters");
    npts_ = static_cast<std::size_t>(std::floor(t_max / h)) + 1;
    f_.resize(npts_);
    for (std::size_t i = 0; i < npts_; ++i)
        f_[i] = model_.interarrival.density(h_ * static_cast<double>(i));
}

GridFunction TransientSolver::grid_like() const {
    GridFunction g;
    g.h = h_;
    g.v.assign(npts_, 0.0);
    return g;
}

GridFunction TransientSolver::build_b_from(
    const MultiIndex& n, const std::map<MultiIndex, GridFunction>& lower) const {
    return build_b_tilde(n, model_, lower, grid_like());
}

GridFunction TransientSolver::solve_volterra(const GridFunction& b) const {
    GridFunction m;
    m.h = h_;
    m.v.assign(npts_, 0.0);
    m.v[0] = b.v[0];
    const double diag = 1.0 - 0.5 * h_ * f_[0];
    for (std::size_t i = 1; i < npts_; ++i) {
        double acc = 0.5 * m.v[0] * f_[i];
        for (std::size_t k = 1; k < i; ++k) acc += m.v[i - k] * f_[k];
        m.v[i] = (b.v[i] + h_ * acc) / diag;
    }
    return m;
}

std::optional<std::vector<double>> TransientSolver::closed_form_renewal_density() const {
    if (!model_.interarrival.has_rational_transform()) return std::nullopt;
    RootSet rs;
    try {
        rs = find_roots(model_.interarrival);
    } catch (const MultipleRootError&) {
        return std::nullopt;
    }
    // u(t) = 1/E[tau] - sum_j gamma_j z_j e^{-z_j t}, exact for simple roots.
    std::vector<double> u(npts_);
    const double base = 1.0 / model_.mean_interarrival();
    for (std::size_t i = 0; i < npts_; ++i) {
        std::complex<double> acc(0.0, 0.0);
        double t = h_ * static_cast<double>(i);
        for (std::size_t j = 0; j < rs.size(); ++j)
            acc += rs.gammas[j] * rs.roots[j] * std::exp(-rs.roots[j] * t);
        u[i] = base - acc.real();
    }
    return u;
}

const GridFunction& TransientSolver::m_tilde(const MultiIndex& n) {
    if (n.k() != model_.k) throw DimensionError("m_tilde: index dimension differs from model");
    if (n.order() < 1) throw OrderError("m_tilde: requires eta_n >= 1");
    if (auto it = solved_.find(n); it != solved_.end()) return it->second;

    for (const auto& l : iterate_below(n))
        if (!l.is_zero()) m_tilde(l);

    GridFunction b = build_b_from(n, solved_);
    GridFunction m;
    std::optional<std::vector<double>> u;
    if (n.is_unit() && !force_volterra_ && (u = closed_form_renewal_density())) {
        // direct solution b~ + b~ * dE[N]
        m = b;
        const double* bv = b.v.data();
        const double* uv = u->data();
        for (std::size_t i = 1; i < npts_; ++i) {
            double acc = 0.5 * (bv[i] * uv[0] + bv[0] * uv[i]);
            for (std::size_t k = 1; k < i; ++k) acc += bv[i - k] * uv[k];
            m.v[i] += h_ * acc;
        }
    } else {
        m = solve_volterra(b);
    }
    return solved_.emplace(n, std::move(m)).first->second;
}

GridFunction TransientSolver::b_tilde(const MultiIndex& n) {
    for (const auto& l : iterate_below(n))
        if (!l.is_zero()) m_tilde(l);
    return build_b_from(n, solved_);
}

BoundDirection TransientSolver::bound_direction() const {
    switch (model_.interarrival.hazard_class()) {
        case HazardClass::IFR: return BoundDirection::Lower;
        case HazardClass::DFR: return BoundDirection::Upper;
        case HazardClass::ConstantHazard: return BoundDirection::Exact;
        default:
            throw HazardClassError("transient bound needs an IFR or DFR interarrival law");
    }
}

const GridFunction& TransientSolver::transient_bound(const MultiIndex& n) {
    bound_direction();  // validates the hazard class up front
    if (n.order() < 1) throw OrderError("transient_bound: requires eta_n >= 1");
    if (auto it = bounds_.find(n); it != bounds_.end()) return it->second;

    for (const auto& l : iterate_below(n))
        if (!l.is_zero()) transient_bound(l);

    GridFunction bhat = build_b_from(n, bounds_);
    GridFunction integral = cumulative_trapezoid(bhat);
    const double f0 = model_.interarrival.density_at_zero();
    GridFunction hn = std::move(bhat);
    for (std::size_t i = 0; i < npts_; ++i) hn.v[i] += f0 * integral.v[i];
    return bounds_.emplace(n, std::move(hn)).first->second;
}

GridFunction solve_renewal(const MultiIndex& n, const ModelSpec& model, double h, double t_max) {
    TransientSolver solver(model, h, t_max);
    return solver.m_tilde(n);
}

TransientBound bound_transient(const MultiIndex& n, const ModelSpec& model, double h,
                               double t_max) {
    TransientSolver solver(model, h, t_max);
    return {solver.transient_bound(n), solver.bound_direction()};
}

void default_grid_params(const ModelSpec& model, double& h, double& t_max) {
    h = 1e-3 * model.mean_interarrival();
    double max_delay = 0.0;
    for (const auto& d : model.delays) max_delay = std::max(max_delay, d.mean());
    t_max = 40.0 * std::max(max_delay, model.mean_interarrival() * 0.25);
}

}  // namespace delayq
