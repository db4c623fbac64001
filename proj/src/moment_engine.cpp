#include "delayq/moment_engine.hpp"

#include <cmath>

#include "delayq/transient.hpp"

namespace delayq {

MomentTable::MomentTable(ModelSpec model) : model_(std::move(model)) {
    mu_ = model_.common_delay_rate();  // throws NonExponentialDelay otherwise
    mean_tau_ = model_.mean_interarrival();
}

double MomentTable::laplace_tau(double s) const { return model_.interarrival.laplace(s); }

double coeff_B(const MultiIndex& l, const MultiIndex& n, const ModelSpec& model) {
    if (!l.strictly_below(n)) throw OrderError("coeff_B: requires l < n");
    double mu = model.common_delay_rate();
    double value = binom_product(l, n) * model.batch.moment(n.minus(l));
    for (int j : support_set(l, n))
        value *= mu / (mu + (n[j - 1] - l[j - 1]) * model.delta);
    return value;
}

double MomentTable::d_value(const MultiIndex& n, int j) {
    if (n.order() < 1) throw OrderError("d_value: requires eta_n >= 1");
    if (j < 1) throw RangeError("d_value: shift j must be >= 1");
    auto key = std::make_pair(n, j);
    if (auto it = d_.find(key); it != d_.end()) return it->second;

    double value;
    if (n.is_unit()) {
        int i = n.unit_type();
        value = model_.batch_mean(i) * mu_ / ((mu_ + model_.delta) * (j + 1) * mu_) *
                laplace_tau(j * mu_);
    } else {
        const double lt_j = laplace_tau(j * mu_);
        NeumaierSum sum;
        for (const auto& l : iterate_below(n)) {
            int c = static_cast<int>(support_set(l, n).size());
            if (l.is_zero()) {
                sum.add(coeff_B(l, n, model_) * lt_j / ((j + c) * mu_));
            } else {
                double denom = 1.0 - laplace_tau((j + c) * mu_);
                if (!(denom > 0.0))
                    throw DivergenceError("d_value: 1 - L^tau underflowed at shift " +
                                          std::to_string(j + c));
                sum.add(coeff_B(l, n, model_) * lt_j / denom * d_value(l, j + c));
            }
        }
        value = sum.value();
    }
    d_.emplace(key, value);
    return value;
}

double MomentTable::chi(const MultiIndex& n) {
    if (n.k() != model_.k) throw DimensionError("chi: index dimension differs from model k");
    if (n.order() < 1) throw OrderError("chi: requires eta_n >= 1");
    if (auto it = chi_.find(n); it != chi_.end()) return it->second;

    double value;
    if (n.is_unit()) {
        int i = n.unit_type();
        value = model_.batch_mean(i) / (mean_tau_ * (mu_ + model_.delta));
    } else {
        NeumaierSum sum;
        for (const auto& l : iterate_below(n)) {
            int c = static_cast<int>(support_set(l, n).size());
            if (l.is_zero()) {
                sum.add(coeff_B(l, n, model_) / (c * mu_));
            } else {
                double denom = 1.0 - laplace_tau(c * mu_);
                if (!(denom > 0.0))
                    throw DivergenceError("chi: 1 - L^tau underflowed");
                sum.add(coeff_B(l, n, model_) * d_value(l, c) / denom);
            }
        }
        value = sum.value() / mean_tau_;
    }
    chi_.emplace(n, value);
    return value;
}

double chi_first_general_delay(int type, const ModelSpec& model) {
    if (type < 1 || type > model.k) throw RangeError("chi_first_general_delay: bad type index");
    const DelayModel& delay = model.delays[static_cast<std::size_t>(type - 1)];
    return model.batch_mean(type) * delay.equilibrium_integral(model.delta) /
           model.mean_interarrival();
}

CovariancePair covariance_pair(MomentTable& table) {
    const ModelSpec& m = table.model();
    if (m.k != 2) throw DimensionError("covariance_pair: requires k = 2");
    double mu = m.common_delay_rate();
    double lt = m.interarrival.laplace(mu);
    double ex1 = m.batch_mean(1), ex2 = m.batch_mean(2);
    double ex12 = m.batch.moment(MultiIndex({1, 1}));

    // Closed form for chi_(1,1). The cross term carries E[X1]E[X2] with no
    // 1/2: the two symmetric unit-index terms of the recursion add up. This
    // is pinned by simulation and by the thinned-Poisson case, where the
    // covariance must vanish exactly.
    double closed = (1.0 / m.mean_interarrival()) * mu / ((mu + m.delta) * (mu + m.delta)) *
                    (ex12 / 2.0 + ex1 * ex2 * lt / (1.0 - lt));
    double recursive = table.chi(MultiIndex({1, 1}));
    if (!nearly_equal(recursive, closed, 1e-12, 1e-300))
        throw Error("covariance_pair: recursion and closed form disagree beyond 1e-12");

    double denom = m.mean_interarrival() * (mu + m.delta);
    return {recursive, recursive - ex1 * ex2 / (denom * denom)};
}

MgfResult mgf_series(const std::vector<double>& q, MomentTable& table, int max_order) {
    const ModelSpec& m = table.model();
    if (static_cast<int>(q.size()) != m.k)
        throw DimensionError("mgf_series: q dimension differs from model k");
    if (max_order < 1) throw RangeError("mgf_series: max_order must be >= 1");

    auto weight = [&](const MultiIndex& n, bool absolute) {
        double w = 1.0;
        for (int i = 0; i < n.k(); ++i) {
            double qi = absolute ? std::abs(q[static_cast<std::size_t>(i)])
                                 : q[static_cast<std::size_t>(i)];
            for (int r = 1; r <= n[i]; ++r) w *= qi / r;
        }
        return w;
    };

    NeumaierSum series;
    series.add(1.0);  // chi_0 = 1
    for (const auto& n : indices_with_order_leq(m.k, max_order))
        series.add(weight(n, false) * table.chi(n));

    // Geometric tail estimate from the shell sums of the R_n upper bounds.
    BoundTable bounds = bound_table(m, max_order + 1);
    std::vector<double> shell(static_cast<std::size_t>(max_order + 2), 0.0);
    for (const auto& n : indices_with_order_leq(m.k, max_order + 1))
        shell[static_cast<std::size_t>(n.order())] +=
            weight(n, true) * bounds.at(n) / m.mean_interarrival();

    double s_last = shell[static_cast<std::size_t>(max_order + 1)];
    double s_prev = shell[static_cast<std::size_t>(max_order)];
    double tail;
    if (s_last == 0.0) {
        tail = 0.0;
    } else {
        double ratio = s_prev > 0.0 ? s_last / s_prev : 1.0;
        for (int h = 2; h <= max_order; ++h) {
            double a = shell[static_cast<std::size_t>(h - 1)], b = shell[static_cast<std::size_t>(h)];
            if (a > 0.0 && b > 0.0) ratio = std::max(ratio, b / a);
        }
        if (!(ratio < 1.0))
            throw RadiusError("mgf_series: shell ratios do not contract; no tail bound");
        tail = s_last / (1.0 - ratio);
    }
    if (!(tail < 1e-6))
        throw RadiusError("mgf_series: tail bound " + std::to_string(tail) +
                          " not below 1e-6 at this order");
    return {series.value(), tail, max_order};
}

}  // namespace delayq
