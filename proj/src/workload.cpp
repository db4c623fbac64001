#include "delayq/workload.hpp"

#include <cmath>

#include "delayq/moment_engine.hpp"

namespace delayq {

namespace {

double check_scope(const ModelSpec& model) {
    if (model.k != 1) throw ScopeError("workload: requires k = 1");
    if (!model.batch.is_unit_batch()) throw ScopeError("workload: requires unit batches");
    return model.delays.front().exponential_rate();  // NonExponentialDelay if not E(mu)
}

}  // namespace

double workload_mean_limit(const ModelSpec& model) {
    double mu = check_scope(model);
    return 1.0 / (mu * mu * model.mean_interarrival());
}

double workload_cov_limit(const ModelSpec& model) {
    double mu = check_scope(model);
    double mean_tau = model.mean_interarrival();
    double lt = model.interarrival.laplace(mu);
    return 1.0 / (mu * mu * mean_tau) *
           (1.0 + lt / (1.0 - lt) - 1.0 / (mu * mean_tau));
}

WorkloadLimits workload_limits(const ModelSpec& model) {
    return {workload_mean_limit(model), workload_cov_limit(model)};
}

double little_generalized(const ModelSpec& model) {
    if (model.k != 1) throw ScopeError("little_generalized: requires k = 1");
    if (!model.batch.is_unit_batch())
        throw ScopeError("little_generalized: requires unit batches");
    if (!(model.delta > 0.0)) throw RangeError("little_generalized: requires delta > 0");
    // Pr(L > E_delta)/delta equals the discounted equilibrium integral.
    double value =
        model.delays.front().equilibrium_integral(model.delta) / model.mean_interarrival();
    double chi1 = chi_first_general_delay(1, model);
    if (!nearly_equal(value, chi1, 1e-12, 1e-300))
        throw Error("little_generalized: disagrees with the first-moment limit");
    return value;
}

}  // namespace delayq
