#pragma once

#include "delayq/model.hpp"

namespace delayq {

struct WorkloadLimits {
    double mean_limit;  // limiting E[D(t)]
    double cov_limit;   // limiting Cov[D(t), queue size]
};

/// Limiting expected workload of the single-class queue with unit batches
/// and exponential service: 1 / (mu^2 E[tau]), equivalently E[L^2]/(2 E[tau]).
double workload_mean_limit(const ModelSpec& model);

/// Limiting covariance of workload and queue size:
/// (1/(mu^2 E[tau])) [1 + L(mu)/(1 - L(mu)) - 1/(mu E[tau])].
double workload_cov_limit(const ModelSpec& model);

WorkloadLimits workload_limits(const ModelSpec& model);

/// Limiting expected number of customers whose residual service time is
/// within an exponential horizon with rate delta:
/// (1/E[tau]) Pr(L > E_delta) / delta. Requires k = 1, unit batch, delta > 0.
double little_generalized(const ModelSpec& model);

}  // namespace delayq
