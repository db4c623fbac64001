#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delayq/model.hpp"

namespace delayq {

/// One simulated path observed at horizon t.
struct PathSample {
    double t = 0.0;
    std::vector<double> z_tilde;  // e^{delta t}-rescaled discounted sums per type
    std::vector<double> counts;   // number in system per type
    double workload = 0.0;        // sum of residual delay times
};

/// Point estimate with its plain CLT standard error (or jackknife where
/// noted), the replication count and the master seed that produced it.
struct SimEstimate {
    std::string statistic;
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

/// Exact discrete-event simulation of the delayed renewal-reward process.
/// Replications use counter-based substreams keyed by (seed, replication),
/// and reductions run in replication order, so results are bit-identical
/// for any worker count. Worker count comes from DELAYQ_THREADS when set.
class Simulator {
public:
    explicit Simulator(ModelSpec model);

    const ModelSpec& model() const { return model_; }

    PathSample simulate_path(double t, RngStream& stream) const;

    SimEstimate estimate_joint_moment(const MultiIndex& n, double t, std::uint64_t reps,
                                      std::uint64_t seed) const;

    /// Shares paths across all requested moments; entry i estimates
    /// E[prod_j (e^{delta t} Z_j)^{n_i,j}].
    std::vector<SimEstimate> estimate_joint_moments(const std::vector<MultiIndex>& ns, double t,
                                                    std::uint64_t reps,
                                                    std::uint64_t seed) const;

    struct WorkloadEstimate {
        SimEstimate mean;        // E[D(t)], CLT standard error
        SimEstimate covariance;  // Cov(D(t), queue size), jackknife standard error
    };
    WorkloadEstimate estimate_workload(double t, std::uint64_t reps, std::uint64_t seed) const;

    struct SweepRow {
        double t;
        SimEstimate estimate;      // rescaled moment estimate at this horizon
        double abs_gap_to_limit;   // |estimate - chi_n| when chi is available, else NaN
    };
    std::vector<SweepRow> convergence_sweep(const MultiIndex& n, const std::vector<double>& ts,
                                            std::uint64_t reps, std::uint64_t seed) const;

    static unsigned worker_count();

private:
    ModelSpec model_;

    template <typename PerRep>
    void run_replications(std::uint64_t reps, std::uint64_t seed, PerRep&& f) const;
};

}  // namespace delayq
