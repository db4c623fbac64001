#pragma once

#include <vector>

#include "delayq/distributions.hpp"
#include "delayq/multi_index.hpp"

#include "json.hpp"

namespace delayq {

/// Full stochastic model: interarrival law, per-type delay laws, discount
/// rate and batch-size law. One JSON file describes one model; every
/// subcommand consumes the same file so analytic, numeric and Monte-Carlo
/// runs are guaranteed to talk about the same process.
struct ModelSpec {
    int k = 1;
    InterarrivalModel interarrival = InterarrivalModel::exponential(1.0);
    std::vector<DelayModel> delays;
    double delta = 0.0;
    BatchMomentProvider batch = BatchMomentProvider::multinomial(1, {1.0});

    static ModelSpec from_json(const nlohmann::json& j);
    static ModelSpec load(const std::string& path);
    nlohmann::json to_json() const;

    void validate() const;

    /// True when every delay is exponential with one common rate.
    bool has_common_exponential_delay() const;
    /// The common exponential rate; throws NonExponentialDelay otherwise.
    double common_delay_rate() const;

    double mean_interarrival() const { return interarrival.mean(); }
    /// E[X_i] for type i (1-based).
    double batch_mean(int i) const { return batch.moment(MultiIndex::unit(k, i)); }
};

}  // namespace delayq
