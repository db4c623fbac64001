#include "delayq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "delayq/moment_engine.hpp"

namespace delayq {

Simulator::Simulator(ModelSpec model) : model_(std::move(model)) {
    if (!model_.batch.can_sample())
        throw UnsupportedFamily(
            "simulator: batch law must be sampleable (multinomial or unit batch)");
}

unsigned Simulator::worker_count() {
    if (const char* env = std::getenv("DELAYQ_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

PathSample Simulator::simulate_path(double t, RngStream& stream) const {
    if (!(t > 0.0)) throw RangeError("simulate_path: t must be positive");
    PathSample s;
    s.t = t;
    s.z_tilde.assign(static_cast<std::size_t>(model_.k), 0.0);
    s.counts.assign(static_cast<std::size_t>(model_.k), 0.0);

    // Draw order per arrival is fixed: interarrival, batch, then the k delays.
    double arrival = model_.interarrival.sample(stream);
    while (arrival <= t) {
        std::vector<int> batch = model_.batch.sample(stream);
        for (int j = 0; j < model_.k; ++j) {
            double delay = model_.delays[static_cast<std::size_t>(j)].sample(stream);
            double departure = arrival + delay;
            int x = batch[static_cast<std::size_t>(j)];
            if (x != 0 && departure > t) {
                // e^{-delta (T + L - t)} is the rescaled contribution; the
                // residual exponent stays bounded for large t.
                s.z_tilde[static_cast<std::size_t>(j)] +=
                    x * std::exp(-model_.delta * (departure - t));
                s.counts[static_cast<std::size_t>(j)] += x;
                s.workload += x * (departure - t);
            }
        }
        arrival += model_.interarrival.sample(stream);
    }
    return s;
}

template <typename PerRep>
void Simulator::run_replications(std::uint64_t reps, std::uint64_t seed, PerRep&& f) const {
    unsigned workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(reps, 1));
    if (workers <= 1) {
        for (std::uint64_t r = 0; r < reps; ++r) {
            RngStream stream(seed, r);
            f(r, stream);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t r = w; r < reps; r += workers) {
                RngStream stream(seed, r);
                f(r, stream);
            }
        });
    }
    for (auto& th : pool) th.join();
}

namespace {

SimEstimate reduce_mean(const std::string& name, const std::vector<double>& values,
                        std::uint64_t seed) {
    const auto reps = static_cast<std::uint64_t>(values.size());
    NeumaierSum sum;
    for (double v : values) sum.add(v);
    double mean = sum.value() / static_cast<double>(reps);
    NeumaierSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    double se = reps > 1 ? std::sqrt(sq.value() / (static_cast<double>(reps) *
                                                   static_cast<double>(reps - 1)))
                         : 0.0;
    return {name, mean, se, reps, seed};
}

std::string moment_name(const MultiIndex& n) {
    std::string s = "n=";
    for (int i = 0; i < n.k(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
    return s;
}

}  // namespace

std::vector<SimEstimate> Simulator::estimate_joint_moments(const std::vector<MultiIndex>& ns,
                                                           double t, std::uint64_t reps,
                                                           std::uint64_t seed) const {
    if (reps < 100) throw RangeError("estimate_joint_moment: need at least 100 replications");
    for (const auto& n : ns)
        if (n.k() != model_.k)
            throw DimensionError("estimate_joint_moment: index dimension differs from model");

    std::vector<std::vector<double>> values(ns.size(),
                                            std::vector<double>(static_cast<std::size_t>(reps)));
    run_replications(reps, seed, [&](std::uint64_t r, RngStream& stream) {
        PathSample path = simulate_path(t, stream);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            double prod = 1.0;
            for (int j = 0; j < model_.k; ++j)
                for (int p = 0; p < ns[i][j]; ++p)
                    prod *= path.z_tilde[static_cast<std::size_t>(j)];
            values[i][static_cast<std::size_t>(r)] = prod;
        }
    });

    std::vector<SimEstimate> out;
    out.reserve(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        SimEstimate e = reduce_mean(moment_name(ns[i]), values[i], seed);
        if (ns[i].order() == 0) e.std_error = 0.0;  // constant statistic
        out.push_back(std::move(e));
    }
    return out;
}

SimEstimate Simulator::estimate_joint_moment(const MultiIndex& n, double t, std::uint64_t reps,
                                             std::uint64_t seed) const {
    return estimate_joint_moments({n}, t, reps, seed).front();
}

Simulator::WorkloadEstimate Simulator::estimate_workload(double t, std::uint64_t reps,
                                                         std::uint64_t seed) const {
    if (model_.k != 1) throw ScopeError("estimate_workload: requires k = 1");
    if (!model_.batch.is_unit_batch())
        throw ScopeError("estimate_workload: requires unit batches");
    if (reps < 100) throw RangeError("estimate_workload: need at least 100 replications");

    std::vector<double> d(static_cast<std::size_t>(reps)), q(static_cast<std::size_t>(reps));
    run_replications(reps, seed, [&](std::uint64_t r, RngStream& stream) {
        PathSample path = simulate_path(t, stream);
        d[static_cast<std::size_t>(r)] = path.workload;
        q[static_cast<std::size_t>(r)] = path.counts[0];
    });

    SimEstimate mean = reduce_mean("workload", d, seed);

    // Sample covariance with a leave-one-out jackknife standard error.
    const double R = static_cast<double>(reps);
    NeumaierSum sd, sq_sum, sdq;
    for (std::uint64_t r = 0; r < reps; ++r) {
        sd.add(d[static_cast<std::size_t>(r)]);
        sq_sum.add(q[static_cast<std::size_t>(r)]);
        sdq.add(d[static_cast<std::size_t>(r)] * q[static_cast<std::size_t>(r)]);
    }
    const double sum_d = sd.value(), sum_q = sq_sum.value(), sum_dq = sdq.value();
    const double mean_d = sum_d / R, mean_q = sum_q / R;
    const double cov = (sum_dq - R * mean_d * mean_q) / (R - 1.0);

    std::vector<double> loo(static_cast<std::size_t>(reps));
    NeumaierSum loo_sum;
    for (std::uint64_t r = 0; r < reps; ++r) {
        double dr = d[static_cast<std::size_t>(r)], qr = q[static_cast<std::size_t>(r)];
        double c = ((sum_dq - dr * qr) - (sum_d - dr) * (sum_q - qr) / (R - 1.0)) / (R - 2.0);
        loo[static_cast<std::size_t>(r)] = c;
        loo_sum.add(c);
    }
    double loo_mean = loo_sum.value() / R;
    NeumaierSum dev;
    for (double c : loo) dev.add((c - loo_mean) * (c - loo_mean));
    double se_jack = std::sqrt((R - 1.0) / R * dev.value());

    SimEstimate cov_est{"workload_queue_cov", cov, se_jack, reps, seed};
    return {mean, cov_est};
}

std::vector<Simulator::SweepRow> Simulator::convergence_sweep(const MultiIndex& n,
                                                              const std::vector<double>& ts,
                                                              std::uint64_t reps,
                                                              std::uint64_t seed) const {
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1]))
            throw RangeError("convergence_sweep: horizons must be strictly increasing");

    double chi = std::numeric_limits<double>::quiet_NaN();
    if (model_.has_common_exponential_delay()) {
        MomentTable table(model_);
        chi = table.chi(n);
    }

    std::vector<SweepRow> rows;
    for (double t : ts) {
        SimEstimate e = estimate_joint_moment(n, t, reps, seed);
        double gap = std::isnan(chi) ? chi : std::abs(e.estimate - chi);
        rows.push_back({t, std::move(e), gap});
    }
    return rows;
}

}  // namespace delayq
