#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "delayq/simulator.hpp"
#include "delayq/workload.hpp"
#include "helpers.hpp"

using namespace delayq;
using namespace delayq::testing;

TEST_CASE("workload mean limit") {
    CHECK(workload_mean_limit(mm_infty(1.0, 2.0)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(workload_mean_limit(mm_infty(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    // equals E[L^2]/(2 E[tau]) for any parameters
    RngStream stream(3);
    for (int i = 0; i < 20; ++i) {
        double lambda = stream.uniform(0.2, 4.0), mu = stream.uniform(0.2, 4.0);
        ModelSpec m = mm_infty(lambda, mu);
        double identity = m.delays[0].second_moment() / (2.0 * m.mean_interarrival());
        CHECK(workload_mean_limit(m) == doctest::Approx(identity).epsilon(1e-12));
    }
}

TEST_CASE("workload covariance limit plug-ins") {
    CHECK(workload_cov_limit(mm_infty(1.0, 2.0)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(workload_cov_limit(mm_infty(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    ModelSpec erl = single_type(InterarrivalModel::erlang(2, 2.0),
                                DelayModel::exponential(1.0), 0.0);
    CHECK(workload_cov_limit(erl) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("covariance limit stays positive on the sanity envelope") {
    for (double lambda : {1.0, 1.5, 2.0, 3.0})
        for (double mu : {1.0 / 1.0, 1.0 / 1.5, 1.0}) {
            ModelSpec m = mm_infty(lambda, mu);
            if (mu * m.mean_interarrival() >= 1.0) CHECK(workload_cov_limit(m) > 0.0);
        }
    for (int shape : {2, 3})
        for (double mu : {0.5, 1.0}) {
            ModelSpec m = single_type(InterarrivalModel::erlang(shape, shape * 1.0),
                                      DelayModel::exponential(mu), 0.0);
            if (mu * m.mean_interarrival() >= 1.0) CHECK(workload_cov_limit(m) > 0.0);
        }
}

TEST_CASE("little_generalized") {
    // exponential delay: 1 / (E[tau] (mu + delta))
    ModelSpec m = mm_infty(1.3, 2.0, 0.7);
    CHECK(little_generalized(m) == doctest::Approx(1.3 / 2.7).epsilon(1e-12));

    // deterministic delay: (1 - e^{-delta d}) / (delta E[tau])
    ModelSpec det = single_type(InterarrivalModel::exponential(1.0),
                                DelayModel::deterministic(2.0), 0.5);
    CHECK(little_generalized(det) ==
          doctest::Approx((1.0 - std::exp(-1.0)) / 0.5).epsilon(1e-12));

    // horizon shrinks to zero as delta grows
    double prev = little_generalized(mm_infty(1.0, 1.0, 0.5));
    for (double delta : {1.0, 4.0, 16.0, 256.0}) {
        double cur = little_generalized(mm_infty(1.0, 1.0, delta));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(little_generalized(mm_infty(1.0, 1.0, 1e9)) < 1e-8);
}

TEST_CASE("scope errors") {
    ModelSpec two = two_type_reference();
    CHECK_THROWS_AS(workload_mean_limit(two), ScopeError);

    ModelSpec batchy = mm_infty(1.0, 1.0);
    batchy.batch = BatchMomentProvider::multinomial(2, {1.0});
    CHECK_THROWS_AS(workload_cov_limit(batchy), ScopeError);

    ModelSpec det = single_type(InterarrivalModel::exponential(1.0),
                                DelayModel::deterministic(1.0), 0.0);
    CHECK_THROWS_AS(workload_mean_limit(det), NonExponentialDelay);
    CHECK_THROWS_AS(little_generalized(mm_infty(1.0, 1.0, 0.0)), RangeError);
}

TEST_CASE("limits agree with simulation at a far horizon") {
    // light version of the acceptance run: 2e4 replications, 4 sigma
    ModelSpec m = mm_infty(1.0, 2.0);
    Simulator sim(m);
    auto w = sim.estimate_workload(25.0, 20000, 777);
    CHECK(std::abs(w.mean.estimate - workload_mean_limit(m)) <= 4.0 * w.mean.std_error);
    CHECK(std::abs(w.covariance.estimate - workload_cov_limit(m)) <=
          4.0 * w.covariance.std_error);
}
