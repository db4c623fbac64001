#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "delayq/distributions.hpp"
#include "helpers.hpp"

using namespace delayq;

TEST_CASE("laplace transform closed forms") {
    CHECK(InterarrivalModel::exponential(1.0).laplace(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(InterarrivalModel::erlang(2, 2.0).laplace(2.0) == doctest::Approx(0.25).epsilon(1e-15));

    // normalization at s = 0 is exact for every family
    CHECK(InterarrivalModel::exponential(3.0).laplace(0.0) == 1.0);
    CHECK(InterarrivalModel::erlang(3, 2.0).laplace(0.0) == 1.0);
    CHECK(InterarrivalModel::hyperexponential({0.5, 0.5}, {1.0, 3.0}).laplace(0.0) == 1.0);
    CHECK(InterarrivalModel::uniform(2.0).laplace(0.0) == 1.0);
    CHECK(DelayModel::deterministic(2.0).laplace(0.0) == 1.0);
}

TEST_CASE("laplace at a pole raises PoleError") {
    CHECK_THROWS_AS(InterarrivalModel::exponential(1.0).laplace(-1.0), PoleError);
    CHECK_THROWS_AS(DelayModel::erlang(2, 3.0).laplace(-3.0), PoleError);
}

TEST_CASE("laplace agrees with Monte-Carlo expectation of e^{-s tau}") {
    auto models = std::vector<InterarrivalModel>{
        InterarrivalModel::exponential(1.0),
        InterarrivalModel::erlang(2, 2.0),
        InterarrivalModel::hyperexponential({0.5, 0.5}, {1.0, 3.0}),
        InterarrivalModel::uniform(2.0),
    };
    const std::size_t samples = 1000000;
    int model_id = 0;
    for (const auto& m : models) {
        for (double s : {0.5, 1.0, 2.0}) {
            RngStream stream(777, static_cast<std::uint64_t>(model_id * 10) +
                                      static_cast<std::uint64_t>(s * 2));
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t i = 0; i < samples; ++i) {
                double v = std::exp(-s * m.sample(stream));
                sum += v;
                sumsq += v * v;
            }
            double mean = sum / samples;
            double se = std::sqrt((sumsq / samples - mean * mean) / samples);
            CHECK(std::abs(mean - m.laplace(s)) < 5.0 * se);
        }
        ++model_id;
    }
}

TEST_CASE("derivative of laplace at 0 equals -E[tau]") {
    auto models = std::vector<InterarrivalModel>{
        InterarrivalModel::exponential(2.0),
        InterarrivalModel::erlang(3, 2.0),
        InterarrivalModel::hyperexponential({0.3, 0.7}, {1.0, 4.0}),
        InterarrivalModel::uniform(3.0),
    };
    const double h = 1e-5;
    for (const auto& m : models) {
        double diff = (m.laplace(h) - m.laplace(-h)) / (2.0 * h);
        CHECK(diff == doctest::Approx(-m.mean()).epsilon(1e-6));
    }
}

TEST_CASE("omega_bar examples and properties") {
    DelayModel exp1 = DelayModel::exponential(1.0);
    CHECK(exp1.omega_bar(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exp1.omega_bar(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(DelayModel::deterministic(2.0).omega_bar(0.5, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    // non-increasing in t, and equal to the survival function at delta = 0
    for (const DelayModel& d : {DelayModel::exponential(1.5), DelayModel::deterministic(2.0),
                                DelayModel::erlang(2, 3.0),
                                DelayModel::hyperexponential({0.5, 0.5}, {1.0, 3.0})}) {
        double prev = d.omega_bar(0.7, 0.0);
        for (int i = 1; i <= 50; ++i) {
            double t = 0.1 * i;
            double cur = d.omega_bar(0.7, t);
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
    for (const DelayModel& d : {DelayModel::exponential(1.5), DelayModel::deterministic(2.0)}) {
        for (int i = 0; i <= 40; ++i) {
            double t = 0.1 * i;
            CHECK(d.omega_bar(0.0, t) == doctest::Approx(d.survival(t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sampling is deterministic per stream and matches the law") {
    RngStream a(123), b(123);
    DelayModel det = DelayModel::deterministic(2.0);
    CHECK(det.sample(a) == 2.0);

    InterarrivalModel e = InterarrivalModel::exponential(1.0);
    CHECK(e.sample(a) == e.sample(b));  // identical stream state, identical draw

    // empirical mean of 1e6 Exponential(2) draws within 5 standard errors
    InterarrivalModel e2 = InterarrivalModel::exponential(2.0);
    RngStream stream(99);
    const std::size_t n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = e2.sample(stream);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - 0.5) < 5.0 * se);
}

TEST_CASE("density_sup returns max(sup f, 1/mean)") {
    CHECK(InterarrivalModel::exponential(1.0).density_sup() == doctest::Approx(1.0));

    // Erlang(2, 2): density peaks at 2/e < 1 = 1/E[tau]
    InterarrivalModel er = InterarrivalModel::erlang(2, 2.0);
    double grid_max = 0.0;
    for (int i = 0; i <= 5000; ++i) grid_max = std::max(grid_max, er.density(i * 1e-3));
    CHECK(grid_max == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-6));
    CHECK(er.density_sup() == doctest::Approx(1.0));

    CHECK(InterarrivalModel::uniform(2.0).density_sup() == doctest::Approx(1.0));

    // high-shape Erlang: the mode dominates 1/mean; compare to a grid search
    InterarrivalModel er8 = InterarrivalModel::erlang(8, 1.0);
    grid_max = 0.0;
    for (int i = 0; i <= 30000; ++i) grid_max = std::max(grid_max, er8.density(i * 1e-3));
    CHECK(er8.density_sup() == doctest::Approx(std::max(grid_max, 1.0 / 8.0)).epsilon(1e-6));
}

TEST_CASE("rational transform matches laplace on the negative axis") {
    auto models = std::vector<InterarrivalModel>{
        InterarrivalModel::exponential(1.3),
        InterarrivalModel::erlang(3, 2.5),
        InterarrivalModel::hyperexponential({0.2, 0.8}, {1.0, 4.0}),
    };
    RngStream stream(2024);
    for (const auto& m : models) {
        RationalTransform rt = m.rational_transform();
        CHECK(rt.eval({0.0, 0.0}).real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rt.num.size() <= rt.den.size());
        for (int i = 0; i < 20; ++i) {
            double s = stream.uniform(1e-3, 10.0);
            CHECK(rt.eval({-s, 0.0}).real() == doctest::Approx(m.laplace(s)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(InterarrivalModel::uniform(2.0).rational_transform(), UnsupportedFamily);
}

TEST_CASE("hazard classes") {
    CHECK(InterarrivalModel::exponential(1.0).hazard_class() == HazardClass::ConstantHazard);
    CHECK(InterarrivalModel::erlang(1, 2.0).hazard_class() == HazardClass::ConstantHazard);
    CHECK(InterarrivalModel::erlang(2, 2.0).hazard_class() == HazardClass::IFR);
    CHECK(InterarrivalModel::hyperexponential({0.5, 0.5}, {1.0, 3.0}).hazard_class() ==
          HazardClass::DFR);
    CHECK(InterarrivalModel::uniform(2.0).hazard_class() == HazardClass::IFR);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(InterarrivalModel::exponential(0.0), ConfigError);
    CHECK_THROWS_AS(InterarrivalModel::erlang(0, 1.0), ConfigError);
    CHECK_THROWS_AS(InterarrivalModel::hyperexponential({0.5, 0.6}, {1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(InterarrivalModel::hyperexponential({0.5, 0.5}, {1.0, -2.0}), ConfigError);
    CHECK_THROWS_AS(DelayModel::deterministic(-1.0), ConfigError);
}

TEST_CASE("JSON parsing of model fragments") {
    auto ia = InterarrivalModel::from_json(
        nlohmann::json{{"family", "erlang"}, {"shape", 2}, {"rate", 2.0}});
    CHECK(ia.family() == InterarrivalModel::Family::Erlang);
    CHECK(ia.mean() == doctest::Approx(1.0));

    auto d = DelayModel::from_json(nlohmann::json{{"family", "deterministic"}, {"d", 2.0}});
    CHECK(d.mean() == 2.0);

    // deterministic interarrivals have no density and are rejected
    CHECK_THROWS_AS(InterarrivalModel::from_json(
                        nlohmann::json{{"family", "deterministic"}, {"d", 2.0}}),
                    UnsupportedFamily);
    CHECK_THROWS_AS(InterarrivalModel::from_json(nlohmann::json{{"family", "weibull"}}),
                    ConfigError);

    // round trip
    auto hy = InterarrivalModel::hyperexponential({0.5, 0.5}, {1.0, 3.0});
    auto back = InterarrivalModel::from_json(hy.to_json());
    CHECK(back.laplace(1.7) == doctest::Approx(hy.laplace(1.7)).epsilon(1e-15));
}

TEST_CASE("equilibrium integral equals (1 - laplace(delta))/delta") {
    for (const DelayModel& d : {DelayModel::exponential(1.5), DelayModel::deterministic(2.0),
                                DelayModel::erlang(3, 2.0),
                                DelayModel::hyperexponential({0.5, 0.5}, {1.0, 3.0})}) {
        CHECK(d.equilibrium_integral(0.0) == doctest::Approx(d.mean()).epsilon(1e-12));
        for (double delta : {0.1, 0.5, 2.0}) {
            double direct = (1.0 - d.laplace(delta)) / delta;
            CHECK(d.equilibrium_integral(delta) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}
