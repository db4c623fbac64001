#pragma once

#include <complex>
#include <string>
#include <vector>

#include "delayq/common.hpp"
#include "delayq/rng.hpp"

#include "json.hpp"

namespace delayq {

enum class HazardClass { IFR, DFR, ConstantHazard, Unknown };

std::string to_string(HazardClass h);

/// Ratio of polynomials in z (ascending coefficients) representing the
/// analytic continuation of the moment generating function E[e^{z tau}].
struct RationalTransform {
    std::vector<double> num;
    std::vector<double> den;
    std::vector<double> pole_list;  // real poles of the continuation, ascending

    std::complex<double> eval(std::complex<double> z) const;
    /// d/dz of num/den at z.
    std::complex<double> derivative(std::complex<double> z) const;
    double smallest_pole() const;

    static std::complex<double> eval_poly(const std::vector<double>& c, std::complex<double> z);
};

/// Interarrival law of the batch renewal process. All supported families
/// carry a bounded density (Assumption required by every bound below);
/// a point mass is therefore not accepted here.
class InterarrivalModel {
public:
    enum class Family { Exponential, Erlang, Hyperexponential, Uniform };

    static InterarrivalModel exponential(double rate);
    static InterarrivalModel erlang(int shape, double rate);
    static InterarrivalModel hyperexponential(std::vector<double> weights, std::vector<double> rates);
    static InterarrivalModel uniform(double b);
    static InterarrivalModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Family family() const { return family_; }
    double mean() const { return mean_; }
    double second_moment() const { return second_moment_; }

    /// E[e^{-s tau}]; defined for every complex s that is not a pole of the
    /// family's closed form. Negative real s evaluates the MGF at -s.
    std::complex<double> laplace(std::complex<double> s) const;
    double laplace(double s) const;

    double density(double t) const;
    double cdf(double t) const;
    double density_at_zero() const;

    /// Safe upper bound C for the renewal density: max(sup_t f(t), 1/E[tau]).
    double density_sup() const;

    HazardClass hazard_class() const;

    double sample(RngStream& rng) const;

    bool has_rational_transform() const { return family_ != Family::Uniform; }
    RationalTransform rational_transform() const;

private:
    InterarrivalModel() = default;

    Family family_ = Family::Exponential;
    int shape_ = 1;          // Erlang
    double rate_ = 0.0;      // Exponential / Erlang
    double b_ = 0.0;         // Uniform upper endpoint
    std::vector<double> weights_, rates_;  // Hyperexponential

    double mean_ = 0.0, second_moment_ = 0.0;

    void finalize();
};

/// Reporting / service delay law.
class DelayModel {
public:
    enum class Family { Exponential, Deterministic, Erlang, Hyperexponential };

    static DelayModel exponential(double rate);
    static DelayModel deterministic(double d);
    static DelayModel erlang(int shape, double rate);
    static DelayModel hyperexponential(std::vector<double> weights, std::vector<double> rates);
    static DelayModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Family family() const { return family_; }
    bool is_exponential() const { return family_ == Family::Exponential; }
    /// Rate of an exponential delay; throws NonExponentialDelay otherwise.
    double exponential_rate() const;

    double mean() const { return mean_; }
    double second_moment() const { return second_moment_; }

    std::complex<double> laplace(std::complex<double> s) const;
    double laplace(double s) const;

    double survival(double t) const;

    /// Discounted survival transform: integral over (t, inf) of e^{-delta y} dW(y).
    /// Small negative delta (above -min rate) is accepted so that workload
    /// sensitivity checks can differentiate through delta = 0.
    double omega_bar(double delta, double t) const;

    /// Integral over (0, inf) of e^{-delta x} Pr(L > x) dx, evaluated per
    /// family without cancellation; equals E[L] at delta = 0.
    double equilibrium_integral(double delta) const;

    double sample(RngStream& rng) const;

private:
    DelayModel() = default;

    Family family_ = Family::Exponential;
    int shape_ = 1;
    double rate_ = 0.0;
    double d_ = 0.0;
    std::vector<double> weights_, rates_;

    double mean_ = 0.0, second_moment_ = 0.0;

    void finalize();
};

}  // namespace delayq
