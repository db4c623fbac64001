#include "delayq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace delayq {

namespace {

constexpr double kWeightTol = 1e-12;

void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

void check_positive_rates(const std::vector<double>& w, const std::vector<double>& r,
                          const char* what) {
    require(!w.empty() && w.size() == r.size(),
            std::string(what) + ": weights and rates must be non-empty and of equal length");
    double sum = 0.0;
    for (double x : w) {
        require(x > 0.0, std::string(what) + ": weights must be positive");
        sum += x;
    }
    require(std::abs(sum - 1.0) <= kWeightTol, std::string(what) + ": weights must sum to 1");
    for (double x : r) require(x > 0.0, std::string(what) + ": rates must be positive");
}

// Multiplies polynomial p (ascending) by the linear factor (c - z).
std::vector<double> mul_linear(const std::vector<double>& p, double c) {
    std::vector<double> out(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] += c * p[i];
        out[i + 1] -= p[i];
    }
    return out;
}

// Erlang survival at t for shape m, rate r: e^{-rt} sum_{j<m} (rt)^j/j!.
double erlang_survival(int m, double r, double t) {
    if (t <= 0.0) return 1.0;
    double x = r * t;
    double term = 1.0, acc = 1.0;
    for (int j = 1; j < m; ++j) {
        term *= x / j;
        acc += term;
    }
    return std::exp(-x) * acc;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

std::string to_string(HazardClass h) {
    switch (h) {
        case HazardClass::IFR: return "IFR";
        case HazardClass::DFR: return "DFR";
        case HazardClass::ConstantHazard: return "ConstantHazard";
        default: return "Unknown";
    }
}

// ---------------------------------------------------------------------------
// RationalTransform

std::complex<double> RationalTransform::eval_poly(const std::vector<double>& c,
                                                  std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

std::complex<double> RationalTransform::eval(std::complex<double> z) const {
    std::complex<double> q = eval_poly(den, z);
    if (std::abs(q) == 0.0) throw PoleError("RationalTransform: evaluation at a pole");
    return eval_poly(num, z) / q;
}

std::complex<double> RationalTransform::derivative(std::complex<double> z) const {
    auto dpoly = [](const std::vector<double>& c, std::complex<double> x) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = c.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * c[i];
        return acc;
    };
    std::complex<double> p = eval_poly(num, z), q = eval_poly(den, z);
    if (std::abs(q) == 0.0) throw PoleError("RationalTransform: derivative at a pole");
    return (dpoly(num, z) * q - p * dpoly(den, z)) / (q * q);
}

double RationalTransform::smallest_pole() const {
    return *std::min_element(pole_list.begin(), pole_list.end());
}

// ---------------------------------------------------------------------------
// InterarrivalModel

InterarrivalModel InterarrivalModel::exponential(double rate) {
    require(rate > 0.0, "interarrival exponential: rate must be positive");
    InterarrivalModel m;
    m.family_ = Family::Exponential;
    m.rate_ = rate;
    m.finalize();
    return m;
}

InterarrivalModel InterarrivalModel::erlang(int shape, double rate) {
    require(shape >= 1, "interarrival erlang: shape must be a positive integer");
    require(rate > 0.0, "interarrival erlang: rate must be positive");
    InterarrivalModel m;
    m.family_ = Family::Erlang;
    m.shape_ = shape;
    m.rate_ = rate;
    m.finalize();
    return m;
}

InterarrivalModel InterarrivalModel::hyperexponential(std::vector<double> weights,
                                                      std::vector<double> rates) {
    check_positive_rates(weights, rates, "interarrival hyperexponential");
    InterarrivalModel m;
    m.family_ = Family::Hyperexponential;
    m.weights_ = std::move(weights);
    m.rates_ = std::move(rates);
    m.finalize();
    return m;
}

InterarrivalModel InterarrivalModel::uniform(double b) {
    require(b > 0.0, "interarrival uniform: upper endpoint must be positive");
    InterarrivalModel m;
    m.family_ = Family::Uniform;
    m.b_ = b;
    m.finalize();
    return m;
}

void InterarrivalModel::finalize() {
    switch (family_) {
        case Family::Exponential:
            mean_ = 1.0 / rate_;
            second_moment_ = 2.0 / (rate_ * rate_);
            break;
        case Family::Erlang:
            mean_ = shape_ / rate_;
            second_moment_ = shape_ * (shape_ + 1.0) / (rate_ * rate_);
            break;
        case Family::Hyperexponential: {
            mean_ = 0.0;
            second_moment_ = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                mean_ += weights_[i] / rates_[i];
                second_moment_ += 2.0 * weights_[i] / (rates_[i] * rates_[i]);
            }
            break;
        }
        case Family::Uniform:
            mean_ = b_ / 2.0;
            second_moment_ = b_ * b_ / 3.0;
            break;
    }
}

InterarrivalModel InterarrivalModel::from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("family"), "interarrival: expected {\"family\": ...}");
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "exponential") return exponential(j.at("rate").get<double>());
    if (fam == "erlang") return erlang(j.at("shape").get<int>(), j.at("rate").get<double>());
    if (fam == "hyperexponential")
        return hyperexponential(j.at("weights").get<std::vector<double>>(),
                                j.at("rates").get<std::vector<double>>());
    if (fam == "uniform") return uniform(j.at("b").get<double>());
    if (fam == "deterministic")
        throw UnsupportedFamily("interarrival: deterministic has no density; not accepted");
    throw ConfigError("interarrival: unknown family '" + fam + "'");
}

nlohmann::json InterarrivalModel::to_json() const {
    switch (family_) {
        case Family::Exponential: return {{"family", "exponential"}, {"rate", rate_}};
        case Family::Erlang: return {{"family", "erlang"}, {"shape", shape_}, {"rate", rate_}};
        case Family::Hyperexponential:
            return {{"family", "hyperexponential"}, {"weights", weights_}, {"rates", rates_}};
        case Family::Uniform: return {{"family", "uniform"}, {"b", b_}};
    }
    return {};
}

std::complex<double> InterarrivalModel::laplace(std::complex<double> s) const {
    switch (family_) {
        case Family::Exponential: {
            if (std::abs(s + rate_) <= 1e-14 * rate_)
                throw PoleError("laplace: s at pole of exponential transform");
            return rate_ / (rate_ + s);
        }
        case Family::Erlang: {
            if (std::abs(s + rate_) <= 1e-14 * rate_)
                throw PoleError("laplace: s at pole of erlang transform");
            return std::pow(rate_ / (rate_ + s), shape_);
        }
        case Family::Hyperexponential: {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                if (std::abs(s + rates_[i]) <= 1e-14 * rates_[i])
                    throw PoleError("laplace: s at pole of hyperexponential transform");
                acc += weights_[i] * rates_[i] / (rates_[i] + s);
            }
            return acc;
        }
        case Family::Uniform: {
            std::complex<double> x = s * b_;
            if (std::abs(x) < 1e-6) {
                // series for (1 - e^{-x})/x around 0
                return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
            }
            return (1.0 - std::exp(-x)) / x;
        }
    }
    return 0.0;
}

double InterarrivalModel::laplace(double s) const {
    return laplace(std::complex<double>(s, 0.0)).real();
}

double InterarrivalModel::density(double t) const {
    if (t < 0.0) return 0.0;
    switch (family_) {
        case Family::Exponential: return rate_ * std::exp(-rate_ * t);
        case Family::Erlang:
            return std::pow(rate_, shape_) * std::pow(t, shape_ - 1) * std::exp(-rate_ * t) /
                   factorial(shape_ - 1);
        case Family::Hyperexponential: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i)
                acc += weights_[i] * rates_[i] * std::exp(-rates_[i] * t);
            return acc;
        }
        case Family::Uniform: return t <= b_ ? 1.0 / b_ : 0.0;
    }
    return 0.0;
}

double InterarrivalModel::cdf(double t) const {
    if (t <= 0.0) return 0.0;
    switch (family_) {
        case Family::Exponential: return -std::expm1(-rate_ * t);
        case Family::Erlang: return 1.0 - erlang_survival(shape_, rate_, t);
        case Family::Hyperexponential: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i)
                acc += weights_[i] * -std::expm1(-rates_[i] * t);
            return acc;
        }
        case Family::Uniform: return std::min(t / b_, 1.0);
    }
    return 0.0;
}

double InterarrivalModel::density_at_zero() const {
    switch (family_) {
        case Family::Exponential: return rate_;
        case Family::Erlang: return shape_ == 1 ? rate_ : 0.0;
        case Family::Hyperexponential: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) acc += weights_[i] * rates_[i];
            return acc;
        }
        case Family::Uniform: return 1.0 / b_;
    }
    return 0.0;
}

double InterarrivalModel::density_sup() const {
    double sup_f = 0.0;
    switch (family_) {
        case Family::Exponential:
            sup_f = rate_;
            break;
        case Family::Erlang: {
            if (shape_ == 1) {
                sup_f = rate_;
            } else {
                // mode at t = (m-1)/rate
                double m1 = shape_ - 1.0;
                sup_f = rate_ * std::pow(m1, m1) * std::exp(-m1) / factorial(shape_ - 1);
            }
            break;
        }
        case Family::Hyperexponential:
            sup_f = density_at_zero();  // mixture density is decreasing
            break;
        case Family::Uniform:
            sup_f = 1.0 / b_;
            break;
    }
    return std::max(sup_f, 1.0 / mean_);
}

HazardClass InterarrivalModel::hazard_class() const {
    switch (family_) {
        case Family::Exponential: return HazardClass::ConstantHazard;
        case Family::Erlang:
            return shape_ == 1 ? HazardClass::ConstantHazard : HazardClass::IFR;
        case Family::Hyperexponential: return HazardClass::DFR;
        case Family::Uniform: return HazardClass::IFR;  // hazard 1/(b-t) increases
    }
    return HazardClass::Unknown;
}

double InterarrivalModel::sample(RngStream& rng) const {
    switch (family_) {
        case Family::Exponential: return rng.exponential(rate_);
        case Family::Erlang: {
            double acc = 0.0;
            for (int i = 0; i < shape_; ++i) acc += rng.exponential(rate_);
            return acc;
        }
        case Family::Hyperexponential: return rng.exponential(rates_[rng.categorical(weights_)]);
        case Family::Uniform: return rng.uniform(0.0, b_);
    }
    return 0.0;
}

RationalTransform InterarrivalModel::rational_transform() const {
    RationalTransform rt;
    switch (family_) {
        case Family::Exponential:
            rt.num = {rate_};
            rt.den = {rate_, -1.0};
            rt.pole_list = {rate_};
            break;
        case Family::Erlang: {
            rt.num = {std::pow(rate_, shape_)};
            rt.den = {1.0};
            for (int i = 0; i < shape_; ++i) rt.den = mul_linear(rt.den, rate_);
            rt.pole_list.assign(shape_, rate_);
            break;
        }
        case Family::Hyperexponential: {
            rt.den = {1.0};
            for (double r : rates_) rt.den = mul_linear(rt.den, r);
            rt.num.assign(rt.den.size() - 1, 0.0);
            for (std::size_t i = 0; i < rates_.size(); ++i) {
                std::vector<double> part = {weights_[i] * rates_[i]};
                for (std::size_t j = 0; j < rates_.size(); ++j)
                    if (j != i) part = mul_linear(part, rates_[j]);
                for (std::size_t c = 0; c < part.size(); ++c) rt.num[c] += part[c];
            }
            rt.pole_list = rates_;
            std::sort(rt.pole_list.begin(), rt.pole_list.end());
            break;
        }
        case Family::Uniform:
            throw UnsupportedFamily("uniform interarrivals have no rational transform");
    }
    return rt;
}

// ---------------------------------------------------------------------------
// DelayModel

DelayModel DelayModel::exponential(double rate) {
    require(rate > 0.0, "delay exponential: rate must be positive");
    DelayModel m;
    m.family_ = Family::Exponential;
    m.rate_ = rate;
    m.finalize();
    return m;
}

DelayModel DelayModel::deterministic(double d) {
    require(d > 0.0, "delay deterministic: d must be positive");
    DelayModel m;
    m.family_ = Family::Deterministic;
    m.d_ = d;
    m.finalize();
    return m;
}

DelayModel DelayModel::erlang(int shape, double rate) {
    require(shape >= 1, "delay erlang: shape must be a positive integer");
    require(rate > 0.0, "delay erlang: rate must be positive");
    DelayModel m;
    m.family_ = Family::Erlang;
    m.shape_ = shape;
    m.rate_ = rate;
    m.finalize();
    return m;
}

DelayModel DelayModel::hyperexponential(std::vector<double> weights, std::vector<double> rates) {
    check_positive_rates(weights, rates, "delay hyperexponential");
    DelayModel m;
    m.family_ = Family::Hyperexponential;
    m.weights_ = std::move(weights);
    m.rates_ = std::move(rates);
    m.finalize();
    return m;
}

void DelayModel::finalize() {
    switch (family_) {
        case Family::Exponential:
            mean_ = 1.0 / rate_;
            second_moment_ = 2.0 / (rate_ * rate_);
            break;
        case Family::Deterministic:
            mean_ = d_;
            second_moment_ = d_ * d_;
            break;
        case Family::Erlang:
            mean_ = shape_ / rate_;
            second_moment_ = shape_ * (shape_ + 1.0) / (rate_ * rate_);
            break;
        case Family::Hyperexponential: {
            mean_ = 0.0;
            second_moment_ = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                mean_ += weights_[i] / rates_[i];
                second_moment_ += 2.0 * weights_[i] / (rates_[i] * rates_[i]);
            }
            break;
        }
    }
}

DelayModel DelayModel::from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("family"), "delay: expected {\"family\": ...}");
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "exponential") return exponential(j.at("rate").get<double>());
    if (fam == "deterministic") return deterministic(j.at("d").get<double>());
    if (fam == "erlang") return erlang(j.at("shape").get<int>(), j.at("rate").get<double>());
    if (fam == "hyperexponential")
        return hyperexponential(j.at("weights").get<std::vector<double>>(),
                                j.at("rates").get<std::vector<double>>());
    throw ConfigError("delay: unknown family '" + fam + "'");
}

nlohmann::json DelayModel::to_json() const {
    switch (family_) {
        case Family::Exponential: return {{"family", "exponential"}, {"rate", rate_}};
        case Family::Deterministic: return {{"family", "deterministic"}, {"d", d_}};
        case Family::Erlang: return {{"family", "erlang"}, {"shape", shape_}, {"rate", rate_}};
        case Family::Hyperexponential:
            return {{"family", "hyperexponential"}, {"weights", weights_}, {"rates", rates_}};
    }
    return {};
}

double DelayModel::exponential_rate() const {
    if (family_ != Family::Exponential)
        throw NonExponentialDelay("operation requires an exponential delay");
    return rate_;
}

std::complex<double> DelayModel::laplace(std::complex<double> s) const {
    switch (family_) {
        case Family::Exponential: {
            if (std::abs(s + rate_) <= 1e-14 * rate_)
                throw PoleError("laplace: s at pole of exponential delay transform");
            return rate_ / (rate_ + s);
        }
        case Family::Deterministic: return std::exp(-s * d_);
        case Family::Erlang: {
            if (std::abs(s + rate_) <= 1e-14 * rate_)
                throw PoleError("laplace: s at pole of erlang delay transform");
            return std::pow(rate_ / (rate_ + s), shape_);
        }
        case Family::Hyperexponential: {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                if (std::abs(s + rates_[i]) <= 1e-14 * rates_[i])
                    throw PoleError("laplace: s at pole of hyperexponential delay transform");
                acc += weights_[i] * rates_[i] / (rates_[i] + s);
            }
            return acc;
        }
    }
    return 0.0;
}

double DelayModel::laplace(double s) const {
    return laplace(std::complex<double>(s, 0.0)).real();
}

double DelayModel::survival(double t) const {
    if (t < 0.0) return 1.0;
    switch (family_) {
        case Family::Exponential: return std::exp(-rate_ * t);
        case Family::Deterministic: return t < d_ ? 1.0 : 0.0;
        case Family::Erlang: return erlang_survival(shape_, rate_, t);
        case Family::Hyperexponential: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i)
                acc += weights_[i] * std::exp(-rates_[i] * t);
            return acc;
        }
    }
    return 0.0;
}

double DelayModel::omega_bar(double delta, double t) const {
    if (t < 0.0) t = 0.0;
    switch (family_) {
        case Family::Exponential: {
            if (rate_ + delta <= 0.0)
                throw RangeError("omega_bar: delta must exceed -rate");
            return rate_ / (rate_ + delta) * std::exp(-(rate_ + delta) * t);
        }
        case Family::Deterministic: return d_ > t ? std::exp(-delta * d_) : 0.0;
        case Family::Erlang: {
            double r = rate_ + delta;
            if (r <= 0.0) throw RangeError("omega_bar: delta must exceed -rate");
            return std::pow(rate_ / r, shape_) * erlang_survival(shape_, r, t);
        }
        case Family::Hyperexponential: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                double r = rates_[i] + delta;
                if (r <= 0.0) throw RangeError("omega_bar: delta must exceed -min rate");
                acc += weights_[i] * rates_[i] / r * std::exp(-r * t);
            }
            return acc;
        }
    }
    return 0.0;
}

double DelayModel::equilibrium_integral(double delta) const {
    switch (family_) {
        case Family::Exponential: return 1.0 / (rate_ + delta);
        case Family::Deterministic:
            return delta == 0.0 ? d_ : -std::expm1(-delta * d_) / delta;
        case Family::Erlang: {
            // sum_{j<m} rate^j / (rate+delta)^{j+1}
            double acc = 0.0, term = 1.0 / (rate_ + delta);
            for (int j = 0; j < shape_; ++j) {
                acc += term;
                term *= rate_ / (rate_ + delta);
            }
            return acc;
        }
        case Family::Hyperexponential: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i)
                acc += weights_[i] / (rates_[i] + delta);
            return acc;
        }
    }
    return 0.0;
}

double DelayModel::sample(RngStream& rng) const {
    switch (family_) {
        case Family::Exponential: return rng.exponential(rate_);
        case Family::Deterministic: return d_;
        case Family::Erlang: {
            double acc = 0.0;
            for (int i = 0; i < shape_; ++i) acc += rng.exponential(rate_);
            return acc;
        }
        case Family::Hyperexponential: return rng.exponential(rates_[rng.categorical(weights_)]);
    }
    return 0.0;
}

}  // namespace delayq
