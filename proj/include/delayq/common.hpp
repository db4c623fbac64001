#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace delayq {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter / input problems.
class ConfigError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class UnsupportedFamily : public Error { public: using Error::Error; };
class RangeError : public Error { public: using Error::Error; };
class DimensionError : public Error { public: using Error::Error; };
class ScopeError : public Error { public: using Error::Error; };

// Analytic preconditions.
class PoleError : public Error { public: using Error::Error; };
class OrderError : public Error { public: using Error::Error; };
class NonExponentialDelay : public Error { public: using Error::Error; };
class DivergenceError : public Error { public: using Error::Error; };
class RadiusError : public Error { public: using Error::Error; };
class GridMismatch : public Error { public: using Error::Error; };
class HazardClassError : public Error { public: using Error::Error; };
class NondegeneracyError : public Error { public: using Error::Error; };
class MultipleRootError : public Error { public: using Error::Error; };

/// Neumaier-compensated accumulator. Sums of B-coefficients alternate in
/// magnitude for high moment orders; plain summation loses digits there.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline bool nearly_equal(double a, double b, double rel, double abs_tol = 0.0) {
    double d = std::abs(a - b);
    return d <= abs_tol || d <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace delayq
