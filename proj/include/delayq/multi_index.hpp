#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "delayq/common.hpp"
#include "delayq/rng.hpp"

#include "json.hpp"

namespace delayq {

/// Vector of non-negative integers indexing a joint moment. The partial
/// order l < n means componentwise l_i <= n_i with strictly smaller total.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    static MultiIndex zero(int k);
    /// Kronecker unit vector: entry i set to 1 (i is 1-based).
    static MultiIndex unit(int k, int i);

    int k() const { return static_cast<int>(e_.size()); }
    int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
    /// Total order eta = sum of entries.
    int order() const;

    bool is_zero() const { return order() == 0; }
    bool is_unit() const { return order() == 1; }
    /// Index (1-based) of the single non-zero entry of a unit vector.
    int unit_type() const;

    bool leq(const MultiIndex& n) const;                  // componentwise <=
    bool strictly_below(const MultiIndex& n) const;       // leq and smaller total
    MultiIndex minus(const MultiIndex& l) const;
    MultiIndex plus(const MultiIndex& m) const;

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
    bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }
    bool operator<(const MultiIndex& o) const { return e_ < o.e_; }  // lexicographic, for maps

    const std::vector<int>& entries() const { return e_; }
    std::string str() const;

private:
    std::vector<int> e_;
};

/// All l with l < n, in lexicographic order; size is prod(n_i + 1) - 1.
std::vector<MultiIndex> iterate_below(const MultiIndex& n);

/// All n in N^k with 1 <= eta_n <= max_order, lexicographic.
std::vector<MultiIndex> indices_with_order_leq(int k, int max_order);

/// Coordinates (1-based) where l_j < n_j. Throws OrderError unless l < n.
std::vector<int> support_set(const MultiIndex& l, const MultiIndex& n);

/// prod_i binom(n_i, l_i), exact integer arithmetic; requires l <= n.
double binom_product(const MultiIndex& l, const MultiIndex& n);

/// Joint raw moments of the batch vector (X_1, ..., X_k).
class BatchMomentProvider {
public:
    enum class Kind { ExplicitTable, IndependentMarginals, Multinomial };

    static BatchMomentProvider explicit_table(int k, std::map<MultiIndex, double> entries);
    /// moments[j][r] = E[X_{j+1}^r]; each list must start with 1.
    static BatchMomentProvider independent_marginals(std::vector<std::vector<double>> moments);
    static BatchMomentProvider multinomial(int M, std::vector<double> p);
    static BatchMomentProvider from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Kind kind() const { return kind_; }
    int k() const { return k_; }

    /// E[prod_j X_j^{m_j}]; multinomial moments are computed by exact
    /// enumeration over all compositions of M.
    double moment(const MultiIndex& m) const;

    /// True when every X_j == 1 almost surely (first two moments are 1).
    bool is_unit_batch() const;

    bool can_sample() const;
    /// Draws one batch vector; supported for multinomial and unit batches.
    std::vector<int> sample(RngStream& rng) const;

    int multinomial_M() const { return M_; }
    const std::vector<double>& multinomial_p() const { return p_; }

private:
    BatchMomentProvider() = default;

    Kind kind_ = Kind::Multinomial;
    int k_ = 1;
    std::map<MultiIndex, double> table_;
    std::vector<std::vector<double>> marginal_moments_;
    int M_ = 0;
    std::vector<double> p_;
};

}  // namespace delayq
