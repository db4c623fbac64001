#include "delayq/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace delayq {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
    if (e_.empty()) throw DimensionError("MultiIndex: k must be >= 1");
    for (int v : e_)
        if (v < 0) throw RangeError("MultiIndex: entries must be non-negative");
}

MultiIndex MultiIndex::zero(int k) { return MultiIndex(std::vector<int>(k, 0)); }

MultiIndex MultiIndex::unit(int k, int i) {
    if (i < 1 || i > k) throw RangeError("MultiIndex::unit: type out of range");
    std::vector<int> e(k, 0);
    e[static_cast<std::size_t>(i - 1)] = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::order() const {
    int s = 0;
    for (int v : e_) s += v;
    return s;
}

int MultiIndex::unit_type() const {
    if (order() != 1) throw RangeError("MultiIndex::unit_type: not a unit vector");
    for (int i = 0; i < k(); ++i)
        if (e_[static_cast<std::size_t>(i)] == 1) return i + 1;
    return 0;
}

bool MultiIndex::leq(const MultiIndex& n) const {
    if (k() != n.k()) throw DimensionError("MultiIndex: dimension mismatch");
    for (int i = 0; i < k(); ++i)
        if ((*this)[i] > n[i]) return false;
    return true;
}

bool MultiIndex::strictly_below(const MultiIndex& n) const {
    return leq(n) && order() < n.order();
}

MultiIndex MultiIndex::minus(const MultiIndex& l) const {
    if (!l.leq(*this)) throw OrderError("MultiIndex::minus: subtrahend not componentwise <=");
    std::vector<int> e(e_);
    for (int i = 0; i < k(); ++i) e[static_cast<std::size_t>(i)] -= l[i];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::plus(const MultiIndex& m) const {
    if (k() != m.k()) throw DimensionError("MultiIndex: dimension mismatch");
    std::vector<int> e(e_);
    for (int i = 0; i < k(); ++i) e[static_cast<std::size_t>(i)] += m[i];
    return MultiIndex(std::move(e));
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < k(); ++i) os << (i ? "," : "") << (*this)[i];
    os << ")";
    return os.str();
}

std::vector<MultiIndex> iterate_below(const MultiIndex& n) {
    if (n.order() < 1) throw OrderError("iterate_below: need a non-zero index");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(n.k()), 0);
    while (true) {
        MultiIndex m{std::vector<int>(cur)};
        if (m != n) out.push_back(m);
        int pos = n.k() - 1;
        while (pos >= 0) {
            if (cur[static_cast<std::size_t>(pos)] < n[pos]) {
                ++cur[static_cast<std::size_t>(pos)];
                break;
            }
            cur[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

std::vector<MultiIndex> indices_with_order_leq(int k, int max_order) {
    if (k < 1) throw DimensionError("indices_with_order_leq: k must be >= 1");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(k), 0);
    std::function<void(int, int)> rec = [&](int pos, int budget) {
        if (pos == k) {
            MultiIndex m{std::vector<int>(cur)};
            if (m.order() >= 1) out.push_back(m);
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, budget - v);
        }
    };
    rec(0, max_order);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> support_set(const MultiIndex& l, const MultiIndex& n) {
    if (!l.strictly_below(n)) throw OrderError("support_set: requires l < n");
    std::vector<int> out;
    for (int j = 0; j < n.k(); ++j)
        if (l[j] < n[j]) out.push_back(j + 1);
    return out;
}

double binom_product(const MultiIndex& l, const MultiIndex& n) {
    if (!l.leq(n)) throw OrderError("binom_product: requires l <= n componentwise");
    std::uint64_t prod = 1;
    for (int i = 0; i < n.k(); ++i) {
        std::uint64_t c = 1;
        int nn = n[i], kk = l[i];
        kk = std::min(kk, nn - kk);
        for (int j = 1; j <= kk; ++j)
            c = c * static_cast<std::uint64_t>(nn - kk + j) / static_cast<std::uint64_t>(j);
        prod *= c;
    }
    return static_cast<double>(prod);
}

// ---------------------------------------------------------------------------
// BatchMomentProvider

BatchMomentProvider BatchMomentProvider::explicit_table(int k,
                                                        std::map<MultiIndex, double> entries) {
    if (k < 1) throw DimensionError("batch table: k must be >= 1");
    BatchMomentProvider p;
    p.kind_ = Kind::ExplicitTable;
    p.k_ = k;
    p.table_ = std::move(entries);
    for (const auto& [m, v] : p.table_) {
        if (m.k() != k) throw DimensionError("batch table: entry dimension mismatch");
        if (!(std::isfinite(v)) || v < 0.0)
            throw RangeError("batch table: moments must be finite and non-negative");
    }
    p.table_[MultiIndex::zero(k)] = 1.0;
    return p;
}

BatchMomentProvider BatchMomentProvider::independent_marginals(
    std::vector<std::vector<double>> moments) {
    if (moments.empty()) throw DimensionError("batch independent: need k >= 1 moment lists");
    BatchMomentProvider p;
    p.kind_ = Kind::IndependentMarginals;
    p.k_ = static_cast<int>(moments.size());
    for (auto& list : moments) {
        if (list.empty() || std::abs(list[0] - 1.0) > 1e-12)
            throw RangeError("batch independent: each moment list must start with E[X^0] = 1");
        for (double v : list)
            if (!std::isfinite(v) || v < 0.0)
                throw RangeError("batch independent: moments must be finite and non-negative");
    }
    p.marginal_moments_ = std::move(moments);
    return p;
}

BatchMomentProvider BatchMomentProvider::multinomial(int M, std::vector<double> p_vec) {
    if (M < 0) throw RangeError("batch multinomial: M must be >= 0");
    if (p_vec.empty()) throw DimensionError("batch multinomial: need k >= 1 probabilities");
    double sum = 0.0;
    for (double x : p_vec) {
        if (x < 0.0) throw RangeError("batch multinomial: probabilities must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw RangeError("batch multinomial: probabilities must sum to 1");
    BatchMomentProvider p;
    p.kind_ = Kind::Multinomial;
    p.k_ = static_cast<int>(p_vec.size());
    p.M_ = M;
    p.p_ = std::move(p_vec);
    return p;
}

BatchMomentProvider BatchMomentProvider::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("batch: expected {\"kind\": ...}");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "multinomial")
        return multinomial(j.at("M").get<int>(), j.at("p").get<std::vector<double>>());
    if (kind == "independent")
        return independent_marginals(j.at("moments").get<std::vector<std::vector<double>>>());
    if (kind == "table") {
        std::map<MultiIndex, double> entries;
        int k = -1;
        for (const auto& e : j.at("entries")) {
            MultiIndex m{e.at("m").get<std::vector<int>>()};
            if (k < 0) k = m.k();
            entries[m] = e.at("value").get<double>();
        }
        if (k < 0) throw ConfigError("batch table: needs at least one entry");
        return explicit_table(k, std::move(entries));
    }
    throw ConfigError("batch: unknown kind '" + kind + "'");
}

nlohmann::json BatchMomentProvider::to_json() const {
    switch (kind_) {
        case Kind::Multinomial: return {{"kind", "multinomial"}, {"M", M_}, {"p", p_}};
        case Kind::IndependentMarginals:
            return {{"kind", "independent"}, {"moments", marginal_moments_}};
        case Kind::ExplicitTable: {
            nlohmann::json entries = nlohmann::json::array();
            for (const auto& [m, v] : table_)
                entries.push_back({{"m", m.entries()}, {"value", v}});
            return {{"kind", "table"}, {"entries", entries}};
        }
    }
    return {};
}

double BatchMomentProvider::moment(const MultiIndex& m) const {
    if (m.k() != k_) throw DimensionError("batch moment: index dimension mismatch");
    if (m.is_zero()) return 1.0;
    switch (kind_) {
        case Kind::ExplicitTable: {
            auto it = table_.find(m);
            if (it == table_.end())
                throw RangeError("batch table: no moment stored for index " + m.str());
            return it->second;
        }
        case Kind::IndependentMarginals: {
            double prod = 1.0;
            for (int j = 0; j < k_; ++j) {
                const auto& list = marginal_moments_[static_cast<std::size_t>(j)];
                if (m[j] >= static_cast<int>(list.size()))
                    throw RangeError("batch independent: marginal moment of order " +
                                     std::to_string(m[j]) + " not provided for type " +
                                     std::to_string(j + 1));
                prod *= list[static_cast<std::size_t>(m[j])];
            }
            return prod;
        }
        case Kind::Multinomial: {
            // Enumerate all compositions x of M into k parts and sum
            // pmf(x) * prod x_j^{m_j}. Fine at desk scale (M <= 20, k <= 6).
            double log_fact_M = std::lgamma(M_ + 1.0);
            double acc = 0.0;
            std::vector<int> x(static_cast<std::size_t>(k_), 0);
            std::function<void(int, int)> rec = [&](int pos, int remaining) {
                if (pos == k_ - 1) {
                    x[static_cast<std::size_t>(pos)] = remaining;
                    double logp = log_fact_M;
                    double weight = 1.0;
                    for (int j = 0; j < k_; ++j) {
                        int xj = x[static_cast<std::size_t>(j)];
                        logp -= std::lgamma(xj + 1.0);
                        double pj = p_[static_cast<std::size_t>(j)];
                        if (xj > 0 && pj == 0.0) return;  // zero-probability cell
                        if (xj > 0) logp += xj * std::log(pj);
                        for (int r = 0; r < m[j]; ++r) weight *= xj;
                    }
                    if (weight != 0.0) acc += std::exp(logp) * weight;
                    return;
                }
                for (int v = 0; v <= remaining; ++v) {
                    x[static_cast<std::size_t>(pos)] = v;
                    rec(pos + 1, remaining - v);
                }
            };
            rec(0, M_);
            return acc;
        }
    }
    return 0.0;
}

bool BatchMomentProvider::is_unit_batch() const {
    try {
        for (int j = 1; j <= k_; ++j) {
            MultiIndex one = MultiIndex::unit(k_, j);
            MultiIndex two = one.plus(one);
            if (std::abs(moment(one) - 1.0) > 1e-12 || std::abs(moment(two) - 1.0) > 1e-12)
                return false;
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

bool BatchMomentProvider::can_sample() const {
    return kind_ == Kind::Multinomial || is_unit_batch();
}

std::vector<int> BatchMomentProvider::sample(RngStream& rng) const {
    if (kind_ == Kind::Multinomial) {
        std::vector<int> x(static_cast<std::size_t>(k_), 0);
        for (int i = 0; i < M_; ++i) ++x[rng.categorical(p_)];
        return x;
    }
    if (is_unit_batch()) return std::vector<int>(static_cast<std::size_t>(k_), 1);
    throw UnsupportedFamily(
        "batch sampling is available for multinomial and unit batches only");
}

}  // namespace delayq
