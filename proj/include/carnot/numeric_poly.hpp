#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "carnot/polynomial.hpp"

namespace carnot {

/// Double-precision copy of a Polynomial for sampling loops. Terms are grouped by
/// G-degree so that p(delta_lambda P) = sum_d lambda^d S_d(P) costs one pass over
/// the monomials plus one power per degree.
class NumericPolynomial {
public:
    NumericPolynomial() = default;

    NumericPolynomial(const Polynomial& p, const StratifiedWeights& w) : n_(p.n()) {
        if (p.n() != w.n() && p.n() != 2 * w.n()) fail(ErrorKind::DimensionMismatch, "weights do not match polynomial");
        max_power_.assign(n_, 0u);
        std::map<int, std::size_t> slot;
        for (const auto& [beta, c] : p.terms()) {
            int d = 0;
            for (int j = 0; j < n_; ++j) {
                d += w.degree(j % w.n()) * static_cast<int>(beta[j]);
                max_power_[j] = std::max(max_power_[j], beta[j]);
            }
            auto [it, inserted] = slot.try_emplace(d, degrees_.size());
            if (inserted) degrees_.push_back(d);
            terms_.push_back({to_double(c), beta, it->second});
        }
        stride_ = 0;
        for (unsigned m : max_power_) stride_ = std::max(stride_, m + 1);
    }

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<int>& degrees() const { return degrees_; }

    double operator()(const double* x) const {
        double sum = 0.0;
        if (terms_.empty()) return sum;
        const double* pw = fill_powers(x);
        for (const auto& t : terms_) sum += t.coeff * monomial_value(pw, t.beta);
        return sum;
    }

    /// S_d(x) for each entry of degrees().
    void degree_parts(const double* x, double* out) const {
        for (std::size_t k = 0; k < degrees_.size(); ++k) out[k] = 0.0;
        if (terms_.empty()) return;
        const double* pw = fill_powers(x);
        for (const auto& t : terms_) out[t.slot] += t.coeff * monomial_value(pw, t.beta);
    }

    /// sup over the box prod_j [-h_j, h_j] of |p|, bounded termwise.
    double box_bound(const std::vector<double>& half_width) const {
        double bound = 0.0;
        for (const auto& t : terms_) {
            double m = std::abs(t.coeff);
            for (int j = 0; j < n_; ++j) m *= std::pow(half_width[j], static_cast<double>(t.beta[j]));
            bound += m;
        }
        return bound;
    }

private:
    struct Term {
        double coeff;
        Monomial beta;
        std::size_t slot;
    };

    const double* fill_powers(const double* x) const {
        thread_local std::vector<double> powers;
        powers.resize(static_cast<std::size_t>(n_) * stride_);
        for (int j = 0; j < n_; ++j) {
            double* row = &powers[static_cast<std::size_t>(j) * stride_];
            row[0] = 1.0;
            for (unsigned e = 1; e <= max_power_[j]; ++e) row[e] = row[e - 1] * x[j];
        }
        return powers.data();
    }

    double monomial_value(const double* powers, const Monomial& beta) const {
        double m = 1.0;
        for (int j = 0; j < n_; ++j) {
            if (beta[j] != 0) m *= powers[static_cast<std::size_t>(j) * stride_ + beta[j]];
        }
        return m;
    }

    int n_ = 0;
    std::vector<Term> terms_;
    std::vector<int> degrees_;
    std::vector<unsigned> max_power_;
    unsigned stride_ = 1;
};

/// Evaluates a polynomial at delta_lambda(x) from precomputed degree parts.
inline double dilated_value(const std::vector<int>& degrees, const double* parts, double lambda) {
    double sum = 0.0;
    for (std::size_t k = 0; k < degrees.size(); ++k) sum += std::pow(lambda, degrees[k]) * parts[k];
    return sum;
}

}  // namespace carnot
