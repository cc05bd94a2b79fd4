#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "carnot/error.hpp"
#include "carnot/rational.hpp"
#include "carnot/weights.hpp"

namespace carnot {

/// Exponent vector beta of a monomial x^beta.
using Monomial = std::vector<unsigned>;

inline unsigned total_degree(const Monomial& beta) {
    return std::accumulate(beta.begin(), beta.end(), 0u);
}

/// ||beta||_G = sum_j d_j beta_j.
inline int weighted_degree(const Monomial& beta, const StratifiedWeights& w) {
    int sum = 0;
    for (std::size_t j = 0; j < beta.size(); ++j) sum += w.degree(static_cast<int>(j)) * static_cast<int>(beta[j]);
    return sum;
}

/// Graded-lexicographic order: total degree first, then lexicographic on exponents.
struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const unsigned da = total_degree(a);
        const unsigned db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

/// Sparse multivariate polynomial with exact rational coefficients in n variables.
/// Zero coefficients are never stored, so equal polynomials compare equal.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GradedLex>;

    Polynomial() = default;
    explicit Polynomial(int n) : n_(n) {
        if (n < 0) fail(ErrorKind::BadDimension, "negative variable count");
    }

    static Polynomial constant(int n, const Rational& c) {
        Polynomial p(n);
        p.add_term(Monomial(n, 0u), c);
        return p;
    }

    static Polynomial variable(int n, int j) {
        if (j < 0 || j >= n) fail(ErrorKind::IndexOutOfRange, "variable index out of range");
        Monomial beta(n, 0u);
        beta[j] = 1;
        Polynomial p(n);
        p.add_term(beta, Rational(1));
        return p;
    }

    static Polynomial monomial(Monomial beta, const Rational& c) {
        Polynomial p(static_cast<int>(beta.size()));
        p.add_term(std::move(beta), c);
        return p;
    }

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    Rational coefficient(const Monomial& beta) const {
        auto it = terms_.find(beta);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Adds c * x^beta, dropping the term if the coefficient cancels.
    void add_term(Monomial beta, const Rational& c) {
        if (static_cast<int>(beta.size()) != n_) fail(ErrorKind::DimensionMismatch, "monomial size differs from n");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(beta), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [beta, c] : terms_) d = std::max(d, carnot::total_degree(beta));
        return d;
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [beta, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same_n(o);
        for (const auto& [beta, c] : o.terms_) add_term(beta, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_same_n(o);
        for (const auto& [beta, c] : o.terms_) add_term(beta, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [beta, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same_n(b);
        Polynomial r(a.n_);
        Monomial beta(a.n_);
        for (const auto& [ba, ca] : a.terms_) {
            for (const auto& [bb, cb] : b.terms_) {
                for (int j = 0; j < a.n_; ++j) beta[j] = ba[j] + bb[j];
                r.add_term(beta, ca * cb);
            }
        }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    Rational evaluate(std::span<const Rational> point) const {
        if (static_cast<int>(point.size()) != n_) fail(ErrorKind::DimensionMismatch, "point size differs from n");
        Rational sum = 0;
        for (const auto& [beta, c] : terms_) {
            Rational term = c;
            for (int j = 0; j < n_; ++j) {
                for (unsigned e = 0; e < beta[j]; ++e) term *= point[j];
            }
            sum += term;
        }
        return sum;
    }

    double evaluate(std::span<const double> point) const {
        if (static_cast<int>(point.size()) != n_) fail(ErrorKind::DimensionMismatch, "point size differs from n");
        double sum = 0.0;
        for (const auto& [beta, c] : terms_) {
            double term = c.get_d();
            for (int j = 0; j < n_; ++j) {
                for (unsigned e = 0; e < beta[j]; ++e) term *= point[j];
            }
            sum += term;
        }
        return sum;
    }

    /// Exact partial derivative with respect to variable j (0-based).
    Polynomial derivative(int j) const {
        if (j < 0 || j >= n_) fail(ErrorKind::IndexOutOfRange, "derivative index out of range");
        Polynomial r(n_);
        for (const auto& [beta, c] : terms_) {
            if (beta[j] == 0) continue;
            Monomial b = beta;
            --b[j];
            r.add_term(std::move(b), c * beta[j]);
        }
        return r;
    }

    /// Composition p(images[0], ..., images[n-1]); all images share one variable count.
    Polynomial substitute(std::span<const Polynomial> images) const {
        if (static_cast<int>(images.size()) != n_) fail(ErrorKind::DimensionMismatch, "need one image per variable");
        const int target_n = images.empty() ? 0 : images.front().n();
        for (const auto& img : images) {
            if (img.n() != target_n) fail(ErrorKind::DimensionMismatch, "images have different variable counts");
        }
        std::vector<std::vector<Polynomial>> powers(n_);
        auto power = [&](int j, unsigned e) -> const Polynomial& {
            auto& cache = powers[j];
            if (cache.empty()) cache.push_back(constant(target_n, 1));
            while (cache.size() <= e) cache.push_back(cache.back() * images[j]);
            return cache[e];
        };
        Polynomial r(target_n);
        for (const auto& [beta, c] : terms_) {
            Polynomial term = constant(target_n, c);
            for (int j = 0; j < n_; ++j) {
                if (beta[j] != 0) term *= power(j, beta[j]);
            }
            r += term;
        }
        return r;
    }

    /// Largest ||beta||_G over stored terms.
    int g_degree(const StratifiedWeights& w) const {
        check_weights(w);
        if (is_zero()) fail(ErrorKind::ZeroPolynomial, "G-degree of the zero polynomial is undefined");
        int d = 0;
        for (const auto& [beta, c] : terms_) d = std::max(d, weighted_degree(beta, w));
        return d;
    }

    /// True iff every stored term has ||beta||_G == m (vacuously true for 0).
    bool is_g_homogeneous(const StratifiedWeights& w, int m) const {
        check_weights(w);
        return std::all_of(terms_.begin(), terms_.end(),
                           [&](const auto& t) { return weighted_degree(t.first, w) == m; });
    }

    /// Sum of the terms with ||beta||_G == m.
    Polynomial g_homogeneous_part(const StratifiedWeights& w, int m) const {
        check_weights(w);
        Polynomial r(n_);
        for (const auto& [beta, c] : terms_) {
            if (weighted_degree(beta, w) == m) r.terms_.emplace(beta, c);
        }
        return r;
    }

    /// p o delta_lambda: each term scaled by lambda^{||beta||_G}.
    Polynomial dilate(const StratifiedWeights& w, const Rational& lambda) const {
        check_weights(w);
        if (lambda == 0) fail(ErrorKind::ZeroLambda, "dilation factor must be nonzero");
        Polynomial r(n_);
        for (const auto& [beta, c] : terms_) {
            Rational scale = 1;
            for (int e = weighted_degree(beta, w); e > 0; --e) scale *= lambda;
            r.terms_.emplace(beta, c * scale);
        }
        return r;
    }

private:
    void check_same_n(const Polynomial& o) const {
        if (n_ != o.n_) fail(ErrorKind::DimensionMismatch, "polynomials have different variable counts");
    }
    void check_weights(const StratifiedWeights& w) const {
        if (w.n() != n_) fail(ErrorKind::DimensionMismatch, "weights do not match the variable count");
    }

    int n_ = 0;
    TermMap terms_;
};

/// Kinds accepted by poly_arith.
enum class ArithKind { Add, Sub, Mul };

inline Polynomial poly_arith(const Polynomial& a, const Polynomial& b, ArithKind kind) {
    switch (kind) {
        case ArithKind::Add: return a + b;
        case ArithKind::Sub: return a - b;
        case ArithKind::Mul: return a * b;
    }
    return Polynomial(a.n());
}

/// Images (x_0, ..., x_{n-1}) shifted into a space of `total` variables starting at `offset`.
inline std::vector<Polynomial> embedding(int n, int total, int offset) {
    std::vector<Polynomial> images;
    images.reserve(n);
    for (int j = 0; j < n; ++j) images.push_back(Polynomial::variable(total, offset + j));
    return images;
}

}  // namespace carnot
