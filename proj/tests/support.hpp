#pragma once

#include <random>

#include "carnot/carnot.hpp"

namespace carnot::fixtures {

inline Rational random_rational(std::mt19937_64& rng, int bound = 3, int max_den = 4) {
    std::uniform_int_distribution<int> den(1, max_den);
    const int d = den(rng);
    std::uniform_int_distribution<int> num(-bound * d, bound * d);
    return make_rational(num(rng), d);
}

inline Rational random_nonzero(std::mt19937_64& rng, int bound = 3, int max_den = 4) {
    for (;;) {
        Rational r = random_rational(rng, bound, max_den);
        if (r != 0) return r;
    }
}

inline Polynomial random_poly(std::mt19937_64& rng, int n, int terms = 4, unsigned max_exp = 2) {
    std::uniform_int_distribution<unsigned> e(0, max_exp);
    Polynomial p(n);
    for (int k = 0; k < terms; ++k) {
        Monomial beta(n);
        for (auto& b : beta) b = e(rng);
        p += Polynomial::monomial(beta, random_rational(rng));
    }
    return p;
}

/// Random G-homogeneous polynomial of degree m (possibly zero).
inline Polynomial random_homogeneous(std::mt19937_64& rng, const StratifiedWeights& w, int m, int terms = 4) {
    const int n = w.n();
    std::uniform_int_distribution<int> var(0, n - 1);
    Polynomial p(n);
    for (int k = 0; k < terms; ++k) {
        Monomial beta(n, 0u);
        int left = m;
        for (int guard = 0; left > 0 && guard < 64; ++guard) {
            const int j = var(rng);
            if (w.degree(j) <= left) {
                ++beta[j];
                left -= w.degree(j);
            }
        }
        if (left == 0) p += Polynomial::monomial(beta, random_rational(rng));
    }
    return p;
}

/// Random canonical step-2 group: m2 independent skew matrices of size m1.
inline CarnotGroup random_step2(std::mt19937_64& rng, int m1, int m2) {
    for (;;) {
        std::vector<RationalMatrix> family;
        for (int j = 0; j < m2; ++j) {
            RationalMatrix b(m1, RationalVector(m1, 0));
            for (int r = 0; r < m1; ++r) {
                for (int c = r + 1; c < m1; ++c) {
                    b[r][c] = random_rational(rng, 3, 3);
                    b[c][r] = -b[r][c];
                }
            }
            family.push_back(std::move(b));
        }
        try {
            return make_step2(family);
        } catch (const Error&) {
        }
    }
}

}  // namespace carnot::fixtures
