#pragma once

// Construction of u = P1 - P3 with P1, P3 harmonic and G-homogeneous of degrees
// 1 and 3, and <grad_G P1, grad_G P3> = p x_i^2 + q x_s^2 for a noncommuting
// pair (X_i, X_s). The 5x5 linear system is assembled by applying the horizontal
// calculus to the ansatz, never transcribed, and every result is re-verified.

#include <array>
#include <string>

#include "carnot/exact_linalg.hpp"
#include "carnot/hcalc.hpp"

namespace carnot {

/// Noncommuting pair (X_i, X_s) witnessed by the second-layer coordinate y_j.
struct PairChoice {
    int i = 0;
    int s = 0;
    int j = 0;
    Rational alpha_gap;  // alpha[s][i][j] - alpha[i][s][j]

    bool operator==(const PairChoice&) const = default;
};

/// P3 = sum_k c_k basis[k], linear in the unknown coefficients c_1..c_5.
struct Ansatz {
    Polynomial p1;
    std::array<Polynomial, 5> basis;

    Polynomial instantiate(const RationalVector& c) const {
        Polynomial p3(p1.n());
        for (std::size_t k = 0; k < basis.size(); ++k) p3 += c.at(k) * basis[k];
        return p3;
    }
};

struct LinearSystem {
    RationalMatrix matrix;
    RationalVector rhs;
};

struct Certificate {
    bool harmonic = false;
    Polynomial inner_product;
    bool inner_matches_pq = false;
};

struct CounterexampleResult {
    Rational b, p, q;
    PairChoice pair;
    RationalVector coefficients;  // c_1..c_5
    Polynomial p1, p3, u;
    LinearSystem system;
    Certificate certificate;
};

/// The four alpha entries of a pair in the (alpha_1^1, alpha_2^1, alpha_1^2, alpha_2^2)
/// convention: alpha_k^i is the coefficient of x_k d_y in X_i.
struct PairAlpha {
    Rational x1_in_X1;
    Rational x2_in_X1;
    Rational x1_in_X2;
    Rational x2_in_X2;

    Rational gap() const { return x1_in_X2 - x2_in_X1; }
};

inline PairAlpha pair_alpha(const Step2Alpha& alpha, const PairChoice& pair) {
    return {alpha.at(pair.i, pair.i, pair.j), alpha.at(pair.i, pair.s, pair.j), alpha.at(pair.s, pair.i, pair.j),
            alpha.at(pair.s, pair.s, pair.j)};
}

/// Lexicographically first (i, s, j) with alpha[s][i][j] != alpha[i][s][j].
inline PairChoice select_pair(const CarnotGroup& g) {
    if (g.step() < 2) fail(ErrorKind::NoNoncommutingPair, g.name + " is abelian");
    const Step2Alpha alpha = extract_alpha(g);
    for (int i = 0; i < alpha.m1(); ++i) {
        for (int s = 0; s < alpha.m1(); ++s) {
            if (s == i) continue;
            for (int j = 0; j < alpha.m2(); ++j) {
                const Rational gap = alpha.at(s, i, j) - alpha.at(i, s, j);
                if (gap != 0) return {i, s, j, gap};
            }
        }
    }
    fail(ErrorKind::NoNoncommutingPair, "no pair of horizontal fields has a nonzero bracket");
}

/// P1 = b x_s; P3 template c1 x_i^3 + c2 x_i^2 x_s + c3 x_i x_s^2 + c4 x_s^3
/// + c5 x_i (y_j - sum_{k != i,s} (alpha[i][k][j] x_i + alpha[s][k][j] x_s) x_k).
inline Ansatz build_ansatz(const CarnotGroup& g, const PairChoice& pair, const Rational& b) {
    if (b == 0) fail(ErrorKind::ZeroB, "b must be nonzero");
    const int n = g.n();
    const Step2Alpha alpha = extract_alpha(g);
    const Polynomial xi = Polynomial::variable(n, pair.i);
    const Polynomial xs = Polynomial::variable(n, pair.s);
    const Polynomial y = Polynomial::variable(n, g.weights.coordinate(2, pair.j));

    Ansatz a;
    a.p1 = b * xs;
    a.basis[0] = xi * xi * xi;
    a.basis[1] = xi * xi * xs;
    a.basis[2] = xi * xs * xs;
    a.basis[3] = xs * xs * xs;
    Polynomial correction(n);
    for (int k = 0; k < g.m1(); ++k) {
        if (k == pair.i || k == pair.s) continue;
        const Polynomial xk = Polynomial::variable(n, k);
        correction += (alpha.at(pair.i, k, pair.j) * xi + alpha.at(pair.s, k, pair.j) * xs) * xk;
    }
    a.basis[4] = xi * (y - correction);
    return a;
}

/// Rows: x_i and x_s coefficients of Delta_G P3 (= 0), then the x_i x_s, x_i^2 and
/// x_s^2 coefficients of <grad P1, grad P3> (= 0, p, q).
inline LinearSystem assemble_system(const CarnotGroup& g, const PairChoice& pair, const Rational& p,
                                    const Rational& q, const Ansatz& ansatz) {
    const int n = g.n();
    auto monomial = [n](std::initializer_list<int> vars) {
        Monomial beta(n, 0u);
        for (int v : vars) ++beta[v];
        return beta;
    };
    const std::array<Monomial, 2> laplace_rows = {monomial({pair.i}), monomial({pair.s})};
    const std::array<Monomial, 3> inner_rows = {monomial({pair.i, pair.s}), monomial({pair.i, pair.i}),
                                                monomial({pair.s, pair.s})};

    LinearSystem sys;
    sys.matrix.assign(5, RationalVector(5, 0));
    sys.rhs = {0, 0, 0, p, q};
    const HorizontalSection grad_p1 = horizontal_gradient(g, ansatz.p1);
    for (int k = 0; k < 5; ++k) {
        const Polynomial lap = sublaplacian(g, ansatz.basis[k]);
        const Polynomial inner = horizontal_inner(grad_p1, horizontal_gradient(g, ansatz.basis[k]));
        for (int r = 0; r < 2; ++r) sys.matrix[r][k] = lap.coefficient(laplace_rows[r]);
        for (int r = 0; r < 3; ++r) sys.matrix[2 + r][k] = inner.coefficient(inner_rows[r]);
    }
    return sys;
}

/// Printed closed form of the solution; cross-check for solve_exact only. Exact when
/// the x_i coefficient of Delta_G P3 picks up no diagonal alpha from other fields.
inline RationalVector closed_form_coefficients(const PairAlpha& a, const Rational& b, const Rational& p,
                                               const Rational& q) {
    if (b == 0) fail(ErrorKind::ZeroB, "b must be nonzero");
    if (a.gap() == 0) fail(ErrorKind::SingularSystem, "alpha gap is zero");
    const Rational d = a.x2_in_X1 - a.x1_in_X2;  // = -gap
    return {
        a.x1_in_X1 * (p + q) / (2 * b * d),
        (a.x1_in_X2 * q + a.x2_in_X1 * p) / (b * d),
        a.x2_in_X2 * (p + q) / (2 * b * d),
        q / (3 * b),
        (p + q) / (b * a.gap()),
    };
}

/// Two-dimensional first layer with X1 = d1 + (a11 x1 + a21 x2) d_y and
/// X2 = d2 + (a12 x1 + a22 x2) d_y; alpha need not come from a skew form.
inline CarnotGroup synthetic_pair_group(const PairAlpha& a) {
    const int n = 3;
    auto v = [](int j) { return Polynomial::variable(n, j); };
    CarnotGroup g;
    g.name = "synthetic";
    g.weights = StratifiedWeights({2, 1});
    VectorField x1{0, {}};
    VectorField x2{1, {}};
    Polynomial c1 = a.x1_in_X1 * v(0) + a.x2_in_X1 * v(1);
    Polynomial c2 = a.x1_in_X2 * v(0) + a.x2_in_X2 * v(1);
    if (!c1.is_zero()) x1.coeffs.emplace(2, std::move(c1));
    if (!c2.is_zero()) x2.coeffs.emplace(2, std::move(c2));
    g.fields = {std::move(x1), std::move(x2)};
    return g;
}

/// The assembled 5x5 matrix for an explicit alpha, with the pair fixed to (1, 2, y).
inline LinearSystem assemble_for_alpha(const PairAlpha& a, const Rational& b, const Rational& p = 0,
                                       const Rational& q = 1) {
    const CarnotGroup g = synthetic_pair_group(a);
    const PairChoice pair{0, 1, 0, a.gap()};
    return assemble_system(g, pair, p, q, build_ansatz(g, pair, b));
}

inline bool admissible_params(const Rational& b, const Rational& p, const Rational& q) {
    return b != 0 && p >= 0 && q >= 0 && (p != 0 || q != 0);
}

/// select_pair -> build_ansatz -> assemble_system -> solve_exact -> verification.
/// Throws CertificateFailure rather than returning an unverified result.
inline CounterexampleResult construct(const CarnotGroup& g, const Rational& b, const Rational& p,
                                      const Rational& q) {
    if (!admissible_params(b, p, q)) {
        fail(ErrorKind::InvalidParams, "need b != 0, p >= 0, q >= 0 and (p, q) != (0, 0)");
    }
    CounterexampleResult r;
    r.b = b;
    r.p = p;
    r.q = q;
    r.pair = select_pair(g);
    const Ansatz ansatz = build_ansatz(g, r.pair, b);
    r.system = assemble_system(g, r.pair, p, q, ansatz);
    r.coefficients = solve_exact(r.system.matrix, r.system.rhs);
    r.p1 = ansatz.p1;
    r.p3 = ansatz.instantiate(r.coefficients);
    r.u = r.p1 - r.p3;

    const HarmonicityResult harmonic = is_harmonic(g, r.u);
    r.certificate.harmonic = harmonic.harmonic;
    r.certificate.inner_product = horizontal_inner(horizontal_gradient(g, r.p1), horizontal_gradient(g, r.p3));
    const int n = g.n();
    const Polynomial xi = Polynomial::variable(n, r.pair.i);
    const Polynomial xs = Polynomial::variable(n, r.pair.s);
    const Polynomial expected = p * (xi * xi) + q * (xs * xs);
    r.certificate.inner_matches_pq = r.certificate.inner_product == expected;

    if (!harmonic.harmonic) {
        fail(ErrorKind::CertificateFailure,
             "Delta_G u != 0, residual " + print_poly(harmonic.residual, g.weights));
    }
    if (!r.certificate.inner_matches_pq) {
        fail(ErrorKind::CertificateFailure,
             "inner product residual " + print_poly(r.certificate.inner_product - expected, g.weights));
    }
    return r;
}

/// u(P^{-1}) == -u(P) as a polynomial identity.
inline bool intrinsic_odd_check(const CarnotGroup& g, const Polynomial& p) {
    return group_inverse_apply(g, p) == -p;
}

}  // namespace carnot
