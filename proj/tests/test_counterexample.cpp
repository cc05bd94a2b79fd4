#include <gtest/gtest.h>

#include "support.hpp"

using namespace carnot;

namespace {

Polynomial P(const CarnotGroup& g, const std::string& text) { return parse_poly(text, g.weights); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::InvalidInput;
}

RationalVector vec(std::initializer_list<Rational> v) { return RationalVector(v); }

/// Cofactor expansion, independent of the elimination code.
Rational cofactor_det(const RationalMatrix& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Rational sum = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c] == 0) continue;
        RationalMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            RationalVector row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(a[r][k]);
            minor.push_back(row);
        }
        const Rational term = a[0][c] * cofactor_det(minor);
        sum += (c % 2 == 0) ? term : -term;
    }
    return sum;
}

}  // namespace

TEST(ExactLinalg, SolveAndDeterminant) {
    const RationalMatrix a = {{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    EXPECT_EQ(determinant(a), cofactor_det(a));
    const RationalVector x = solve_exact(a, vec({1, 2, 3}));
    for (int r = 0; r < 3; ++r) {
        Rational s = 0;
        for (int c = 0; c < 3; ++c) s += a[r][c] * x[c];
        EXPECT_EQ(s, r + 1);
    }
    const RationalMatrix sing = {{1, 2}, {2, 4}};
    EXPECT_EQ(determinant(sing), 0);
    EXPECT_EQ(rank(sing), 1u);
    EXPECT_EQ(kind_of([&] { solve_exact(sing, vec({1, 1})); }), ErrorKind::SingularSystem);
}

TEST(ExactLinalg, RandomDeterminantsMatchCofactors) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 50; ++t) {
        RationalMatrix a(5, RationalVector(5));
        for (auto& row : a)
            for (auto& e : row) e = fixtures::random_rational(rng);
        EXPECT_EQ(determinant(a), cofactor_det(a));
    }
}

TEST(SelectPair, Examples) {
    const PairChoice e = select_pair(make_engel());
    EXPECT_EQ(e, (PairChoice{0, 1, 0, 1}));
    const PairChoice h = select_pair(make_heisenberg(1));
    EXPECT_EQ(h, (PairChoice{0, 1, 0, 1}));
    EXPECT_EQ(kind_of([] { select_pair(make_euclidean(3)); }), ErrorKind::NoNoncommutingPair);
}

TEST(SelectPair, LexicographicOnLaterPairs) {
    // X1 commutes with everything; the first noncommuting pair is (X2, X3).
    const CarnotGroup g = make_step2({{{0, 0, 0}, {0, 0, -1}, {0, 1, 0}}});
    const PairChoice p = select_pair(g);
    EXPECT_EQ(p.i, 1);
    EXPECT_EQ(p.s, 2);
    EXPECT_EQ(p.alpha_gap, 1);
}

TEST(BuildAnsatz, Engel) {
    const CarnotGroup g = make_engel();
    const Ansatz a = build_ansatz(g, select_pair(g), 1);
    EXPECT_EQ(a.p1, P(g, "x2"));
    EXPECT_EQ(a.basis[0], P(g, "x1^3"));
    EXPECT_EQ(a.basis[1], P(g, "x1^2*x2"));
    EXPECT_EQ(a.basis[2], P(g, "x1*x2^2"));
    EXPECT_EQ(a.basis[3], P(g, "x2^3"));
    EXPECT_EQ(a.basis[4], P(g, "x1*y"));
    EXPECT_EQ(kind_of([&] { build_ansatz(g, select_pair(g), 0); }), ErrorKind::ZeroB);
}

TEST(BuildAnsatz, CorrectionForThirdField) {
    // m1 = 3, only X1 and X3 interact: alpha[3][1] = 1/2, alpha[1][3] = -1/2.
    const CarnotGroup g = make_step2({{{0, 0, -1}, {0, 0, 0}, {1, 0, 0}}});
    const PairChoice pair = select_pair(g);
    EXPECT_EQ(pair.i, 0);
    EXPECT_EQ(pair.s, 2);
    // Relabel so that X3 is outside the pair: use (X1, X2) on a group where all three interact.
    const CarnotGroup h = make_step2({{{0, -1, -1}, {1, 0, 0}, {1, 0, 0}}});
    const PairChoice hp = select_pair(h);
    ASSERT_EQ(hp.i, 0);
    ASSERT_EQ(hp.s, 1);
    const Ansatz a = build_ansatz(h, hp, 1);
    // Correction x1 * (alpha[1][3] x1 + alpha[2][3] x2) x3 with alpha[1][3] = -1/2, alpha[2][3] = 0.
    EXPECT_EQ(a.basis[4], P(h, "x1*y + 1/2*x1^2*x3"));
    const CounterexampleResult r = construct(h, 1, 0, Rational(1, 2));
    EXPECT_EQ(r.p3.coefficient({2, 0, 1, 0}), Rational(1, 2) * r.coefficients[4]);
}

TEST(BuildAnsatz, HalfWeightCorrectionLeavesResidual) {
    const CarnotGroup h = make_step2({{{0, -1, -1}, {1, 0, 0}, {1, 0, 0}}});
    const PairChoice pair = select_pair(h);
    Ansatz a = build_ansatz(h, pair, 1);
    a.basis[4] = P(h, "x1*y + 1/4*x1^2*x3");
    const LinearSystem sys = assemble_system(h, pair, 0, Rational(1, 2), a);
    const Polynomial u = a.p1 - a.instantiate(solve_exact(sys.matrix, sys.rhs));
    EXPECT_FALSE(is_harmonic(h, u).harmonic);
}

TEST(AssembleSystem, EngelMatrix) {
    const CarnotGroup g = make_engel();
    const PairChoice pair = select_pair(g);
    const LinearSystem s = assemble_system(g, pair, 0, Rational(1, 2), build_ansatz(g, pair, 1));
    const RationalMatrix expected = {
        {6, 0, 2, 0, 0},
        {0, 2, 0, 6, 0},
        {0, 0, 2, 0, 0},
        {0, 1, 0, 0, 1},
        {0, 0, 0, 3, 0},
    };
    EXPECT_EQ(s.matrix, expected);
    EXPECT_EQ(s.rhs, vec({0, 0, 0, 0, Rational(1, 2)}));
}

TEST(Solve, EngelAndHeisenberg) {
    const CounterexampleResult e = construct(make_engel(), 1, 0, Rational(1, 2));
    EXPECT_EQ(e.coefficients, vec({0, Rational(-1, 2), 0, Rational(1, 6), Rational(1, 2)}));
    const CarnotGroup h = make_heisenberg(1);
    const CounterexampleResult r = construct(h, 1, 0, Rational(1, 2));
    EXPECT_EQ(r.coefficients, vec({0, Rational(-1, 4), 0, Rational(1, 6), Rational(1, 2)}));
    EXPECT_EQ(r.u, P(h, "x2 + 1/4*x1^2*x2 - 1/6*x2^3 - 1/2*x1*y"));
    EXPECT_EQ(r.certificate.inner_product, P(h, "1/2*x2^2"));
}

TEST(Construct, EngelCertificate) {
    const CarnotGroup g = make_engel();
    const CounterexampleResult r = construct(g, 1, 0, Rational(1, 2));
    EXPECT_EQ(r.u, P(g, "x2 + 1/2*x1^2*x2 - 1/6*x2^3 - 1/2*x1*y"));
    EXPECT_EQ(r.p3, P(g, "-1/2*x1^2*x2 + 1/6*x2^3 + 1/2*x1*y"));
    EXPECT_TRUE(r.certificate.harmonic);
    EXPECT_TRUE(r.certificate.inner_matches_pq);
    EXPECT_EQ(r.certificate.inner_product, P(g, "1/2*x2^2"));
}

TEST(Construct, ParameterDomain) {
    const CarnotGroup g = make_heisenberg(1);
    EXPECT_EQ(kind_of([&] { construct(g, 1, 0, 0); }), ErrorKind::InvalidParams);
    EXPECT_EQ(kind_of([&] { construct(g, 0, 1, 1); }), ErrorKind::InvalidParams);
    EXPECT_EQ(kind_of([&] { construct(g, 1, -1, 1); }), ErrorKind::InvalidParams);
    EXPECT_EQ(kind_of([&] { construct(make_euclidean(3), 1, 0, 1); }), ErrorKind::NoNoncommutingPair);
}

TEST(Construct, RandomSkewGroups) {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 60; ++t) {
        const int m1 = 2 + static_cast<int>(rng() % 3);
        const int m2 = 1 + static_cast<int>(rng() % std::min(3, m1 * (m1 - 1) / 2));
        const CarnotGroup g = fixtures::random_step2(rng, m1, m2);
        const Rational b = fixtures::random_nonzero(rng);
        const Rational p = abs(fixtures::random_rational(rng));
        const Rational q = p == 0 ? abs(fixtures::random_nonzero(rng)) : abs(fixtures::random_rational(rng));
        const CounterexampleResult r = construct(g, b, p, q);
        EXPECT_TRUE(r.certificate.harmonic && r.certificate.inner_matches_pq);
        EXPECT_EQ(s_reflect(g, r.u), -r.u);
        const PairAlpha a = pair_alpha(extract_alpha(g), r.pair);
        EXPECT_EQ(closed_form_coefficients(a, b, p, q), r.coefficients);
    }
}

TEST(Construct, NonSkewPresentations) {
    // Polarized Heisenberg is not skew; the certificate still holds.
    const CarnotGroup pol = make_heisenberg(1, HeisenbergPresentation::Polarized);
    const CounterexampleResult r = construct(pol, 1, 0, Rational(1, 2));
    EXPECT_TRUE(r.certificate.harmonic);
    // Diagonal alpha on a third field enters the x_i row and is absorbed by c1.
    CarnotGroup g = make_step2({{{0, -1, 0}, {1, 0, 0}, {0, 0, 0}}});
    g.fields[2].coeffs.emplace(3, P(g, "x3"));
    const CounterexampleResult s = construct(g, 1, 1, 1);
    EXPECT_TRUE(s.certificate.harmonic && s.certificate.inner_matches_pq);
    const PairAlpha a = pair_alpha(extract_alpha(g), s.pair);
    EXPECT_NE(closed_form_coefficients(a, 1, 1, 1), s.coefficients);
}

TEST(Determinant, CubicInB) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 40; ++t) {
        const PairAlpha a{fixtures::random_rational(rng), fixtures::random_rational(rng), fixtures::random_rational(rng),
                          fixtures::random_rational(rng)};
        const Rational b = fixtures::random_nonzero(rng);
        const RationalMatrix m = assemble_for_alpha(a, b).matrix;
        EXPECT_EQ(determinant(m), cofactor_det(m));
        EXPECT_EQ(determinant(m), Rational(-72) * b * b * b * a.gap());
    }
}

TEST(Determinant, SingularExactlyWhenGapVanishes) {
    const PairAlpha a{1, 2, 2, 3};
    EXPECT_EQ(determinant(assemble_for_alpha(a, 3).matrix), 0);
    EXPECT_EQ(kind_of([&] { solve_exact(assemble_for_alpha(a, 3).matrix, vec({0, 0, 0, 0, 1})); }),
              ErrorKind::SingularSystem);
    EXPECT_EQ(kind_of([&] { closed_form_coefficients(a, 1, 0, 1); }), ErrorKind::SingularSystem);
    EXPECT_EQ(determinant(assemble_for_alpha({0, 0, 1, 0}, 1).matrix), -72);
}

TEST(ClosedForm, Engel) {
    EXPECT_EQ(closed_form_coefficients({0, 0, 1, 0}, 1, 0, Rational(1, 2)),
              vec({0, Rational(-1, 2), 0, Rational(1, 6), Rational(1, 2)}));
}

TEST(IntrinsicOdd, Engel) {
    const CarnotGroup g = make_engel();
    const Polynomial p5 = P(g, "x1*y^2 - 2*y*x1^2*x2 + 2*t*x1*x2 + 1/2*x1^3*x2^2 + x1^2*x2^3");
    EXPECT_TRUE(intrinsic_odd_check(g, p5));
    EXPECT_TRUE(intrinsic_odd_check(g, P(g, "x2")));
    EXPECT_FALSE(intrinsic_odd_check(g, P(g, "y")));
    EXPECT_EQ(p5.g_degree(g.weights), 5);
    const Polynomial inner = horizontal_inner(horizontal_gradient(g, P(g, "x2")), horizontal_gradient(g, p5));
    EXPECT_EQ(inner, P(g, "2*x1*t + 3*x1^2*x2^2"));
    CarnotGroup lawless = g;
    lawless.law.reset();
    EXPECT_EQ(kind_of([&] { intrinsic_odd_check(lawless, p5); }), ErrorKind::NoGroupLaw);
}

TEST(SReflect, Examples) {
    const CarnotGroup h = make_heisenberg(1);
    const CounterexampleResult r = construct(h, 2, 1, 3);
    EXPECT_EQ(s_reflect(h, r.u), -r.u);
    EXPECT_EQ(s_reflect(h, P(h, "y")), P(h, "y"));
    EXPECT_EQ(s_reflect(h, P(h, "x1*x2")), P(h, "x1*x2"));
}

TEST(Certificate, JsonLayout) {
    const CarnotGroup g = make_engel();
    const nlohmann::ordered_json doc = certificate_to_json(g, construct(g, 1, 0, Rational(1, 2)));
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"group", "b", "p", "q", "pair", "coefficients", "P1", "P3", "u", "system",
                                              "certificate"}));
    EXPECT_EQ(doc["coefficients"]["c2"], "-1/2");
    EXPECT_EQ(doc["u"], "x2 - 1/2*x1*y - 1/6*x2^3 + 1/2*x1^2*x2");
    EXPECT_EQ(doc["certificate"]["harmonic"], true);
    EXPECT_EQ(parse_poly(doc["u"].get<std::string>(), g.weights), P(g, "x2 + 1/2*x1^2*x2 - 1/6*x2^3 - 1/2*x1*y"));
}
