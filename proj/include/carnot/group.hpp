#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carnot/exact_linalg.hpp"
#include "carnot/poly_text.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// Horizontal field X_j = d/dx_j + sum_k p_{j,k} d/dx_k with d_k > 1.
struct VectorField {
    int base_index = 0;                   // j, 0-based
    std::map<int, Polynomial> coeffs;     // k -> p_{j,k}
};

/// A first-order operator sum_k c_k d/dx_k, stored as one coefficient per coordinate.
using Derivation = std::vector<Polynomial>;

/// Polynomial group law: product in 2n variables (x, x'), inverse in n variables.
struct GroupLaw {
    std::vector<Polynomial> product;
    std::vector<Polynomial> inverse;
};

enum class Preset { Custom, Euclidean, HeisenbergCanonical, HeisenbergPolarized, Engel };

struct CarnotGroup {
    std::string name;
    StratifiedWeights weights;
    std::vector<VectorField> fields;
    std::optional<GroupLaw> law;
    std::optional<std::vector<RationalMatrix>> step2_data;
    Preset preset = Preset::Custom;
    int preset_n = 0;  // n of euclidean:<n> / heisenberg:<n>

    int n() const { return weights.n(); }
    int m1() const { return weights.m1(); }
    int step() const { return weights.step(); }
};

/// alpha[i][k][j]: coefficient of x_k d/dy_j in X_i (all 0-based, j within layer 2).
class Step2Alpha {
public:
    Step2Alpha() = default;
    Step2Alpha(int m1, int m2) : m1_(m1), m2_(m2), values_(static_cast<std::size_t>(m1 * m1 * m2)) {}

    int m1() const { return m1_; }
    int m2() const { return m2_; }
    bool empty() const { return values_.empty(); }

    Rational& at(int i, int k, int j) { return values_.at(index(i, k, j)); }
    const Rational& at(int i, int k, int j) const { return values_.at(index(i, k, j)); }

    bool operator==(const Step2Alpha& o) const = default;

private:
    std::size_t index(int i, int k, int j) const {
        if (i < 0 || i >= m1_ || k < 0 || k >= m1_ || j < 0 || j >= m2_) {
            fail(ErrorKind::IndexOutOfRange, "alpha index out of range");
        }
        return static_cast<std::size_t>((i * m1_ + k) * m2_ + j);
    }

    int m1_ = 0;
    int m2_ = 0;
    std::vector<Rational> values_;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }
    const ValidationCheck* find(std::string_view name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Derivations

/// Full coefficient vector of X_i, including the leading 1 on d/dx_i.
inline Derivation field_derivation(const CarnotGroup& g, int i) {
    if (i < 0 || i >= static_cast<int>(g.fields.size())) fail(ErrorKind::IndexOutOfRange, "field index out of range");
    const int n = g.n();
    Derivation d(n, Polynomial(n));
    const VectorField& f = g.fields[i];
    d[f.base_index] = Polynomial::constant(n, 1);
    for (const auto& [k, p] : f.coeffs) d[k] += p;
    return d;
}

inline Polynomial apply_derivation(const Derivation& d, const Polynomial& p) {
    if (static_cast<int>(d.size()) != p.n()) fail(ErrorKind::DimensionMismatch, "derivation size differs from n");
    Polynomial r(p.n());
    for (int k = 0; k < p.n(); ++k) {
        if (d[k].is_zero()) continue;
        const Polynomial dk = p.derivative(k);
        if (!dk.is_zero()) r += d[k] * dk;
    }
    return r;
}

/// [D, E] = D E - E D as a derivation.
inline Derivation bracket(const Derivation& d, const Derivation& e) {
    if (d.size() != e.size()) fail(ErrorKind::DimensionMismatch, "derivations of different size");
    Derivation r;
    r.reserve(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) r.push_back(apply_derivation(d, e[k]) - apply_derivation(e, d[k]));
    return r;
}

inline bool is_zero(const Derivation& d) {
    for (const auto& c : d) {
        if (!c.is_zero()) return false;
    }
    return true;
}

/// Coefficient polynomials of [X_i, X_l] (0-based field indices).
inline Derivation commutator(const CarnotGroup& g, int i, int l) {
    return bracket(field_derivation(g, i), field_derivation(g, l));
}

// ---------------------------------------------------------------------------
// Group law helpers

inline const GroupLaw& require_law(const CarnotGroup& g) {
    if (!g.law) fail(ErrorKind::NoGroupLaw, g.name + " has no group law");
    return *g.law;
}

/// p o (inverse map).
inline Polynomial group_inverse_apply(const CarnotGroup& g, const Polynomial& p) {
    return p.substitute(require_law(g).inverse);
}

/// Componentwise composition law(a, b) for coordinate maps a, b sharing a variable count.
inline std::vector<Polynomial> compose_law(const GroupLaw& law, const std::vector<Polynomial>& a,
                                           const std::vector<Polynomial>& b) {
    std::vector<Polynomial> images = a;
    images.insert(images.end(), b.begin(), b.end());
    std::vector<Polynomial> out;
    out.reserve(law.product.size());
    for (const auto& comp : law.product) out.push_back(comp.substitute(images));
    return out;
}

/// s_reflect: x_i -> -x_i on the first layer, other coordinates fixed.
inline Polynomial s_reflect(const CarnotGroup& g, const Polynomial& p) {
    const int n = g.n();
    std::vector<Polynomial> images;
    for (int j = 0; j < n; ++j) {
        Polynomial v = Polynomial::variable(n, j);
        images.push_back(g.weights.degree(j) == 1 ? -v : v);
    }
    return p.substitute(images);
}

// ---------------------------------------------------------------------------
// Construction

namespace detail {

inline std::vector<Polynomial> coordinates(int n, int total, int offset) { return embedding(n, total, offset); }

inline GroupLaw abelian_law(int n) {
    GroupLaw law;
    for (int j = 0; j < n; ++j) {
        law.product.push_back(Polynomial::variable(2 * n, j) + Polynomial::variable(2 * n, n + j));
        law.inverse.push_back(-Polynomial::variable(n, j));
    }
    return law;
}

inline bool is_skew(const RationalMatrix& b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (b[i][k] != -b[k][i]) return false;
        }
    }
    return true;
}

inline std::size_t matrix_family_rank(const std::vector<RationalMatrix>& family) {
    RationalMatrix flat;
    for (const auto& b : family) {
        RationalVector row;
        for (const auto& r : b) row.insert(row.end(), r.begin(), r.end());
        flat.push_back(std::move(row));
    }
    return rank(flat);
}

}  // namespace detail

inline CarnotGroup make_euclidean(int n) {
    if (n < 3) fail(ErrorKind::BadDimension, "euclidean preset needs n >= 3, got " + std::to_string(n));
    CarnotGroup g;
    g.name = "euclidean:" + std::to_string(n);
    g.weights = StratifiedWeights({n});
    for (int i = 0; i < n; ++i) g.fields.push_back(VectorField{i, {}});
    g.law = detail::abelian_law(n);
    g.preset = Preset::Euclidean;
    g.preset_n = n;
    return g;
}

/// Canonical step-2 group: X_i = d_i + 1/2 sum_j (B^(j) x)_i d_{y_j},
/// law y_j + y'_j + 1/2 <B^(j) x, x'>.
inline CarnotGroup make_step2(const std::vector<RationalMatrix>& b) {
    if (b.empty()) fail(ErrorKind::BadDimension, "at least one matrix is required");
    const int m1 = static_cast<int>(b.front().size());
    const int m2 = static_cast<int>(b.size());
    if (m1 < 2) fail(ErrorKind::BadDimension, "first layer needs dimension >= 2");
    for (const auto& mat : b) {
        if (static_cast<int>(mat.size()) != m1) fail(ErrorKind::BadDimension, "matrices must be m1 x m1");
        for (const auto& row : mat) {
            if (static_cast<int>(row.size()) != m1) fail(ErrorKind::BadDimension, "matrices must be m1 x m1");
        }
        if (!detail::is_skew(mat)) fail(ErrorKind::NotSkew, "step-2 matrices must be skew-symmetric");
    }
    if (detail::matrix_family_rank(b) != b.size()) {
        fail(ErrorKind::DependentMatrices, "step-2 matrices must be linearly independent");
    }
    const int n = m1 + m2;
    CarnotGroup g;
    g.name = "step2";
    g.weights = StratifiedWeights({m1, m2});
    const Rational half(1, 2);
    for (int i = 0; i < m1; ++i) {
        VectorField f{i, {}};
        for (int j = 0; j < m2; ++j) {
            Polynomial c(n);
            for (int k = 0; k < m1; ++k) c += Polynomial::variable(n, k) * (half * b[j][i][k]);
            if (!c.is_zero()) f.coeffs.emplace(m1 + j, std::move(c));
        }
        g.fields.push_back(std::move(f));
    }
    GroupLaw law;
    for (int k = 0; k < m1; ++k) {
        law.product.push_back(Polynomial::variable(2 * n, k) + Polynomial::variable(2 * n, n + k));
        law.inverse.push_back(-Polynomial::variable(n, k));
    }
    for (int j = 0; j < m2; ++j) {
        Polynomial comp = Polynomial::variable(2 * n, m1 + j) + Polynomial::variable(2 * n, n + m1 + j);
        for (int i = 0; i < m1; ++i) {
            for (int k = 0; k < m1; ++k) {
                if (b[j][i][k] == 0) continue;
                comp += Polynomial::variable(2 * n, k) * Polynomial::variable(2 * n, n + i) * (half * b[j][i][k]);
            }
        }
        law.product.push_back(std::move(comp));
        law.inverse.push_back(-Polynomial::variable(n, m1 + j));
    }
    g.law = std::move(law);
    g.step2_data = b;
    return g;
}

enum class HeisenbergPresentation { Canonical, Polarized };

inline CarnotGroup make_heisenberg(int n, HeisenbergPresentation presentation = HeisenbergPresentation::Canonical) {
    if (n < 1) fail(ErrorKind::BadDimension, "heisenberg preset needs n >= 1");
    if (presentation == HeisenbergPresentation::Polarized) {
        if (n != 1) fail(ErrorKind::Unsupported, "polarized presentation is only provided for n = 1");
        const int dim = 3;
        CarnotGroup g;
        g.name = "heisenberg:1:polarized";
        g.weights = StratifiedWeights({2, 1});
        g.fields.push_back(VectorField{0, {}});
        g.fields.push_back(VectorField{1, {{2, Polynomial::variable(dim, 0)}}});
        auto v2 = [](int j) { return Polynomial::variable(2 * dim, j); };
        auto v1 = [](int j) { return Polynomial::variable(dim, j); };
        GroupLaw law;
        law.product = {v2(0) + v2(3), v2(1) + v2(4), v2(2) + v2(5) + v2(0) * v2(4)};
        law.inverse = {-v1(0), -v1(1), v1(0) * v1(1) - v1(2)};
        g.law = std::move(law);
        g.preset = Preset::HeisenbergPolarized;
        g.preset_n = 1;
        return g;
    }
    RationalMatrix b(2 * n, RationalVector(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        b[i][n + i] = -1;
        b[n + i][i] = 1;
    }
    CarnotGroup g = make_step2({b});
    g.name = "heisenberg:" + std::to_string(n);
    g.preset = Preset::HeisenbergCanonical;
    g.preset_n = n;
    return g;
}

/// Engel group on (x1, x2, y, t): X1 = d_x1, X2 = d_x2 + x1 d_y + 1/2 x1^2 d_t.
inline CarnotGroup make_engel() {
    const int n = 4;
    auto v = [](int j) { return Polynomial::variable(n, j); };
    auto w = [](int j) { return Polynomial::variable(2 * n, j); };
    const Rational half(1, 2);
    CarnotGroup g;
    g.name = "engel";
    g.weights = StratifiedWeights({2, 1, 1});
    g.fields.push_back(VectorField{0, {}});
    g.fields.push_back(VectorField{1, {{2, v(0)}, {3, half * (v(0) * v(0))}}});
    GroupLaw law;
    law.product = {
        w(0) + w(4),
        w(1) + w(5),
        w(2) + w(6) + w(0) * w(5),
        w(3) + w(7) + w(0) * w(6) + half * (w(0) * w(0) * w(5)),
    };
    // Solved from P o P^{-1} = e with the product above.
    law.inverse = {
        -v(0),
        -v(1),
        v(0) * v(1) - v(2),
        v(0) * v(2) - half * (v(0) * v(0) * v(1)) - v(3),
    };
    g.law = std::move(law);
    g.preset = Preset::Engel;
    return g;
}

/// Resolves euclidean:<n>, heisenberg:<n>[:canonical|:polarized] and engel.
inline std::optional<CarnotGroup> preset_group(std::string_view ref) {
    auto parse_int = [](std::string_view s) -> std::optional<int> {
        if (s.empty() || s.size() > 6) return std::nullopt;
        int v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (ref == "engel") return make_engel();
    if (ref.starts_with("euclidean:")) {
        if (auto n = parse_int(ref.substr(10))) return make_euclidean(*n);
        return std::nullopt;
    }
    if (ref.starts_with("heisenberg:")) {
        std::string_view rest = ref.substr(11);
        auto presentation = HeisenbergPresentation::Canonical;
        if (auto colon = rest.find(':'); colon != std::string_view::npos) {
            const std::string_view mode = rest.substr(colon + 1);
            if (mode == "polarized") presentation = HeisenbergPresentation::Polarized;
            else if (mode != "canonical") return std::nullopt;
            rest = rest.substr(0, colon);
        }
        if (auto n = parse_int(rest)) return make_heisenberg(*n, presentation);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polarized <-> canonical Heisenberg coordinates

/// phi(x1, x2, y) = (x1, x2, y - 1/2 x1 x2) and its inverse, as substitution images.
struct CoordinateChange {
    std::vector<Polynomial> forward;   // canonical coordinates written in polarized ones
    std::vector<Polynomial> backward;  // polarized coordinates written in canonical ones
};

inline CoordinateChange heisenberg_polarized_to_canonical() {
    auto v = [](int j) { return Polynomial::variable(3, j); };
    const Rational half(1, 2);
    return {{v(0), v(1), v(2) - half * (v(0) * v(1))}, {v(0), v(1), v(2) + half * (v(0) * v(1))}};
}

/// True iff phi(P o_pol M) == phi(P) o_can phi(M) as polynomial identities.
inline bool coordinate_change_is_homomorphism() {
    const CarnotGroup pol = make_heisenberg(1, HeisenbergPresentation::Polarized);
    const CarnotGroup can = make_heisenberg(1);
    const CoordinateChange phi = heisenberg_polarized_to_canonical();
    const auto p = detail::coordinates(3, 6, 0);
    const auto m = detail::coordinates(3, 6, 3);
    auto apply_phi = [&](const std::vector<Polynomial>& pt) {
        std::vector<Polynomial> out;
        for (const auto& c : phi.forward) out.push_back(c.substitute(pt));
        return out;
    };
    const auto lhs = apply_phi(compose_law(*pol.law, p, m));
    const auto rhs = compose_law(*can.law, apply_phi(p), apply_phi(m));
    return lhs == rhs;
}

/// Maps a polarized Heisenberg group and a polynomial on it to canonical coordinates;
/// other groups pass through unchanged.
inline std::pair<CarnotGroup, Polynomial> to_canonical_presentation(const CarnotGroup& g, const Polynomial& u) {
    if (g.preset != Preset::HeisenbergPolarized) return {g, u};
    return {make_heisenberg(1), u.substitute(heisenberg_polarized_to_canonical().backward)};
}

// ---------------------------------------------------------------------------
// Structure readouts

/// Reads alpha[i][k][j] off the second-layer coefficients of the horizontal fields.
inline Step2Alpha extract_alpha(const CarnotGroup& g) {
    const StratifiedWeights& w = g.weights;
    if (w.step() < 2) return {};
    const int m1 = w.m1();
    const int m2 = w.layer_dim(2);
    const int n = w.n();
    Step2Alpha alpha(m1, m2);
    for (int i = 0; i < m1; ++i) {
        const VectorField& f = g.fields.at(i);
        for (const auto& [k, p] : f.coeffs) {
            if (w.degree(k) != 2) continue;
            const int j = w.index_in_layer(k);
            for (const auto& [beta, c] : p.terms()) {
                int var = -1;
                for (int v = 0; v < n; ++v) {
                    if (beta[v] == 0) continue;
                    if (beta[v] != 1 || var >= 0 || w.degree(v) != 1) {
                        fail(ErrorKind::MalformedCoefficients, "second-layer coefficient is not linear in x");
                    }
                    var = v;
                }
                if (var < 0) fail(ErrorKind::MalformedCoefficients, "second-layer coefficient has a constant term");
                alpha.at(i, var, j) = c;
            }
        }
    }
    return alpha;
}

/// Checks the structural invariants; failures are report entries, never exceptions.
inline ValidationReport validate_group(const CarnotGroup& g) {
    ValidationReport report;
    const StratifiedWeights& w = g.weights;
    const int n = w.n();

    {
        bool ok = static_cast<int>(g.fields.size()) == w.m1();
        std::string detail;
        for (int i = 0; ok && i < static_cast<int>(g.fields.size()); ++i) {
            if (g.fields[i].base_index != i) {
                ok = false;
                detail = "field " + std::to_string(i + 1) + " has base index " + std::to_string(g.fields[i].base_index + 1);
            }
        }
        if (!ok && detail.empty()) detail = "expected " + std::to_string(w.m1()) + " horizontal fields";
        report.checks.push_back({"field count", ok, detail});
    }

    {
        bool ok = true;
        std::string detail;
        for (const auto& f : g.fields) {
            for (const auto& [k, p] : f.coeffs) {
                std::string where = "p_{" + std::to_string(f.base_index + 1) + "," + std::to_string(k + 1) + "}";
                if (k < 0 || k >= n || p.n() != n) {
                    ok = false;
                    detail = where + " refers to a missing coordinate";
                    continue;
                }
                const int dk = w.degree(k);
                if (dk <= 1) {
                    ok = false;
                    detail = where + " targets a first-layer coordinate";
                } else if (!p.is_g_homogeneous(w, dk - 1)) {
                    ok = false;
                    detail = where + " must be G-homogeneous of degree " + std::to_string(dk - 1);
                } else {
                    for (const auto& [beta, c] : p.terms()) {
                        for (int v = 0; v < n; ++v) {
                            if (beta[v] != 0 && w.degree(v) >= dk) {
                                ok = false;
                                detail = where + " uses a variable of weight >= " + std::to_string(dk);
                            }
                        }
                    }
                }
            }
        }
        report.checks.push_back({"coefficient homogeneity", ok, detail});
    }

    if (g.step2_data) {
        const auto& b = *g.step2_data;
        bool shape_ok = w.step() == 2 && static_cast<int>(b.size()) == w.layer_dim(2);
        for (const auto& mat : b) {
            shape_ok = shape_ok && static_cast<int>(mat.size()) == w.m1();
            for (const auto& row : mat) shape_ok = shape_ok && static_cast<int>(row.size()) == w.m1();
        }
        bool skew = shape_ok;
        for (const auto& mat : b) skew = skew && detail::is_skew(mat);
        report.checks.push_back({"skew-symmetry", skew, shape_ok ? "" : "matrix shapes do not match the strata"});
        const bool independent = shape_ok && detail::matrix_family_rank(b) == b.size();
        report.checks.push_back({"linear independence", independent, ""});
    }

    if (g.law) {
        const GroupLaw& law = *g.law;
        bool shape_ok = static_cast<int>(law.product.size()) == n && static_cast<int>(law.inverse.size()) == n;
        for (const auto& c : law.product) shape_ok = shape_ok && c.n() == 2 * n;
        for (const auto& c : law.inverse) shape_ok = shape_ok && c.n() == n;
        if (!shape_ok) {
            report.checks.push_back({"law shape", false, "law components have the wrong variable count"});
        } else {
            const auto x = detail::coordinates(n, n, 0);
            const std::vector<Polynomial> zero(n, Polynomial(n));
            const bool identity = compose_law(law, x, zero) == x && compose_law(law, zero, x) == x;
            report.checks.push_back({"law identity", identity, ""});

            const bool inverse = compose_law(law, x, law.inverse) == zero && compose_law(law, law.inverse, x) == zero;
            report.checks.push_back({"law inverse", inverse, ""});

            const auto p = detail::coordinates(n, 3 * n, 0);
            const auto m = detail::coordinates(n, 3 * n, n);
            const auto r = detail::coordinates(n, 3 * n, 2 * n);
            const bool assoc = compose_law(law, compose_law(law, p, m), r) == compose_law(law, p, compose_law(law, m, r));
            report.checks.push_back({"law associativity", assoc, ""});

            // X_i(P) = d/ds [P o (s e_i)] at s = 0 must reproduce the stored fields.
            bool consistent = static_cast<int>(g.fields.size()) == w.m1();
            std::vector<Polynomial> at_zero = detail::coordinates(n, n, 0);
            for (int j = 0; j < n; ++j) at_zero.push_back(Polynomial(n));
            for (int i = 0; consistent && i < w.m1(); ++i) {
                const Derivation d = field_derivation(g, i);
                for (int k = 0; k < n; ++k) {
                    const Polynomial from_law = law.product[k].derivative(n + i).substitute(at_zero);
                    if (from_law != d[k]) consistent = false;
                }
            }
            report.checks.push_back({"law/field consistency", consistent, ""});
        }
    }
    return report;
}

}  // namespace carnot
