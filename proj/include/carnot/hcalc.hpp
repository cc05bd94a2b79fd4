#pragma once

#include <vector>

#include "carnot/group.hpp"

namespace carnot {

/// Coordinates (phi_1, ..., phi_{m1}) with respect to X_1, ..., X_{m1}.
struct HorizontalSection {
    std::vector<Polynomial> components;

    bool operator==(const HorizontalSection&) const = default;
};

namespace detail {

inline void check_space(const CarnotGroup& g, const Polynomial& p) {
    if (p.n() != g.n()) fail(ErrorKind::DimensionMismatch, "polynomial does not live on " + g.name);
}

inline void check_section(const CarnotGroup& g, const HorizontalSection& s) {
    if (static_cast<int>(s.components.size()) != g.m1()) {
        fail(ErrorKind::DimensionMismatch, "section needs one component per horizontal field");
    }
    for (const auto& c : s.components) check_space(g, c);
}

}  // namespace detail

/// X_j p = d_j p + sum_k p_{j,k} d_k p, exact. j is 0-based.
inline Polynomial apply_field(const CarnotGroup& g, int j, const Polynomial& p) {
    if (j < 0 || j >= g.m1() || j >= static_cast<int>(g.fields.size())) {
        fail(ErrorKind::IndexOutOfRange, "field index out of range");
    }
    detail::check_space(g, p);
    const VectorField& f = g.fields[j];
    Polynomial r = p.derivative(f.base_index);
    for (const auto& [k, coeff] : f.coeffs) {
        const Polynomial dk = p.derivative(k);
        if (!dk.is_zero()) r += coeff * dk;
    }
    return r;
}

inline HorizontalSection horizontal_gradient(const CarnotGroup& g, const Polynomial& p) {
    detail::check_space(g, p);
    HorizontalSection s;
    for (int j = 0; j < g.m1(); ++j) s.components.push_back(apply_field(g, j, p));
    return s;
}

inline Polynomial horizontal_divergence(const CarnotGroup& g, const HorizontalSection& phi) {
    detail::check_section(g, phi);
    Polynomial r(g.n());
    for (int j = 0; j < g.m1(); ++j) r += apply_field(g, j, phi.components[j]);
    return r;
}

/// Delta_G p = sum_j X_j (X_j p).
inline Polynomial sublaplacian(const CarnotGroup& g, const Polynomial& p) {
    detail::check_space(g, p);
    Polynomial r(g.n());
    for (int j = 0; j < g.m1(); ++j) r += apply_field(g, j, apply_field(g, j, p));
    return r;
}

struct HarmonicityResult {
    bool harmonic = false;
    Polynomial residual;  // Delta_G p; zero iff harmonic
};

inline HarmonicityResult is_harmonic(const CarnotGroup& g, const Polynomial& p) {
    Polynomial residual = sublaplacian(g, p);
    const bool harmonic = residual.is_zero();
    return {harmonic, std::move(residual)};
}

inline Polynomial horizontal_inner(const HorizontalSection& a, const HorizontalSection& b) {
    if (a.components.size() != b.components.size() || a.components.empty()) {
        fail(ErrorKind::DimensionMismatch, "sections have different component counts");
    }
    Polynomial r(a.components.front().n());
    for (std::size_t j = 0; j < a.components.size(); ++j) r += a.components[j] * b.components[j];
    return r;
}

/// Dilation property: grad_G(p o delta_l) == l * (grad_G p) o delta_l, exactly.
inline bool check_G1(const CarnotGroup& g, const Polynomial& p, const Rational& lambda) {
    if (lambda == 0) fail(ErrorKind::ZeroLambda, "dilation factor must be nonzero");
    const HorizontalSection lhs = horizontal_gradient(g, p.dilate(g.weights, lambda));
    const HorizontalSection grad = horizontal_gradient(g, p);
    for (int j = 0; j < g.m1(); ++j) {
        if (lhs.components[j] != lambda * grad.components[j].dilate(g.weights, lambda)) return false;
    }
    return true;
}

}  // namespace carnot
