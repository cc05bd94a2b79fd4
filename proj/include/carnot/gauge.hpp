#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/numeric_poly.hpp"

namespace carnot {

/// Homogeneous norm N with Gamma = C * N^(2-Q), and a box containing {N <= 1}.
struct GaugeSpec {
    CarnotGroup group;
    int Q = 0;
    std::function<double(const double*)> norm;
    double gamma_constant = 1.0;
    std::vector<double> half_width;
    std::optional<double> exponent_override;  // replaces 2 - Q; negative controls only
    std::vector<NumericPolynomial> product;   // numeric group law in 2n variables
    double inner_scale = 0.0;                 // delta_c(box) lies inside {N <= 1/2}

    int n() const { return group.n(); }
    double exponent() const { return exponent_override.value_or(2.0 - Q); }
    double gamma(const double* p) const { return gamma_constant * std::pow(norm(p), exponent()); }

    double box_volume() const {
        double v = 1.0;
        for (double h : half_width) v *= 2.0 * h;
        return v;
    }

    /// Half widths of delta_lambda(box).
    std::vector<double> dilated_box(double lambda) const {
        std::vector<double> h(half_width);
        for (int j = 0; j < n(); ++j) h[j] *= std::pow(lambda, group.weights.degree(j));
        return h;
    }

    void compose(const double* p, const double* q, double* out) const {
        std::vector<double> pq(p, p + n());
        pq.insert(pq.end(), q, q + n());
        for (int j = 0; j < n(); ++j) out[j] = product[j](pq.data());
    }

    void dilate(const double* p, double lambda, double* out) const {
        for (int j = 0; j < n(); ++j) out[j] = p[j] * std::pow(lambda, group.weights.degree(j));
    }
};

/// euclidean:<n>: N = |x|. heisenberg:<n> (canonical): N = (|x|^4 + 16 y^2)^(1/4).
inline GaugeSpec gauge_for(const CarnotGroup& g) {
    GaugeSpec spec;
    spec.group = g;
    spec.Q = g.weights.homogeneous_dimension();
    const int n = g.n();
    if (g.preset == Preset::Euclidean) {
        spec.norm = [n](const double* p) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += p[j] * p[j];
            return std::sqrt(s);
        };
        spec.half_width.assign(n, 1.0);
    } else if (g.preset == Preset::HeisenbergCanonical) {
        const int m1 = g.m1();
        spec.norm = [m1](const double* p) {
            double x2 = 0.0;
            for (int j = 0; j < m1; ++j) x2 += p[j] * p[j];
            return std::pow(x2 * x2 + 16.0 * p[m1] * p[m1], 0.25);
        };
        spec.half_width.assign(n, 1.0);
        spec.half_width[m1] = 0.25;
    } else if (g.preset == Preset::HeisenbergPolarized) {
        fail(ErrorKind::UnsupportedGroup,
             "polarized Heisenberg coordinates: map to the canonical presentation before numerical evaluation");
    } else if (g.preset == Preset::Engel) {
        fail(ErrorKind::UnsupportedGroup,
             "the fundamental solution of the Engel sub-Laplacian is not explicit, so the ACF functional cannot be evaluated");
    } else {
        fail(ErrorKind::UnsupportedGroup, "no closed-form fundamental solution is known for " + g.name);
    }
    // Both norms grow with each |coordinate|, so the box maximum sits at a corner.
    spec.inner_scale = 0.5 / spec.norm(spec.half_width.data());
    const GroupLaw& law = require_law(g);
    for (const auto& c : law.product) spec.product.emplace_back(c, g.weights);
    return spec;
}

}  // namespace carnot
