#pragma once

// Certificate files (JSON, keys in fixed order, rationals as exact strings):
//   group, b, p, q, pair {i, s, j, alpha_gap}, coefficients {c1..c5},
//   P1, P3, u, system {matrix, rhs}, certificate {harmonic, inner_product, inner_matches_pq}

#include <json.hpp>

#include "carnot/counterexample.hpp"

namespace carnot {

inline nlohmann::ordered_json certificate_to_json(const CarnotGroup& g, const CounterexampleResult& r) {
    const VariableNames names(g.weights);
    nlohmann::ordered_json doc;
    doc["group"] = g.name;
    doc["b"] = to_string(r.b);
    doc["p"] = to_string(r.p);
    doc["q"] = to_string(r.q);
    doc["pair"] = {{"i", r.pair.i + 1}, {"s", r.pair.s + 1}, {"j", r.pair.j + 1}, {"alpha_gap", to_string(r.pair.alpha_gap)}};
    nlohmann::ordered_json coeffs;
    for (std::size_t k = 0; k < r.coefficients.size(); ++k) coeffs["c" + std::to_string(k + 1)] = to_string(r.coefficients[k]);
    doc["coefficients"] = coeffs;
    doc["P1"] = print_poly(r.p1, names);
    doc["P3"] = print_poly(r.p3, names);
    doc["u"] = print_poly(r.u, names);
    auto matrix = nlohmann::ordered_json::array();
    for (const auto& row : r.system.matrix) {
        auto out = nlohmann::ordered_json::array();
        for (const auto& e : row) out.push_back(to_string(e));
        matrix.push_back(out);
    }
    auto rhs = nlohmann::ordered_json::array();
    for (const auto& e : r.system.rhs) rhs.push_back(to_string(e));
    doc["system"] = {{"matrix", matrix}, {"rhs", rhs}};
    doc["certificate"] = {{"harmonic", r.certificate.harmonic},
                          {"inner_product", print_poly(r.certificate.inner_product, names)},
                          {"inner_matches_pq", r.certificate.inner_matches_pq}};
    return doc;
}

}  // namespace carnot
