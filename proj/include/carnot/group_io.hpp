#pragma once

// Group definition files (JSON):
//   {
//     "name": "h1-custom",
//     "strata": [2, 1],
//     "step2_skew": [[[0, "-1"], [1, 0]]],            // or:
//     "fields": [{"base_index": 1, "coeffs": {"3": "-1/2*x2"}}, ...],
//     "law": {"product": ["x1 + x1'", ...], "inverse": ["-x1", ...]}
//   }
// Indices are 1-based. Rational entries may be JSON integers or strings.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "carnot/group.hpp"

namespace carnot {

namespace detail {

inline Rational json_rational(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    fail(ErrorKind::InvalidInput, "expected an integer or a rational string, got " + v.dump());
}

inline int json_index(const std::string& key, int limit) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(key, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "bad coordinate index '" + key + "'");
    }
    if (used != key.size() || v < 1 || v > limit) fail(ErrorKind::InvalidInput, "coordinate index out of range: " + key);
    return v - 1;
}

}  // namespace detail

inline CarnotGroup group_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("strata")) fail(ErrorKind::InvalidInput, "group file needs 'strata'");
    const StratifiedWeights w(doc.at("strata").get<std::vector<int>>());
    const int n = w.n();
    CarnotGroup g;
    if (doc.contains("step2_skew")) {
        std::vector<RationalMatrix> family;
        for (const auto& mat : doc.at("step2_skew")) {
            RationalMatrix m;
            for (const auto& row : mat) {
                RationalVector r;
                for (const auto& e : row) r.push_back(detail::json_rational(e));
                m.push_back(std::move(r));
            }
            family.push_back(std::move(m));
        }
        g = make_step2(family);
        if (!(g.weights == w)) fail(ErrorKind::InvalidInput, "strata do not match the step2_skew matrices");
    } else if (doc.contains("fields")) {
        g.weights = w;
        const VariableNames names(w);
        for (const auto& entry : doc.at("fields")) {
            VectorField f;
            f.base_index = entry.at("base_index").get<int>() - 1;
            if (entry.contains("coeffs")) {
                for (const auto& [key, text] : entry.at("coeffs").items()) {
                    f.coeffs.emplace(detail::json_index(key, n), parse_poly(text.get<std::string>(), names));
                }
            }
            g.fields.push_back(std::move(f));
        }
    } else {
        fail(ErrorKind::InvalidInput, "group file needs 'step2_skew' or 'fields'");
    }
    g.name = doc.value("name", std::string("custom"));
    if (doc.contains("law")) {
        const auto& law_doc = doc.at("law");
        const VariableNames pair_names(w, true);
        const VariableNames names(w);
        GroupLaw law;
        for (const auto& c : law_doc.at("product")) law.product.push_back(parse_poly(c.get<std::string>(), pair_names));
        for (const auto& c : law_doc.at("inverse")) law.inverse.push_back(parse_poly(c.get<std::string>(), names));
        if (static_cast<int>(law.product.size()) != n || static_cast<int>(law.inverse.size()) != n) {
            fail(ErrorKind::InvalidInput, "law needs one product and one inverse component per coordinate");
        }
        g.law = std::move(law);
    }
    return g;
}

inline nlohmann::ordered_json group_to_json(const CarnotGroup& g) {
    nlohmann::ordered_json doc;
    doc["name"] = g.name;
    doc["strata"] = g.weights.strata_dims();
    const VariableNames names(g.weights);
    auto fields = nlohmann::ordered_json::array();
    for (const auto& f : g.fields) {
        nlohmann::ordered_json entry;
        entry["base_index"] = f.base_index + 1;
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
        for (const auto& [k, p] : f.coeffs) coeffs[std::to_string(k + 1)] = print_poly(p, names);
        entry["coeffs"] = coeffs;
        fields.push_back(entry);
    }
    doc["fields"] = fields;
    if (g.law) {
        const VariableNames pair_names(g.weights, true);
        nlohmann::ordered_json law;
        law["product"] = nlohmann::ordered_json::array();
        law["inverse"] = nlohmann::ordered_json::array();
        for (const auto& c : g.law->product) law["product"].push_back(print_poly(c, pair_names));
        for (const auto& c : g.law->inverse) law["inverse"].push_back(print_poly(c, names));
        doc["law"] = law;
    }
    return doc;
}

/// A preset name, or the path of a group definition file.
inline CarnotGroup load_group(const std::string& ref) {
    if (auto g = preset_group(ref)) return *g;
    if (!std::filesystem::exists(ref)) fail(ErrorKind::InvalidInput, "unknown group '" + ref + "'");
    std::ifstream in(ref);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("cannot parse group file: ") + e.what());
    }
    try {
        return group_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("malformed group file: ") + e.what());
    }
}

}  // namespace carnot
