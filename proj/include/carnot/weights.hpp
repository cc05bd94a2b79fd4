#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "carnot/error.hpp"

namespace carnot {

/// Dimensions (m_1, ..., m_s) of the strata of a Carnot algebra, and the
/// coordinate weights they induce. Coordinates are 0-based in code.
class StratifiedWeights {
public:
    StratifiedWeights() = default;

    explicit StratifiedWeights(std::vector<int> strata_dims) : dims_(std::move(strata_dims)) {
        if (dims_.empty()) fail(ErrorKind::BadDimension, "at least one stratum is required");
        offsets_.push_back(0);
        for (std::size_t layer = 0; layer < dims_.size(); ++layer) {
            if (dims_[layer] <= 0) fail(ErrorKind::BadDimension, "strata dimensions must be positive");
            for (int k = 0; k < dims_[layer]; ++k) degrees_.push_back(static_cast<int>(layer) + 1);
            offsets_.push_back(offsets_.back() + dims_[layer]);
        }
    }

    const std::vector<int>& strata_dims() const { return dims_; }
    int n() const { return static_cast<int>(degrees_.size()); }
    int step() const { return static_cast<int>(dims_.size()); }
    /// m_layer for a 1-based layer; 0 past the top layer.
    int layer_dim(int layer) const {
        return layer >= 1 && layer <= step() ? dims_[layer - 1] : 0;
    }
    int m1() const { return dims_.front(); }

    /// h_i: number of coordinates in layers 1..i.
    int offset(int layer) const { return offsets_.at(layer); }

    /// Weight d_j of coordinate j (0-based).
    int degree(int j) const { return degrees_.at(j); }
    const std::vector<int>& degrees() const { return degrees_; }

    /// Index of coordinate j inside its own layer (0-based).
    int index_in_layer(int j) const { return j - offsets_[degree(j) - 1]; }

    /// Global coordinate of the k-th (0-based) variable of a 1-based layer.
    int coordinate(int layer, int k) const { return offsets_.at(layer - 1) + k; }

    int homogeneous_dimension() const {
        return std::accumulate(degrees_.begin(), degrees_.end(), 0);
    }

    bool operator==(const StratifiedWeights& other) const { return dims_ == other.dims_; }

    /// Display name of coordinate j following the x / y / t / w{l}_{k} convention.
    std::string variable_name(int j) const {
        const int layer = degree(j);
        const int k = index_in_layer(j) + 1;
        switch (layer) {
            case 1: return "x" + std::to_string(k);
            case 2: return layer_dim(2) == 1 ? std::string("y") : "y" + std::to_string(k);
            case 3: return layer_dim(3) == 1 ? std::string("t") : "t" + std::to_string(k);
            default: return "w" + std::to_string(layer) + "_" + std::to_string(k);
        }
    }

private:
    std::vector<int> dims_;
    std::vector<int> offsets_;
    std::vector<int> degrees_;
};

}  // namespace carnot
