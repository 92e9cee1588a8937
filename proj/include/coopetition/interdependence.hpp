#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "coopetition/error.hpp"

namespace coop {

// Square matrix of structural dependency coefficients D_ij in [0,1] with zero diagonal.
class InterdependenceMatrix {
public:
    InterdependenceMatrix() = default;
    explicit InterdependenceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    static InterdependenceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        InterdependenceMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw ModelError("interdependence matrix must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (i == j) {
                    if (rows[i][j] != 0.0) throw ModelError("interdependence diagonal must be zero");
                    continue;
                }
                m.set(i, j, rows[i][j]);
            }
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const {
        check_index(i, j);
        return entries_[i * n_ + j];
    }

    void set(std::size_t i, std::size_t j, double value) {
        check_index(i, j);
        if (i == j) throw ModelError("interdependence diagonal must stay zero");
        if (!std::isfinite(value) || value < 0.0 || value > 1.0)
            throw ModelError("interdependence entry out of [0,1]: " + std::to_string(value));
        entries_[i * n_ + j] = value;
    }

    friend bool operator==(const InterdependenceMatrix&, const InterdependenceMatrix&) = default;

private:
    void check_index(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_) throw ModelError("interdependence index out of range");
    }

    std::size_t n_ = 0;
    std::vector<double> entries_;
};

} // namespace coop
