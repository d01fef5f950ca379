// Small dense row-major matrix and labeled dataset used by the training and
// simulation code.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mabt {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
};

struct Dataset {
    Matrix x;
    std::vector<int> y;

    std::size_t size() const { return y.size(); }

    void check() const {
        if (x.rows != y.size()) throw std::invalid_argument("feature rows and labels differ");
    }
};

} // namespace mabt
