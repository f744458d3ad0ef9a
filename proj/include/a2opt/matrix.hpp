#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace a2opt {

// Thrown when operands cannot be combined; raised while the expression is
// being built, never during a numeric pass.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major matrix of doubles. Plain value type; all entries finite.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c);                              // zero-filled
    Matrix(int r, int c, std::vector<double> values);  // validates size and finiteness

    static Matrix scalar(double v);
    static Matrix row(std::vector<double> values);

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    size_t size() const { return data.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double v);
    double squared_norm() const;
    bool all_finite() const;
};

bool operator==(const Matrix& a, const Matrix& b);

std::string shape_str(const Matrix& m);
std::string shape_str(int rows, int cols);

}  // namespace a2opt
