#include "a2opt/matrix.hpp"

#include <cmath>
#include <utility>

namespace a2opt {

Matrix::Matrix(int r, int c) : rows(r), cols(c) {
    if (r < 0 || c < 0) throw ShapeError("matrix dimensions must be non-negative, got " + shape_str(r, c));
    data.assign(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0);
}

Matrix::Matrix(int r, int c, std::vector<double> values) : rows(r), cols(c), data(std::move(values)) {
    if (r < 0 || c < 0) throw ShapeError("matrix dimensions must be non-negative, got " + shape_str(r, c));
    if (data.size() != static_cast<size_t>(r) * static_cast<size_t>(c))
        throw ShapeError("matrix " + shape_str(r, c) + " expects " + std::to_string(static_cast<size_t>(r) * c) +
                         " values, got " + std::to_string(data.size()));
    if (!all_finite()) throw ShapeError("matrix " + shape_str(r, c) + " contains a non-finite entry");
}

Matrix Matrix::scalar(double v) { return Matrix(1, 1, {v}); }

Matrix Matrix::row(std::vector<double> values) {
    int n = static_cast<int>(values.size());
    return Matrix(1, n, std::move(values));
}

void Matrix::fill(double v) {
    for (double& x : data) x = v;
}

double Matrix::squared_norm() const {
    double s = 0.0;
    for (double x : data) s += x * x;
    return s;
}

bool Matrix::all_finite() const {
    for (double x : data)
        if (!std::isfinite(x)) return false;
    return true;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

std::string shape_str(const Matrix& m) { return shape_str(m.rows, m.cols); }

std::string shape_str(int rows, int cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace a2opt
