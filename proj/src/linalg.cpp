#include "glevy/linalg.hpp"

#include "glevy/errors.hpp"

#include <algorithm>
#include <cmath>

namespace glevy {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidInput("matrix data does not match its shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Point Matrix::apply(const Point& x) const {
    if (x.size() != cols_) throw InvalidInput("matrix-vector dimension mismatch");
    Point y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

double Matrix::traceOuter() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return acc;
}

bool Matrix::isZero() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

double norm(const Point& x) {
    if (x.size() == 1) return std::abs(x[0]);
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

bool isZero(const Point& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

Point zeroPoint(std::size_t dim) { return Point(dim, 0.0); }

Point operator+(const Point& a, const Point& b) {
    Point r = a;
    r += b;
    return r;
}

Point operator-(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidInput("point dimension mismatch");
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Point operator*(double s, const Point& a) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

Point& operator+=(Point& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidInput("point dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

double maxAbsDifference(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw InvalidInput("point dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace glevy
