#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace glevy {

/// A point of R^d. Jump sizes, drifts and path values all use this type.
using Point = std::vector<double>;

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

/// Dense row-major matrix; only small d x d covariance roots live here.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix zeros(std::size_t n) { return Matrix(n, n); }
    static Matrix identity(std::size_t n);
    static Matrix scalar(double q) { return Matrix(1, 1, q); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }

    Point apply(const Point& x) const;
    /// tr(M M^T), i.e. the squared Frobenius norm.
    double traceOuter() const;
    bool isZero() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double norm(const Point& x);
bool isZero(const Point& x);
Point zeroPoint(std::size_t dim);
Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);
Point& operator+=(Point& a, const Point& b);
double maxAbsDifference(const Point& a, const Point& b);

}  // namespace glevy
