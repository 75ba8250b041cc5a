#pragma once

#include <cstdint>
#include <string_view>
#include <tuple>
#include <vector>

#include "icalab/errors.hpp"

namespace icalab {

// Dense row-major matrix of doubles. Immutable by convention once built;
// mutating accessors exist for construction and in-place parameter updates.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix add_rowvec(const Matrix& a, const std::vector<double>& b);

// xoshiro256++ stream seeded via splitmix64. Identical seeds give identical
// integer streams on every platform. Split children with a label so parallel
// consumers never share a stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // Uniform in [0, 1) with 53-bit resolution.
    double uniform();
    // Uniform integer in [0, bound) via rejection sampling (unbiased).
    std::uint64_t below(std::uint64_t bound);
    // Standard normal via Box-Muller; a spare value is cached.
    double normal();
    // Deterministic child stream derived from (root seed, label, index).
    Rng split(std::string_view label, std::uint64_t index = 0) const;
    // Fisher-Yates shuffle of indices 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);

    std::uint64_t root_seed() const { return root_seed_; }

  private:
    std::uint64_t root_seed_;
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// n x d matrix with row i drawn N(mean, diag(std^2)). std entries must be > 0.
Matrix gaussian_sample(Rng& rng, const std::vector<double>& mean,
                       const std::vector<double>& std, std::size_t n);

struct OlsFit {
    double slope;
    double intercept;
    double r2;  // clamped to [0, 1]
};

// Ordinary least squares of ys on xs. Requires >= 2 distinct xs.
OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // population variance

}  // namespace icalab
