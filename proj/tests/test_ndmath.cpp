#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icalab/ndmath.hpp"

using namespace icalab;

namespace {

// Independent naive oracle for matmul.
Matrix matmul_oracle(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("matmul identity case") {
    const Matrix a = Matrix::from_rows({{1.0, -2.5}, {0.5, 3.0}});
    const Matrix p = matmul(Matrix::identity(2), a);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(p.data()[i] == a.data()[i]);
}

TEST_CASE("matmul hand-computed case") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{1}, {1}});
    const Matrix p = matmul(a, b);
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 1);
    CHECK(p(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(p(1, 0) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("matmul matches triple-loop oracle") {
    Rng rng(11);
    const Matrix a = random_matrix(5, 7, rng);
    const Matrix b = random_matrix(7, 3, rng);
    const Matrix fast = matmul(a, b);
    const Matrix slow = matmul_oracle(a, b);
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast.data()[i] - slow.data()[i]) < 1e-12);
}

TEST_CASE("matmul shape mismatch throws") {
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST_CASE("matmul associativity on random triples") {
    Rng rng(5);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix a = random_matrix(4, 6, rng);
        const Matrix b = random_matrix(6, 5, rng);
        const Matrix c = random_matrix(5, 3, rng);
        const Matrix lhs = matmul(matmul(a, b), c);
        const Matrix rhs = matmul(a, matmul(b, c));
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            const double denom = std::max(1.0, std::abs(rhs.data()[i]));
            CHECK(std::abs(lhs.data()[i] - rhs.data()[i]) / denom < 1e-9);
        }
    }
}

TEST_CASE("transpose and add_rowvec") {
    const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    const Matrix t = transpose(a);
    CHECK(t.rows() == 3);
    CHECK(t(2, 1) == 6);
    const Matrix s = add_rowvec(a, {10, 20, 30});
    CHECK(s(1, 2) == 36);
    CHECK_THROWS_AS(add_rowvec(a, {1, 2}), ShapeError);
}

TEST_CASE("rng determinism: same seed gives identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng split streams differ by label and index") {
    Rng root(7);
    Rng a = root.split("alpha");
    Rng b = root.split("beta");
    Rng a1 = root.split("alpha", 1);
    CHECK(a.next_u64() != b.next_u64());
    CHECK(root.split("alpha").next_u64() != a1.next_u64());
    // Splitting is a const operation: repeated splits agree.
    CHECK(root.split("alpha").next_u64() == root.split("alpha").next_u64());
}

TEST_CASE("rng uniform in [0,1) and below is in range") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.below(13) < 13);
    }
}

TEST_CASE("rng normal moments") {
    Rng rng(99);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = rng.normal();
    CHECK(std::abs(mean_of(xs)) < 0.02);
    CHECK(std::abs(variance_of(xs) - 1.0) < 0.03);
}

TEST_CASE("rng permutation is a bijection") {
    Rng rng(8);
    const auto p = rng.permutation(50);
    std::vector<bool> seen(50, false);
    for (const auto i : p) {
        CHECK(i < 50);
        CHECK(!seen[i]);
        seen[i] = true;
    }
}

TEST_CASE("gaussian_sample column means converge") {
    Rng rng(21);
    const Matrix s = gaussian_sample(rng, {0.0, 0.0}, {1.0, 1.0}, 100000);
    for (std::size_t j = 0; j < 2; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < s.rows(); ++i) m += s(i, j);
        CHECK(std::abs(m / static_cast<double>(s.rows())) < 0.02);
    }
}

TEST_CASE("gaussian_sample rejects non-positive std") {
    Rng rng(1);
    CHECK_THROWS_AS(gaussian_sample(rng, {0.0}, {0.0}, 10), ParameterError);
    CHECK_THROWS_AS(gaussian_sample(rng, {0.0}, {-1.0}, 10), ParameterError);
}

TEST_CASE("gaussian_sample fixed seed is bit-identical") {
    Rng a(77), b(77);
    const Matrix ma = gaussian_sample(a, {1.0, -1.0}, {2.0, 0.5}, 500);
    const Matrix mb = gaussian_sample(b, {1.0, -1.0}, {2.0, 0.5}, 500);
    for (std::size_t i = 0; i < ma.size(); ++i) CHECK(ma.data()[i] == mb.data()[i]);
}

TEST_CASE("ols_fit exact line") {
    const OlsFit f = ols_fit({1, 2, 3}, {2, 4, 6});
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(f.intercept) < 1e-12);
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ols_fit slope 500 line") {
    const OlsFit f = ols_fit({10, 20, 30, 50}, {5000, 10000, 15000, 25000});
    CHECK(f.slope == doctest::Approx(500.0).epsilon(1e-12));
    CHECK(std::abs(f.intercept) < 1e-8);
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ols_fit recovers a noisy planted slope") {
    Rng rng(13);
    std::vector<double> xs, ys;
    for (int i = 1; i <= 200; ++i) {
        xs.push_back(i);
        ys.push_back(3.0 * i + 0.5 * rng.normal());
    }
    const OlsFit f = ols_fit(xs, ys);
    CHECK(std::abs(f.slope - 3.0) / 3.0 < 0.05);
}

TEST_CASE("ols_fit constant xs is a rank error") {
    CHECK_THROWS_AS(ols_fit({2, 2, 2}, {1, 2, 3}), RankError);
}

TEST_CASE("mean and population variance") {
    CHECK(mean_of({1, 2, 3, 4}) == doctest::Approx(2.5));
    CHECK(variance_of({1, 2, 3, 4}) == doctest::Approx(1.25));
}
