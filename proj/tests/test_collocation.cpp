#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tlsc/collocation.hpp"
#include "tlsc/errors.hpp"

using namespace tlsc;

namespace {

// E[y^j] for the uniform density 1/2 on [-1,1]
double uniform_moment(int j) { return j % 2 == 1 ? 0.0 : 1.0 / (j + 1); }

}  // namespace

TEST_CASE("gauss_legendre small rules") {
    CHECK_THROWS_AS(gauss_legendre(0), Error);

    const GaussRule r1 = gauss_legendre(1);
    CHECK(r1.nodes == std::vector<double>{0.0});
    CHECK(r1.weights == std::vector<double>{1.0});

    const GaussRule r2 = gauss_legendre(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gauss_legendre: symmetry, unit weight sum, 2n-1 exactness") {
    for (int n = 1; n <= 12; ++n) {
        const GaussRule r = gauss_legendre(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(r.weights[size_t(i)] > 0.0);
            sum += r.weights[size_t(i)];
            CHECK(std::abs(r.nodes[size_t(i)] + r.nodes[size_t(n - 1 - i)]) <= 1e-14);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-14);
        for (int i = 1; i < n; ++i) CHECK(r.nodes[size_t(i)] > r.nodes[size_t(i) - 1]);

        for (int j = 0; j <= 2 * n - 1; ++j) {
            double q = 0.0;
            for (int i = 0; i < n; ++i) q += r.weights[size_t(i)] * std::pow(r.nodes[size_t(i)], j);
            CHECK(std::abs(q - uniform_moment(j)) <= 1e-13);
        }
    }

    // five points integrate x^8 against the density: E[x^8] = 1/9
    const GaussRule r5 = gauss_legendre(5);
    double q = 0.0;
    for (int i = 0; i < 5; ++i) q += r5.weights[size_t(i)] * std::pow(r5.nodes[size_t(i)], 8);
    CHECK(std::abs(q - 1.0 / 9.0) <= 1e-14);
}

TEST_CASE("tensor grid shapes") {
    CHECK(build_tensor_grid({4, 8}).point_count() == 45);

    const TensorGrid g0 = build_tensor_grid({0, 0});
    CHECK(g0.point_count() == 1);
    CHECK(g0.point(0) == std::vector<double>{0.0, 0.0});
    CHECK(g0.weight(0) == doctest::Approx(1.0).epsilon(1e-15));

    const TensorGrid g1 = build_tensor_grid({1, 1});
    CHECK(g1.point_count() == 4);
    const double s = 1.0 / std::sqrt(3.0);
    for (int k = 0; k < 4; ++k) {
        CHECK(g1.weight(k) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(std::abs(g1.point(k)[0]) == doctest::Approx(s).epsilon(1e-15));
        CHECK(std::abs(g1.point(k)[1]) == doctest::Approx(s).epsilon(1e-15));
    }

    CHECK_THROWS_AS(build_tensor_grid({}), Error);
    CHECK_THROWS_AS(build_tensor_grid({2, -1}), Error);
}

TEST_CASE("flat/multi index round trip, first dimension slowest") {
    const TensorGrid g = build_tensor_grid({2, 3, 1});
    for (int k = 0; k < g.point_count(); ++k) {
        const std::vector<int> m = g.multi_index(k);
        CHECK(g.flat_index(m) == k);
    }
    // the last dimension varies fastest in the flat order
    CHECK(g.multi_index(0) == std::vector<int>{0, 0, 0});
    CHECK(g.multi_index(1) == std::vector<int>{0, 0, 1});
    CHECK(g.multi_index(2) == std::vector<int>{0, 1, 0});

    std::mt19937 rng(42u);
    std::uniform_int_distribution<int> dims(1, 4), deg(0, 6);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> degrees(size_t(dims(rng)));
        long expected = 1;
        for (int& d : degrees) {
            d = deg(rng);
            expected *= d + 1;
        }
        CHECK(build_tensor_grid(degrees).point_count() == expected);
    }
}

TEST_CASE("interpolation: node exactness and polynomial reproduction") {
    const TensorGrid g = build_tensor_grid({2, 2});
    std::vector<double> values(size_t(g.point_count()));
    for (int k = 0; k < g.point_count(); ++k) {
        const std::vector<double> y = g.point(k);
        values[size_t(k)] = 3.0 + y[0] + y[1];
    }
    for (int k = 0; k < g.point_count(); ++k) {
        const std::vector<double> y = g.point(k);
        CHECK(std::abs(interpolate(g, values, y) - values[size_t(k)]) <= 1e-12);
    }
    CHECK(interpolate(g, values, std::vector<double>{0.3, -0.7}) ==
          doctest::Approx(2.6).epsilon(1e-13));

    SUBCASE("tensor polynomial of full coordinate degree is reproduced") {
        const TensorGrid g32 = build_tensor_grid({3, 2});
        const auto poly = [](double y1, double y2) {
            return (0.5 + y1 * y1 * y1 - y1) * (1.0 + 2.0 * y2 * y2);
        };
        std::vector<double> v(size_t(g32.point_count()));
        for (int k = 0; k < g32.point_count(); ++k) {
            const std::vector<double> y = g32.point(k);
            v[size_t(k)] = poly(y[0], y[1]);
        }
        std::mt19937 rng(3u);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const double y1 = unit(rng), y2 = unit(rng);
            CHECK(interpolate(g32, v, std::vector<double>{y1, y2}) ==
                  doctest::Approx(poly(y1, y2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("interpolation error of 1/(3+y) on a degree-8 rule") {
    const TensorGrid g = build_tensor_grid({8});
    std::vector<double> values(size_t(g.point_count()));
    for (int k = 0; k < g.point_count(); ++k)
        values[size_t(k)] = 1.0 / (3.0 + g.point(k)[0]);

    const double at_half = interpolate(g, values, std::vector<double>{0.5});
    CHECK(std::abs(at_half - 1.0 / 3.5) / (1.0 / 3.5) < 1e-6);

    // dense evaluation: the bound holds across the whole interval
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double y = -1.0 + 2.0 * i / 400.0;
        const double err = std::abs(interpolate(g, values, std::vector<double>{y}) - 1.0 / (3.0 + y));
        worst = std::max(worst, err * (3.0 + y));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("interpolation is linear in the values") {
    const TensorGrid g = build_tensor_grid({3, 2});
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> u(size_t(g.point_count())), v(size_t(g.point_count()));
    for (std::size_t k = 0; k < u.size(); ++k) {
        u[k] = unit(rng);
        v[k] = unit(rng);
    }
    const double alpha = 0.7, beta = -1.3;
    std::vector<double> combo(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) combo[k] = alpha * u[k] + beta * v[k];
    for (int trial = 0; trial < 25; ++trial) {
        const std::vector<double> y{unit(rng), unit(rng)};
        const double lhs = interpolate(g, combo, y);
        const double rhs = alpha * interpolate(g, u, y) + beta * interpolate(g, v, y);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("interpolate_vectors matches per-component scalar interpolation") {
    const TensorGrid g = build_tensor_grid({2, 1});
    std::vector<std::vector<double>> vectors(size_t(g.point_count()));
    std::mt19937 rng(17u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& vec : vectors) {
        vec.resize(5);
        for (double& x : vec) x = unit(rng);
    }
    const std::vector<double> y{0.25, -0.6};
    const std::vector<double> out = interpolate_vectors(g, vectors, y);
    for (int c = 0; c < 5; ++c) {
        std::vector<double> comp(size_t(g.point_count()));
        for (int k = 0; k < g.point_count(); ++k) comp[size_t(k)] = vectors[size_t(k)][size_t(c)];
        CHECK(out[size_t(c)] == doctest::Approx(interpolate(g, comp, y)).epsilon(1e-14));
    }
}

TEST_CASE("queries outside Gamma are rejected") {
    const TensorGrid g = build_tensor_grid({2, 2});
    const std::vector<double> values(size_t(g.point_count()), 1.0);
    CHECK_THROWS_AS(interpolate(g, values, std::vector<double>{1.1, 0.0}), Error);
    CHECK_THROWS_AS(interpolate(g, values, std::vector<double>{0.0, -1.0 - 1e-9}), Error);
    CHECK_NOTHROW(interpolate(g, values, std::vector<double>{1.0, -1.0}));
}

TEST_CASE("expectation: weights, symmetry, Gauss exactness") {
    const TensorGrid g11 = build_tensor_grid({1, 1});
    std::vector<double> vals(4, 2.5);
    CHECK(expectation(g11, vals) == doctest::Approx(2.5).epsilon(1e-15));

    for (int k = 0; k < 4; ++k) {
        const std::vector<double> y = g11.point(k);
        vals[size_t(k)] = y[0] * y[1];
    }
    CHECK(std::abs(expectation(g11, vals)) <= 1e-15);

    const TensorGrid g44 = build_tensor_grid({4, 4});
    std::vector<double> sq(size_t(g44.point_count()));
    for (int k = 0; k < g44.point_count(); ++k) {
        const std::vector<double> y = g44.point(k);
        sq[size_t(k)] = y[0] * y[0] * y[1] * y[1];
    }
    CHECK(expectation(g44, sq) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    SUBCASE("expectation of interpolant samples is exact for degree <= 2n-1") {
        const TensorGrid g = build_tensor_grid({3, 2});
        const auto poly = [](double y1, double y2) {
            // degrees (7, 5) stay within Gauss exactness of (4, 3) points
            return std::pow(y1, 7) - 2.0 * std::pow(y1, 4) * std::pow(y2, 2) +
                   0.5 * std::pow(y2, 4);
        };
        std::vector<double> v(size_t(g.point_count()));
        for (int k = 0; k < g.point_count(); ++k) {
            const std::vector<double> y = g.point(k);
            v[size_t(k)] = poly(y[0], y[1]);
        }
        const double exact = 0.0 - 2.0 * uniform_moment(4) * uniform_moment(2) +
                             0.5 * uniform_moment(4);
        CHECK(expectation(g, v) == doctest::Approx(exact).epsilon(1e-12));
    }
}
