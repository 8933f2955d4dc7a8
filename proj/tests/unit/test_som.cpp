#include <doctest.h>

#include <cmath>

#include "hsom/dataset.hpp"
#include "hsom/error.hpp"
#include "hsom/random.hpp"
#include "hsom/som.hpp"
#include "oracles.hpp"

using namespace hsom;
using namespace hsom::som;

namespace {

template <typename F>
ErrorCode code_of(F f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an hsom::Error");
    return ErrorCode::IoError;
}

std::vector<double> random_vector(Rng& rng, std::size_t d, double lo = -1.0, double hi = 1.0)
{
    std::vector<double> v(d);
    for (auto& x : v)
        x = rng.uniform(lo, hi);
    return v;
}

std::vector<std::vector<std::vector<double>>> nested(const Model& m)
{
    std::vector<std::vector<std::vector<double>>> w(m.rows(), std::vector<std::vector<double>>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto s = m.weight(GridCoord{i, j});
            w[i][j].assign(s.begin(), s.end());
        }
    return w;
}

double norm_of(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

} // namespace

TEST_CASE("net_input")
{
    const std::vector<double> x{1, 0};
    const std::vector<double> w{0, 1};
    CHECK(net_input(x, x) == 0.0);
    CHECK(net_input(x, w) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    Rng rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_vector(rng, 5, -10, 10);
        const auto b = random_vector(rng, 5, -10, 10);
        CHECK(std::abs(net_input(a, b) - oracle::euclid(a, b)) <= 1e-12);
    }
    const std::vector<double> three{1, 2, 3};
    CHECK(code_of([&] { net_input(x, three); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("activation")
{
    CHECK(activation(0.0, 1.0) == 1.0);
    CHECK(activation(0.0, kDefaultActivationSigma) == 1.0);
    CHECK(std::abs(activation(1.0, 1e6) - 0.999999) < 1e-12);
    CHECK(activation(1.0, 1e6) == std::exp(-1e-6));
    Rng rng(2);
    double prev = 1.0;
    for (double s = 0.0; s < 50.0; s += rng.uniform01()) {
        const double a = activation(s, 3.0);
        CHECK(a <= prev);
        CHECK(a > 0.0);
        prev = a;
    }
}

TEST_CASE("best_matching_unit: exact match and exhaustive oracle")
{
    Rng rng(3);
    Model m(4, 5, 3, 9);
    const auto target = m.weight(GridCoord{2, 3});
    const std::vector<double> x(target.begin(), target.end());
    CHECK(best_matching_unit(m, x) == GridCoord{2, 3});

    for (int trial = 0; trial < 1000; ++trial) {
        Model small(3, 3, 4, rng.next());
        const auto v = random_vector(rng, 4);
        const auto [i, j] = oracle::exhaustive_bmu(nested(small), v);
        CHECK(best_matching_unit(small, v) == GridCoord{i, j});
    }
}

TEST_CASE("best_matching_unit: ties go to the smallest row-major coordinate")
{
    std::vector<double> w{0.6, 0.8, 1, 0, 0, 1, 1, 0};
    const auto m = Model::from_weights(2, 2, 2, w);
    const std::vector<double> x{1, 0};
    CHECK(best_matching_unit(m, x) == GridCoord{0, 1});

    // Repeated frames always resolve to the same unit.
    Model big(6, 6, 3, 4);
    Rng rng(4);
    const auto v = random_vector(rng, 3);
    const auto first = best_matching_unit(big, v);
    for (int k = 0; k < 10; ++k)
        CHECK(best_matching_unit(big, v) == first);
}

TEST_CASE("neighborhood kernels")
{
    CHECK(neighborhood(0.0, 1.0, Neighborhood::Printed) == 1.0);
    CHECK(neighborhood(2.0, 1.0, Neighborhood::Printed) == doctest::Approx(std::exp(-1.0)));
    CHECK(neighborhood(2.0, 1.0, Neighborhood::Squared) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("adapt: alpha zero leaves the model bit-identical")
{
    Model m(5, 4, 6, 11);
    const Model before = m;
    Rng rng(5);
    adapt(m, random_vector(rng, 6), GridCoord{2, 1}, 0.0, 1.5);
    CHECK(m == before);
}

TEST_CASE("adapt: 2x2 hand-picked step matches the elementwise oracle")
{
    const std::vector<double> w{1, 0, 0, 1, 0.6, 0.8, -0.8, 0.6};
    auto m = Model::from_weights(2, 2, 2, w);
    const auto ref = nested(m);
    const std::vector<double> x{0.3, -0.4};
    adapt(m, x, GridCoord{0, 1}, 0.5, 0.75);
    const auto expected = oracle::adapt(ref, x, 0, 1, 0.5, 0.75);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(std::abs(m.weight(GridCoord{i, j})[k] - expected[i][j][k]) <= 1e-12);
}

TEST_CASE("adapt: random instances match the oracle and keep unit norm")
{
    Rng rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t rows = 1 + rng.below(4);
        const std::size_t cols = 1 + rng.below(4);
        const std::size_t dim = 1 + rng.below(6);
        Model m(rows, cols, dim, rng.next());
        const auto ref = nested(m);
        const auto x = random_vector(rng, dim, -2, 2);
        const GridCoord c{rng.below(rows), rng.below(cols)};
        const double alpha = rng.uniform(0.0, 0.9);
        const double sigma = rng.uniform(0.2, 3.0);
        adapt(m, x, c, alpha, sigma);
        const auto expected = oracle::adapt(ref, x, c.i, c.j, alpha, sigma);
        double worst = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    worst = std::max(worst, std::abs(m.weight(GridCoord{i, j})[k] - expected[i][j][k]));
        CHECK(worst <= 1e-12);
        CHECK(m.unit_norm(1e-12));
    }
}

TEST_CASE("adapt: the winner moves toward the input and the step shrinks with grid distance")
{
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Model m(5, 5, 3, rng.next());
        auto x = random_vector(rng, 3, 0, 1);
        const double nx = norm_of(x);
        for (auto& v : x)
            v /= nx;
        const GridCoord c{rng.below(5), rng.below(5)};
        const Model before = m;
        const double alpha = rng.uniform(0.05, 0.9);
        const double sigma = rng.uniform(0.5, 3.0);
        adapt(m, x, c, alpha, sigma);
        CHECK(net_input(x, m.weight(c)) <= net_input(x, before.weight(c)) + 1e-15);

        // w1 is w0 + f (x - w0) rescaled; writing w1 = a w0 + b (x - w0)
        // recovers the fractional step f = b / a.
        double prev_f = 2.0;
        double prev_d = -1.0;
        std::vector<std::pair<double, double>> by_distance;
        for (std::size_t u = 0; u < m.units(); ++u) {
            const auto g = m.coord(u);
            const double di = static_cast<double>(g.i) - static_cast<double>(c.i);
            const double dj = static_cast<double>(g.j) - static_cast<double>(c.j);
            const auto w0 = before.weight(u);
            const auto w1 = m.weight(u);
            double g00 = 0.0, g01 = 0.0, g11 = 0.0, r0 = 0.0, r1 = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double dk = x[k] - w0[k];
                g00 += w0[k] * w0[k];
                g01 += w0[k] * dk;
                g11 += dk * dk;
                r0 += w0[k] * w1[k];
                r1 += dk * w1[k];
            }
            const double det = g00 * g11 - g01 * g01;
            if (det < 1e-12)
                continue;
            const double ca = (g11 * r0 - g01 * r1) / det;
            const double cb = (g00 * r1 - g01 * r0) / det;
            by_distance.emplace_back(std::sqrt(di * di + dj * dj), cb / ca);
        }
        std::sort(by_distance.begin(), by_distance.end());
        for (const auto& [d, f] : by_distance) {
            CHECK(f == doctest::Approx(alpha * neighborhood(d, sigma, Neighborhood::Printed)).epsilon(1e-6));
            if (d > prev_d + 1e-12)
                CHECK(f <= prev_f + 1e-9);
            prev_f = f;
            prev_d = d;
        }
    }
}

TEST_CASE("schedule: endpoints and monotone decay")
{
    auto s = Schedule::standard(30, 20, 10);
    CHECK(s.sigma0 == 15.0);
    CHECK(s.sigma1 == 1.0);
    CHECK(s.alpha0 == 0.1);
    CHECK(s.alpha1 == 0.01);
    CHECK(s.alpha_at(0, 100) == 0.1);
    CHECK(s.alpha_at(99, 100) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(s.sigma_at(99, 100) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t t = 1; t < 100; ++t) {
        CHECK(s.alpha_at(t, 100) < s.alpha_at(t - 1, 100));
        CHECK(s.sigma_at(t, 100) < s.sigma_at(t - 1, 100));
    }
    CHECK(Schedule::standard(1, 1, 1).sigma0 == 1.0);
    s.alpha1 = 0.5;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = Schedule::standard(3, 3, 0);
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("train: single input, full step, tiny neighborhood")
{
    Model m(3, 3, 3, 12);
    const std::vector<double> x{3, 0, 4};
    const auto c = best_matching_unit(m, x);
    Schedule s;
    s.epochs = 1;
    s.alpha0 = s.alpha1 = 1.0;
    s.sigma0 = s.sigma1 = 1e-3;
    const Model before = m;
    train(m, RowsView{x, 3}, s, 1);
    const auto w = m.weight(c);
    CHECK(w[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(w[1] == 0.0);
    CHECK(w[2] == doctest::Approx(0.8).epsilon(1e-15));
    for (std::size_t u = 0; u < m.units(); ++u)
        if (u != m.unit(c))
            CHECK(std::equal(m.weight(u).begin(), m.weight(u).end(), before.weight(u).begin()));
    CHECK(m.presentations == 1);
    CHECK(m.epochs_trained == 1);
}

TEST_CASE("train: same seed and data give bit-identical models")
{
    Rng rng(13);
    std::vector<double> data;
    for (int i = 0; i < 300; ++i)
        for (double v : random_vector(rng, 4))
            data.push_back(v);
    const auto s = Schedule::standard(6, 6, 5);
    Model a(6, 6, 4, 21);
    Model b(6, 6, 4, 21);
    train(a, RowsView{data, 4}, s, 99);
    train(b, RowsView{data, 4}, s, 99);
    CHECK(a == b);
    CHECK(to_json_text(a) == to_json_text(b));
    Model c(6, 6, 4, 21);
    train(c, RowsView{data, 4}, s, 100);
    CHECK_FALSE(a == c);
}

TEST_CASE("train: quantization error on ring data drops below its initial value")
{
    Rng rng(14);
    std::vector<double> ring;
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(0.0, 2.0 * 3.141592653589793);
        const double r = rng.uniform(0.5, 1.0);
        ring.push_back(r * std::cos(a));
        ring.push_back(r * std::sin(a));
    }
    Model m(10, 10, 2, 15);
    const RowsView view{ring, 2};
    const double before = quantization_error(m, view);
    train(m, view, Schedule::standard(10, 10, 10), 16);
    const double after = quantization_error(m, view);
    MESSAGE("ring QE " << before << " -> " << after);
    CHECK(after < before);
    CHECK(m.unit_norm());
}

TEST_CASE("train: errors")
{
    Model m(2, 2, 3, 1);
    const std::vector<double> none;
    CHECK(code_of([&] { train(m, RowsView{none, 3}, Schedule{}, 1); }) == ErrorCode::EmptyInput);
    const std::vector<double> wrong{1, 2};
    CHECK(code_of([&] { train(m, RowsView{wrong, 2}, Schedule{}, 1); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("initialization: unit norm weights with non-negative components")
{
    Model m(7, 3, 5, 17);
    CHECK(m.units() == 21);
    CHECK(m.unit_norm(1e-12));
    for (double w : m.weights())
        CHECK(w >= 0.0);
    CHECK(Model(7, 3, 5, 17) == m);
}

TEST_CASE("activity_map: the matching unit is maximal")
{
    Model m(4, 4, 3, 18);
    const auto w0 = m.weight(GridCoord{0, 0});
    const std::vector<double> x(w0.begin(), w0.end());
    const auto map = activity_map(m, x);
    REQUIRE(map.size() == 16);
    CHECK(map[0] == 1.0);
    CHECK(*std::max_element(map.begin(), map.end()) == 1.0);
    for (std::size_t u = 1; u < map.size(); ++u)
        CHECK(map[u] == activation(oracle::euclid(x, std::vector<double>(m.weight(u).begin(), m.weight(u).end())),
                                   kDefaultActivationSigma));
}

TEST_CASE("serialization: golden file round trip")
{
    const auto golden = dataset::read_file(std::string(HSOM_TEST_DATA_DIR) + "/golden_som.json");
    const auto m = from_json_text(golden);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.dim() == 2);
    CHECK(m.seed() == 42);
    CHECK(m.training_seed == 7);
    CHECK(m.epochs_trained == 3);
    CHECK(m.presentations == 12);
    CHECK(m.schedule.neighborhood == Neighborhood::Squared);
    CHECK(m.schedule.alpha0 == 0.5);
    CHECK(m.weight(GridCoord{1, 1})[0] == -0.8);
    CHECK(to_json_text(m) == golden);
}

TEST_CASE("serialization: damaged input")
{
    Model m(3, 2, 2, 5);
    const auto text = to_json_text(m);
    CHECK(from_json_text(text) == m);
    CHECK(code_of([&] { from_json_text(text.substr(0, text.size() / 2)); }) == ErrorCode::CorruptFile);
    CHECK(code_of([&] { from_json_text("[]"); }) == ErrorCode::CorruptFile);

    auto wrong_version = text;
    wrong_version.replace(wrong_version.find("\"version\": 1"), 12, "\"version\": 9");
    CHECK(code_of([&] { from_json_text(wrong_version); }) == ErrorCode::VersionMismatch);

    const std::vector<double> not_unit{1, 1, 0, 1};
    CHECK(code_of([&] { Model::restore(1, 2, 2, not_unit, 1e6, 0); }) == ErrorCode::CorruptFile);
}
