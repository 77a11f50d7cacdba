#include "doctest.h"
#include "test_support.hpp"

#include "sl2/matrix.hpp"

using namespace sl2;
using namespace sl2::testing;

namespace {
const cx I(0.0, 1.0);
}

TEST_CASE("from_coords examples") {
    const Mat2 h = from_coords({1.0, 0.0, 0.0}).mat();
    CHECK(mat_dist(h, Mat2{I, 0.0, 0.0, -I}) == 0.0);
    const Mat2 n = from_coords({0.0, -0.5, -0.5 * I}).mat();
    CHECK(mat_dist(n, Mat2{0.0, 1.0, 0.0, 0.0}) < 1e-16);
    CHECK(frob(from_coords({0.0, 0.0, 0.0}).mat()) == 0.0);
}

TEST_CASE("coordinate round trip is exact and trace vanishes") {
    Sampler rng(1);
    for (int k = 0; k < 1000; ++k) {
        const Coords z{cx(rng.normal(), rng.normal()), cx(rng.normal(), rng.normal()), cx(rng.normal(), rng.normal())};
        const Sl2Element a = from_coords(z);
        CHECK(to_coords(a) == z);
        CHECK(trace(a.mat()) == cx(0.0));
        const Sl2Element b = Sl2Element::from_matrix(a.mat());
        CHECK(distance(a, b) < 1e-15 * (1.0 + std::sqrt(norm_sq(a))));
    }
}

TEST_CASE("casimir and norm examples") {
    const Sl2Element h = from_coords({1.0, 0.0, 0.0});
    const Sl2Element n = from_coords({0.0, -0.5, -0.5 * I});
    CHECK(std::abs(casimir(h) - 1.0) < 1e-15);
    CHECK(std::abs(casimir(n)) < 1e-15);
    CHECK(norm_sq(h) == doctest::Approx(2.0));
    CHECK(norm_sq(n) == doctest::Approx(1.0));
}

TEST_CASE("casimir two formulas and norm-fiber inequality") {
    Sampler rng(2);
    for (int k = 0; k < 10000; ++k) {
        const Sl2Element a = random_element(rng);
        const double r2 = norm_sq(a);
        CHECK(std::abs(casimir(a) - casimir_coords(a)) < 1e-13 * (1.0 + r2));
        CHECK(2.0 * std::abs(casimir(a)) <= r2 + 1e-12);
        // R^2 = 2 |z|^2 as an independent formula.
        double z2 = 0.0;
        for (const cx& c : a.coords()) z2 += std::norm(c);
        CHECK(std::abs(r2 - 2.0 * z2) < 1e-13 * (1.0 + r2));
    }
}

TEST_CASE("characteristic identities") {
    Sampler rng(3);
    CHECK(char_residuals(from_coords({1.0, 0.0, 0.0})).square == 0.0);
    const auto rn = char_residuals(from_coords({0.0, -0.5, -0.5 * I}));
    CHECK(rn.square < 1e-16);
    CHECK(rn.quartic < 1e-16);
    for (int k = 0; k < 10000; ++k) {
        const Sl2Element a = random_element(rng, rng.uniform(0.1, 3.0));
        const double r2 = norm_sq(a);
        const auto res = char_residuals(a);
        CHECK(res.square < 1e-12 * (1.0 + r2 * r2));
        CHECK(res.quartic < 1e-12 * (1.0 + r2 * r2));
    }
}

TEST_CASE("hermitian sqrt") {
    const Mat2 one = Mat2::identity();
    CHECK(mat_dist(hermitian_sqrt(HermitianPsd(one)).mat(), one) < 1e-15);
    CHECK(mat_dist(hermitian_sqrt(HermitianPsd(Mat2{4.0, 0.0, 0.0, 1.0})).mat(), Mat2{2.0, 0.0, 0.0, 1.0}) < 1e-15);
    Sampler rng(4);
    for (int k = 0; k < 2000; ++k) {
        const Mat2 m = random_element(rng).mat() + Mat2::scalar(cx(rng.normal(), rng.normal()));
        const Mat2 h = m * adjoint(m);
        const Mat2 s = hermitian_sqrt(HermitianPsd(h)).mat();
        CHECK(mat_dist(s * s, h) < 1e-12 * (1.0 + frob(h)));
        const double c = rng.uniform(0.01, 100.0);
        const Mat2 sc = hermitian_sqrt(HermitianPsd(cx(c) * h)).mat();
        CHECK(mat_dist(sc, cx(std::sqrt(c)) * s) < 1e-12 * (1.0 + frob(sc)));
        const auto [lo, hi] = HermitianPsd(s).eigenvalues();
        CHECK(lo >= -1e-12);
        CHECK(hi >= lo);
    }
    // Rank one matrices stay psd under the square root.
    const Mat2 n{0.0, 1.0, 0.0, 0.0};
    const Mat2 p = n * adjoint(n);
    const Mat2 sp = hermitian_sqrt(HermitianPsd(p)).mat();
    CHECK(mat_dist(sp * sp, p) < 1e-15);
}

TEST_CASE("hermitian psd rejects invalid input") {
    CHECK_THROWS_AS(HermitianPsd(Mat2{1.0, 0.0, 0.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(HermitianPsd(Mat2{1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("su2 types validate") {
    CHECK_THROWS_AS(Su2Element(Mat2{2.0, 0.0, 0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Su2Algebra(Mat2::identity()), std::invalid_argument);
    Sampler rng(5);
    for (int k = 0; k < 100; ++k) {
        const std::array<double, 3> v{rng.normal(), rng.normal(), rng.normal()};
        const Su2Algebra x = Su2Algebra::from_vector(v);
        CHECK(frob_sq(x.mat()) == doctest::Approx(2.0 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])));
        const auto back = x.vector();
        for (int i = 0; i < 3; ++i) CHECK(back[i] == v[i]);
        const Su2Element u = su2_exp(x);
        CHECK(frob(u.mat() * adjoint(u.mat()) - Mat2::identity()) < 1e-14);
    }
}

TEST_CASE("haar quadrature normalization and invariance") {
    for (int order : {1, 2, 4, 6}) {
        double total = 0.0;
        for (const auto& n : su2_haar(order)) total += n.weight;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    const Sl2Element h = from_coords({1.0, 0.0, 0.0});
    const auto nodes = su2_haar(4);
    Sl2Element avg;
    for (const auto& n : nodes) {
        const Sl2Element b = adjoint_action(n.u, h);
        CHECK(std::abs(casimir(b) - casimir(h)) < 1e-12);
        CHECK(std::abs(norm_sq(b) - norm_sq(h)) < 1e-12);
        avg = avg + n.weight * b;
    }
    CHECK(std::sqrt(norm_sq(avg)) < 1e-12);

    // Monte-Carlo oracle: the mean shrinks like N^{-1/2}.
    const auto mc = su2_haar_mc(1000000, 99);
    Sl2Element mavg;
    for (const auto& n : mc) mavg = mavg + n.weight * adjoint_action(n.u, h);
    CHECK(std::sqrt(norm_sq(mavg)) < 5e-3);
}

TEST_CASE("haar moments match the class-function integrals") {
    // For Haar measure E|tr U|^2 = 1, E|tr U|^4 = 2 and E tr U = 0.
    auto moments = [](const std::vector<Su2Node>& nodes) {
        std::array<double, 3> m{};
        for (const auto& n : nodes) {
            const double t = trace(n.u.mat()).real();
            m[0] += n.weight * t;
            m[1] += n.weight * t * t;
            m[2] += n.weight * t * t * t * t;
        }
        return m;
    };
    const auto q = moments(su2_haar(5));
    CHECK(std::abs(q[0]) < 1e-12);
    CHECK(q[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q[2] == doctest::Approx(2.0).epsilon(1e-12));

    // Same moments through the exponential-coordinate density.
    std::array<double, 3> e{};
    double total = 0.0;
    for (const auto& n : su2_exp_ball(8)) {
        const double t = trace(su2_exp(n.x).mat()).real();
        total += n.weight;
        e[0] += n.weight * t;
        e[1] += n.weight * t * t;
        e[2] += n.weight * t * t * t * t;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e[0]) < 1e-10);
    CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e[2] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("exponential density integrates to one without normalization") {
    // Radial integral 4 pi int_0^pi th^2 (sin th / th)^2 / (2 pi^2) dth = 1.
    const QuadRule rad = gauss_legendre(40, 0.0, M_PI);
    double mass = 0.0;
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
        const double th = rad.x[i];
        mass += rad.w[i] * 4.0 * M_PI * th * th * haar_exp_density(Su2Algebra::from_vector({0.0, 0.0, th}));
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ad is the derivative of Ad along exp") {
    Sampler rng(6);
    const Sl2Element a = random_element(rng);
    const std::array<double, 3> v{0.3, -0.2, 0.5};
    const double h = 1e-5;
    const Sl2Element plus = adjoint_action(su2_exp(Su2Algebra::from_vector({h * v[0], h * v[1], h * v[2]})), a);
    const Sl2Element minus = adjoint_action(su2_exp(Su2Algebra::from_vector({-h * v[0], -h * v[1], -h * v[2]})), a);
    const Sl2Element fd = (0.5 / h) * (plus - minus);
    CHECK(distance(fd, ad(Su2Algebra::from_vector(v), a)) < 1e-8);
}
