#include "doctest.h"
#include "test_support.hpp"

#include "sl2/flow.hpp"
#include "sl2/homotopy.hpp"
#include "sl2/skeleton.hpp"

#include <cmath>

using namespace sl2;
using namespace sl2::testing;

namespace {

const Variance kCo = Variance::Covariant;

double r2_of(const Point6& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 2.0 * s;
}

// e^{-c/R^2} dx_i ^ dx_j, flat at the origin.
FieldHandle flat_form(double c = 1.0, int i = 0, int j = 1) {
    return FieldHandle(
        [c, i, j](const Point6& x) {
            const double r2 = r2_of(x);
            const double g = r2 > 0.0 ? std::exp(-c / r2) : 0.0;
            return g * PointTensor::basis(Variance::Covariant, {i, j});
        },
        2, kCo, 1e-3);
}

// A polynomial 1-form with every coordinate involved.
FieldHandle poly_one_form() {
    return FieldHandle(
        [](const Point6& x) {
            PointTensor a(1, Variance::Covariant);
            a.set_mask(1u << 0, x[1] + 0.5 * x[3] * x[4]);
            a.set_mask(1u << 1, x[2] * x[0] - x[5]);
            a.set_mask(1u << 4, 0.3 * x[0] * x[0] + x[3]);
            a.set_mask(1u << 5, x[1] * x[2]);
            return a;
        },
        1, kCo, 1e-2);
}

FieldHandle g_of_f() {
    return FieldHandle(
        [](const Point6& x) {
            const cx f = casimir(from_point(x));
            return PointTensor::scalar(std::sin(f.real()) + f.imag() * f.imag());
        },
        0, kCo, 1e-3);
}

Point6 sample_point(Sampler& rng, double rmin, double rmax) {
    const Point6 x = random_point(rng);
    const double r = std::sqrt(r2_of(x));
    const double target = rng.uniform(rmin, rmax);
    Point6 y;
    for (int i = 0; i < 6; ++i) y[i] = x[i] * target / r;
    return y;
}

// Point with |f| bounded below relative to R^2.
Point6 regular_point(Sampler& rng) {
    for (;;) {
        const Point6 x = sample_point(rng, 0.6, 1.6);
        if (std::abs(casimir(from_point(x))) > 0.2 * r2_of(x)) return x;
    }
}

} // namespace

TEST_CASE("time rule weights are positive and integrate both decay shapes") {
    for (Substitution sub : {Substitution::Geometric, Substitution::Rational}) {
        const QuadratureSpec q{8, 6, sub};
        const QuadRule r = time_rule(5.0, 0.7, 2.0, q);
        CHECK(r.x.size() == 48u);
        double sum = 0.0, e = 0.0, alg = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            CHECK(r.w[i] > 0.0);
            CHECK(r.x[i] > 0.0);
            CHECK(r.x[i] < 5.0);
            sum += r.w[i];
            e += r.w[i] * std::exp(-1.4 * r.x[i]);
            alg += r.w[i] / ((1.0 + 2.0 * r.x[i]) * (1.0 + 2.0 * r.x[i]));
        }
        // The rational map is not polynomial, so constants integrate only approximately.
        CHECK(sum == doctest::Approx(5.0).epsilon(sub == Substitution::Geometric ? 1e-12 : 1e-4));
        CHECK(e == doctest::Approx((1.0 - std::exp(-7.0)) / 1.4).epsilon(sub == Substitution::Geometric ? 1e-10 : 1e-4));
        CHECK(alg == doctest::Approx(0.5 * (1.0 - 1.0 / 11.0)).epsilon(1e-10));
    }
    CHECK(time_rule(0.0, 1.0, 1.0, {}).x.empty());
    CHECK_THROWS_AS(time_rule(1.0, 1.0, 1.0, {1, 3, Substitution::Geometric}), std::invalid_argument);
}

TEST_CASE("pullback at t = 0 and invariance of df") {
    Sampler rng(11);
    const FieldHandle a = flat_form();
    for (int k = 0; k < 10; ++k) {
        const Point6 x = sample_point(rng, 0.3, 2.0);
        CHECK(tensor_dist(pullback_flow(a, 0.0, x), a(x)) == 0.0);
        for (int i : {1, 2}) {
            const FieldHandle df = dcasimir_field(i);
            for (double t : {0.1, 1.0, 7.0}) CHECK(tensor_dist(pullback_flow(df, t, x), df(x)) < 1e-8);
        }
    }
    CHECK_THROWS_AS(pullback_flow(a, -1.0, Point6{1, 0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("pullback of g(f) dx1 matches a chain-rule oracle on the RK4 flow") {
    // (phi_t^* (h dx1))_x = h(phi_t x) d(phi_t)_1, with d(phi_t)_1 from the
    // RK4 integrator and plain central differences.
    const FieldHandle form(
        [](const Point6& x) {
            const double g = std::cos(casimir(from_point(x)).real()) + 0.1 * x[2];
            return g * PointTensor::basis(Variance::Covariant, {0});
        },
        1, kCo);
    Sampler rng(12);
    for (int k = 0; k < 5; ++k) {
        const Point6 x = sample_point(rng, 0.5, 1.5);
        const double t = rng.uniform(0.2, 2.0);
        const PointTensor got = pullback_flow(form, t, x);
        CHECK(got.degree() == 1);
        const Point6 y = to_point(flow_rk4(from_point(x), t, 400));
        const double g = std::cos(casimir(from_point(y)).real()) + 0.1 * y[2];
        for (int j = 0; j < 6; ++j) {
            const double h = 1e-5;
            Point6 p = x, m = x;
            p[j] += h;
            m[j] -= h;
            const double d = (to_point(flow_rk4(from_point(p), t, 400))[0] - to_point(flow_rk4(from_point(m), t, 400))[0]) / (2 * h);
            CHECK(std::abs(got.at_mask(1u << j) - g * d) < 1e-7);
        }
    }
}

TEST_CASE("h_t vanishes at t = 0 and on df") {
    Sampler rng(13);
    for (int k = 0; k < 5; ++k) {
        const Point6 x = sample_point(rng, 0.3, 2.0);
        CHECK(h_t(flat_form(), 0.0, x).max_abs() == 0.0);
        CHECK(h_t(dcasimir_field(1), 3.0, x).max_abs() < 1e-9);
        CHECK(h_t(dcasimir_field(2), 3.0, x).max_abs() < 1e-9);
    }
    CHECK_THROWS_AS(h_t(g_of_f(), 1.0, Point6{1, 0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("Cartan homotopy identity at finite time") {
    const FieldHandle a = flat_form();
    const FieldHandle da = exterior_derivative_field(a, 1e-3);
    Sampler rng(14);
    const double t = 1.0;
    const QuadratureSpec fine{8, 6, Substitution::Automatic};
    const QuadratureSpec coarse{2, 1, Substitution::Automatic};
    double worst = 0.0, worst_coarse = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Point6 x = sample_point(rng, 0.4, 1.8);
        auto residual = [&](const QuadratureSpec& q) {
            const PointTensor lhs = pullback_flow(a, t, x) - a(x);
            const PointTensor dh = exterior_derivative(h_t_field(a, t, q, 1e-3), x);
            const PointTensor hd = h_t(da, t, x, q);
            return (lhs - dh - hd).max_abs();
        };
        const double r = residual(fine);
        worst = std::max(worst, r);
        if (k < 5) {
            const double rc = residual(coarse);
            worst_coarse = std::max(worst_coarse, rc);
            CHECK(r <= 0.5 * rc);
        }
    }
    MESSAGE("Cartan residual fine " << worst << " coarse " << worst_coarse);
    CHECK(worst < 1e-4);
}

TEST_CASE("h_t refinement check and commuting with phi") {
    Sampler rng(15);
    const FieldHandle a = flat_form(1.0, 0, 4);
    const FieldHandle pa = wedge(phi_field(), a);
    for (int k = 0; k < 5; ++k) {
        const Point6 x = sample_point(rng, 0.4, 1.8);
        const QuadratureCheck c = h_t_checked(a, 2.0, x, {8, 6, Substitution::Automatic}, 1e-8);
        CHECK(c.converged);
        CHECK(c.refinement_delta < 1e-8);
        const PointTensor lhs = h_t(pa, 2.0, x);
        const PointTensor rhs = wedge(phi(x), h_t(a, 2.0, x));
        CHECK(tensor_dist(lhs, rhs) < 1e-7);
    }
    // A coarse rule on a long interval fails the check and says so.
    const Point6 x{0.9, 0.1, -0.3, 0.2, 0.5, 0.1};
    const QuadratureCheck bad = h_t_checked(a, 50.0, x, {2, 1, Substitution::Geometric}, 1e-10);
    CHECK_FALSE(bad.converged);
}

TEST_CASE("p_skeleton against the retraction, idempotence and phi") {
    Sampler rng(16);
    const FieldHandle a = poly_one_form();
    const FieldHandle pa = wedge(phi_field(), a);
    for (int k = 0; k < 8; ++k) {
        const Point6 x = regular_point(rng);
        const SkeletonProjection p = p_skeleton(a, x);
        CHECK(p.decay < 1e-8);
        CHECK(tensor_dist(p.value, retract_pullback(a, x)) < 1e-5);
        CHECK(tensor_dist(pullback_flow(a, 2.0 * p.time, x), p.value) < 1e-6);
        CHECK(tensor_dist(p_skeleton(pa, x).value, wedge(phi(x), p.value)) < 1e-6);
    }
    // Functions are fixed on the skeleton.
    const FieldHandle g = g_of_f();
    for (int k = 0; k < 5; ++k) {
        const Point6 s = to_point(retract(from_point(regular_point(rng))).element());
        CHECK(std::abs(p_skeleton(g, s).value.at_mask(0) - g(s).at_mask(0)) < 1e-12);
    }
    // On the nilpotent cone T is capped and the achieved decay reported.
    const Point6 n = to_point(from_coords({0.0, -0.5, cx(0.0, -0.5)}));
    const SkeletonProjection pn = p_skeleton(a, n, 100.0);
    CHECK(pn.time == 100.0);
    CHECK(pn.decay == 1.0);
}

TEST_CASE("SU(2) average fixes invariants and is idempotent") {
    Sampler rng(17);
    const FieldHandle g = g_of_f();
    const FieldHandle df = dcasimir_field(1);
    const FieldHandle a = poly_one_form();
    const int order = 6;
    const FieldHandle avg([a](const Point6& x) { return average_su2(a, x, order); }, 1, kCo);
    for (int k = 0; k < 4; ++k) {
        const Point6 x = sample_point(rng, 0.3, 1.5);
        CHECK(std::abs(average_su2(g, x, order).at_mask(0) - g(x).at_mask(0)) < 1e-8);
        CHECK(tensor_dist(average_su2(df, x, order), df(x)) < 1e-8);
        const PointTensor once = avg(x);
        CHECK(tensor_dist(average_su2(avg, x, 3), once) < 1e-8);
        // Two quadratures of the same Haar integral.
        CHECK(tensor_dist(average_su2_exp(a, x, 8), once) < 1e-6);
        // The average is an invariant form.
        const Su2Element u = random_su2(rng);
        const Mat6 m = ad_matrix(u);
        Point6 ux{};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) ux[i] += m[i][j] * x[j];
        CHECK(tensor_dist(pull_back(avg(ux), m), once) < 1e-8);
    }
}

TEST_CASE("SU(2) homotopy relation for a polynomial form") {
    const FieldHandle a = poly_one_form();
    const FieldHandle da = exterior_derivative_field(a, 1e-2);
    const int order = 6;
    const FieldHandle h = h_su2_field(a, order, 1e-2);
    Sampler rng(18);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Point6 x = sample_point(rng, 0.3, 1.5);
        const PointTensor res = average_su2(a, x, order) - a(x) - exterior_derivative(h, x) - h_su2(da, x, order);
        worst = std::max(worst, res.max_abs());
    }
    MESSAGE("SU(2) homotopy residual " << worst);
    CHECK(worst < 1e-3);
}

TEST_CASE("SLB probe ratio for h_T is stable under sample doubling") {
    // Recorded ratios, not bounds: ||h_T a||_{0,k,r} / ||a||_{0,k+35,r}.
    const double r = 1.0, k = 1.0;
    const QuadratureSpec q{4, 4, Substitution::Automatic};
    for (double c : {0.5, 1.0}) {
        const FieldHandle a = flat_form(c);
        const FieldHandle ha = h_t_field(a, 5.0, q);
        const double r1 = sampled_weighted_sup(ha, r, k, 512) / sampled_weighted_sup(a, r, k + 35, 512);
        const double r2 = sampled_weighted_sup(ha, r, k, 1024) / sampled_weighted_sup(a, r, k + 35, 1024);
        MESSAGE("c=" << c << " ratio " << r1 << " -> " << r2);
        CHECK(std::isfinite(r2));
        CHECK(r2 < 2.0 * r1);
        CHECK(r2 > 0.5 * r1);
    }
}
