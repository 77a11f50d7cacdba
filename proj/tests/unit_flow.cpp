#include "doctest.h"
#include "test_support.hpp"

#include "sl2/flow.hpp"
#include "sl2/skeleton.hpp"

using namespace sl2;
using namespace sl2::testing;

namespace {
const cx I(0.0, 1.0);
const Sl2Element N = from_coords({0.0, -0.5, -0.5 * I});
} // namespace

TEST_CASE("vector field examples") {
    CHECK(norm_sq(vector_field_w(from_coords({1.0, 0.0, 0.0}))) == 0.0);
    CHECK(mat_dist(vector_field_w(N).mat(), Mat2{0.0, -0.5, 0.0, 0.0}) < 1e-16);
    Sampler rng(21);
    for (int k = 0; k < 10000; ++k) {
        const Sl2Element a = random_element(rng);
        const double r2 = norm_sq(a);
        const double af = std::abs(casimir(a));
        const double w2 = norm_sq(vector_field_w(a));
        CHECK(std::abs(w2 - 0.25 * r2 * (r2 * r2 - 4.0 * af * af)) < 1e-12 * (1.0 + r2 * r2 * r2));
        CHECK(trace(vector_field_w(a).mat()) == cx(0.0));
    }
}

TEST_CASE("flow examples") {
    const Sl2Element h = rho({{0.6, 0.0, 0.8}, cx(0.3, 1.1)});
    for (double t : {0.0, 0.5, 3.0, 100.0}) {
        CHECK(distance(flow(h, t), h) < 1e-14);
        const Mat2 expected{0.0, 1.0 / std::sqrt(1.0 + t), 0.0, 0.0};
        CHECK(mat_dist(flow(N, t).mat(), expected) < 1e-15);
    }
    CHECK_THROWS_AS(flow(N, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(FlowState(N, -0.1), std::invalid_argument);
}

TEST_CASE("closed form agrees with RK4") {
    Sampler rng(22);
    for (int k = 0; k < 20; ++k) {
        const Sl2Element a = random_element_radius(rng, 2.0);
        for (double t : {0.1, 1.0, 2.5}) {
            const int steps = static_cast<int>(std::lround(t / 1e-3));
            CHECK(distance(flow(a, t), flow_rk4(a, t, steps)) < 1e-8);
        }
    }
}

TEST_CASE("RK4 oracle is fourth order") {
    Sampler rng(23);
    const Sl2Element a = random_element_radius(rng, 2.0);
    const double t = 1.0;
    const double e1 = distance(flow(a, t), flow_rk4(a, t, 20));
    const double e2 = distance(flow(a, t), flow_rk4(a, t, 40));
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
    CHECK(distance(flow_rk4(a, 0.0, 5), a) == 0.0);
    const Sl2Element h = rho({{1.0, 0.0, 0.0}, 1.5});
    CHECK(distance(flow_rk4(h, 2.0, 10), h) < 1e-15);
}

TEST_CASE("invariants of the flow") {
    Sampler rng(24);
    for (int k = 0; k < 1000; ++k) {
        const Sl2Element a = random_element_radius(rng, 3.0);
        const double t = rng.uniform(0.0, 5.0);
        const Sl2Element at = flow(a, t);
        const double r2 = norm_sq(a);
        CHECK(std::abs(casimir(at) - casimir(a)) < 1e-10);
        CHECK(std::abs(r_t_sq(a, t) - norm_sq(at)) < 1e-9 * (1.0 + r2));
        const Mat2 kt = k_t(a, t);
        const Mat2 m = at.mat();
        CHECK(mat_dist(kt, commutator(m, adjoint(m))) < 1e-9 * (1.0 + r2));
        // Monotone toward 2|f|.
        CHECK(r_t_sq(a, t) <= r2 + 1e-12);
        CHECK(r_t_sq(a, t) >= 2.0 * std::abs(casimir(a)) - 1e-12);
    }
}

TEST_CASE("derived quantity examples") {
    for (double t : {0.0, 0.3, 2.0}) {
        CHECK(r_t_sq(N, t) == doctest::Approx(1.0 / (1.0 + t)));
        const Mat2 kt = k_t(N, t);
        CHECK(mat_dist(kt, Mat2{1.0 / (1.0 + t), 0.0, 0.0, -1.0 / (1.0 + t)}) < 1e-15);
    }
    const Sl2Element h = rho({{0.0, 1.0, 0.0}, cx(0.5, 0.5)});
    CHECK(r_t_sq(h, 4.0) == doctest::Approx(2.0 * std::abs(casimir(h))));
    CHECK(frob(k_t(h, 4.0)) < 1e-15);
}

TEST_CASE("time derivatives match the evolution equations") {
    Sampler rng(25);
    for (int k = 0; k < 200; ++k) {
        const Sl2Element a = random_element_radius(rng, 2.0);
        const double t = rng.uniform(0.1, 4.0);
        const double af = std::abs(casimir(a));
        const double rt2 = r_t_sq(a, t);

        const double dr = richardson_derivative([&](double s) { return norm_sq(flow(a, s)); }, t, 1e-3);
        const double rhs = 4.0 * af * af - rt2 * rt2;
        CHECK(std::abs(dr - rhs) <= 1e-6 * (1.0 + std::abs(rhs)));

        for (int e = 0; e < 4; ++e) {
            auto kc = [&](double s) {
                const Mat2 m = k_t(a, s);
                const cx v[4] = {m.a, m.b, m.c, m.d};
                return v[e];
            };
            auto sc = [&](double s) {
                const Mat2 m = s_t(a, s);
                const cx v[4] = {m.a, m.b, m.c, m.d};
                return v[e];
            };
            const Mat2 kt = k_t(a, t);
            const Mat2 st = s_t(a, t);
            const Mat2 krhs = cx(-rt2) * kt;
            const Mat2 srhs = Mat2::scalar(af * af) - st * st;
            const cx kv[4] = {krhs.a, krhs.b, krhs.c, krhs.d};
            const cx sv[4] = {srhs.a, srhs.b, srhs.c, srhs.d};
            for (int part = 0; part < 2; ++part) {
                auto pick = [part](cx z) { return part == 0 ? z.real() : z.imag(); };
                const double dk = richardson_derivative([&](double s) { return pick(kc(s)); }, t, 1e-3);
                const double ds = richardson_derivative([&](double s) { return pick(sc(s)); }, t, 1e-3);
                CHECK(std::abs(dk - pick(kv[e])) <= 1e-6 * (1.0 + frob(krhs)));
                CHECK(std::abs(ds - pick(sv[e])) <= 1e-6 * (1.0 + frob(srhs)));
            }
        }
    }
}

TEST_CASE("flow is SU(2) equivariant") {
    Sampler rng(26);
    for (int k = 0; k < 200; ++k) {
        const Sl2Element a = random_element(rng);
        const Su2Element u = random_su2(rng);
        const double t = rng.uniform(0.0, 5.0);
        CHECK(distance(flow(adjoint_action(u, a), t), adjoint_action(u, flow(a, t))) < 1e-10);
    }
}

TEST_CASE("long-time limit") {
    Sampler rng(27);
    const Sl2Element n = N;
    for (double t : {4.0, 100.0, 1e4}) CHECK(std::sqrt(norm_sq(flow(n, t))) <= 2.0 / std::sqrt(t));
    for (int k = 0; k < 100; ++k) {
        const Sl2Element a = random_element(rng);
        const double af = std::abs(casimir(a));
        if (af < 0.05) continue;
        const double t = std::log(1e8) / (2.0 * af);
        CHECK(distance(flow(a, t), retract(a).element()) < 1e-6);
    }
}

TEST_CASE("finite-integral inequality") {
    Sampler rng(28);
    for (int q = 1; q <= 3; ++q) {
        double c = 0.0;
        for (int k = 0; k < 2000; ++k) {
            const Sl2Element a = random_element_radius(rng, 5.0);
            const double t = 100.0 * std::pow(rng.uniform(), 3.0);
            const double r2 = norm_sq(a);
            const double lhs = epsilon_t(a, t) * std::pow(r_t_sq(a, t), q);
            const double rhs = std::pow(r2, q) / std::pow(1.0 + t * r2, q);
            c = std::max(c, lhs / rhs);
        }
        CHECK(c <= 4.0);
    }
}

TEST_CASE("mu polynomials") {
    CHECK(mu_eval(0.0, 0, 3.0, 5.0) == 1.0);
    // At t = 0 only the j = 1 term survives: mu_{1/2,2}(0, R) = R.
    CHECK(mu_eval(0.5, 2, 0.0, 2.0) == doctest::Approx(2.0));
    CHECK(mu_eval(1.0, 1, 4.0, 3.0) == doctest::Approx(4.0 * 3.0 + 2.0));
    CHECK(MuPoly{2.5, 5}(1.0, 1.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(mu_eval(0.3, 1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("theta functions") {
    for (int j = 1; j <= 3; ++j) CHECK(theta(j, 0.0) == 1.0);
    CHECK(theta(1, 4.0) == doctest::Approx(std::tanh(2.0) / 2.0));
    CHECK(theta(3, 4.0) == doctest::Approx(std::sinh(2.0) / 2.0));
    // Series branches against the closed forms just inside the switch points.
    const double x = std::sqrt(0.99e-8);
    CHECK(theta(1, x * x) == doctest::Approx(std::tanh(x) / x).epsilon(1e-15));
    CHECK(theta(3, x * x) == doctest::Approx(std::sinh(x) / x).epsilon(1e-15));
    const double y = std::sqrt(0.99e-4);
    const double th = std::tanh(y);
    CHECK(theta_prime(1, y * y) == doctest::Approx(((1.0 - th * th) / y - th / (y * y)) / (2.0 * y)).epsilon(1e-9));
    CHECK(theta_prime(3, y * y) ==
          doctest::Approx((std::cosh(y) / y - std::sinh(y) / (y * y)) / (2.0 * y)).epsilon(1e-9));
    for (int j = 1; j <= 3; ++j) {
        for (double s : {0.05, 0.7, 3.0, 20.0}) {
            const double fd = richardson_derivative([j](double u) { return theta(j, u); }, s, 1e-3 * s);
            CHECK(theta_prime(j, s) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
    double c = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        const double x = 50.0 * i / 5000.0;
        c = std::max(c, std::abs(theta_prime(1, x * x)) * std::pow(1.0 + x, 3));
    }
    CHECK(c < 10.0);
    CHECK(c >= 1.0 / 3.0);
}

TEST_CASE("derivative bound probes") {
    Sampler rng(29);
    std::vector<FlowState> samples;
    for (int k = 0; k < 400; ++k) samples.emplace_back(random_element_radius(rng, 3.0), rng.uniform(0.0, 10.0));
    std::vector<FlowState> zero_time;
    for (int k = 0; k < 400; ++k) zero_time.emplace_back(random_element_radius(rng, 3.0), 0.0);

    const MultiIndex none{};
    const auto p0 = flow_derivative_bound_probe(none, zero_time);
    CHECK(p0.sup_ratio <= 1.0);
    const auto p0t = flow_derivative_bound_probe(none, samples);
    CHECK(std::isfinite(p0t.sup_ratio));

    MultiIndex d1{};
    d1[2] = 1;
    std::vector<FlowState> half(samples.begin(), samples.begin() + 200);
    const double full = flow_derivative_bound_probe(d1, samples).sup_ratio;
    const double part = flow_derivative_bound_probe(d1, half).sup_ratio;
    CHECK(std::isfinite(full));
    CHECK(full <= 1.2 * part);

    MultiIndex d2{};
    d2[0] = 1;
    d2[4] = 1;
    CHECK(std::isfinite(flow_derivative_bound_probe(d2, samples).sup_ratio));
    CHECK_THROWS_AS(flow_derivative_bound_probe(d1, {}), std::invalid_argument);
}

TEST_CASE("flow derivative against an independent RK4 difference") {
    Sampler rng(30);
    const Sl2Element a = random_element_radius(rng, 1.5);
    const double t = 0.7;
    MultiIndex d{};
    d[3] = 1;
    const Sl2Element fd = flow_derivative(d, a, t);
    const double h = 1e-4;
    auto shifted = [&](double s) {
        auto v = a.real();
        v[3] += s;
        return flow_rk4(Sl2Element::from_real(v), t, 700);
    };
    const Sl2Element oracle = (0.5 / h) * (shifted(h) - shifted(-h));
    CHECK(distance(fd, oracle) < 1e-6);
}
