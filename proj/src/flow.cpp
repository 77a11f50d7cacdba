#include "sl2/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sl2 {

FlowState::FlowState(const Sl2Element& a0, double t0) : a(a0), t(t0) {
    if (!(t0 >= 0.0)) throw std::invalid_argument("FlowState: t >= 0 required");
}

Sl2Element vector_field_w(const Sl2Element& a) {
    const Mat2 m = a.mat();
    return Sl2Element::from_matrix(cx(0.25) * commutator(m, commutator(m, adjoint(m))));
}

double theta(int j, double s) {
    if (s < 0.0) throw std::invalid_argument("theta: s >= 0 required");
    const double x = std::sqrt(s);
    switch (j) {
    case 1:
        if (x < 1e-4) return 1.0 - s / 3.0 + 2.0 * s * s / 15.0;
        return std::tanh(x) / x;
    case 2:
        return std::cosh(x);
    case 3:
        if (x < 1e-4) return 1.0 + s / 6.0 + s * s / 120.0;
        return std::sinh(x) / x;
    default:
        throw std::invalid_argument("theta: j in {1,2,3}");
    }
}

double theta_prime(int j, double s) {
    if (s < 0.0) throw std::invalid_argument("theta_prime: s >= 0 required");
    const double x = std::sqrt(s);
    switch (j) {
    case 1: {
        if (x < 1e-2) return -1.0 / 3.0 + 4.0 * s / 15.0 - 17.0 * s * s / 105.0;
        const double th = std::tanh(x);
        const double sech2 = 1.0 - th * th;
        return (sech2 / x - th / (x * x)) / (2.0 * x);
    }
    case 2:
        if (x < 1e-4) return 0.5 + s / 12.0;
        return std::sinh(x) / (2.0 * x);
    case 3:
        if (x < 1e-2) return 1.0 / 6.0 + s / 60.0 + s * s / 1680.0;
        return (std::cosh(x) / x - std::sinh(x) / (x * x)) / (2.0 * x);
    default:
        throw std::invalid_argument("theta_prime: j in {1,2,3}");
    }
}

namespace {

// tanh(|f| t) / |f|, continuous at f = 0.
double tanh_ratio(double af, double t) {
    const double u = af * t;
    if (u < 1e-8) return t * (1.0 - u * u / 3.0);
    return t * theta(1, u * u);
}

Mat2 g_t(const Mat2& m, double t) {
    const double af = std::abs(det(m));
    const double c = tanh_ratio(af, t);
    const HermitianPsd s(m * adjoint(m));
    auto f = [c](double x) { return std::sqrt(1.0 + c * std::max(x, 0.0)); };
    auto dd = [&](double lo, double hi) { return c / (f(hi) + f(lo)); };
    return hermitian_function(s, f, dd);
}

} // namespace

Sl2Element flow(const Sl2Element& a, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("flow: t >= 0 required");
    if (t == 0.0) return a;
    const Mat2 m = a.mat();
    const Mat2 g = g_t(m, t);
    return Sl2Element::from_matrix(inverse(g) * m * g);
}

Sl2Element flow(const FlowState& s) { return flow(s.a, s.t); }

Sl2Element flow_rk4(const Sl2Element& a, double t, int steps) {
    if (steps < 1) throw std::invalid_argument("flow_rk4: steps >= 1 required");
    if (t == 0.0) return a;
    auto w = [](const Mat2& m) { return cx(0.25) * commutator(m, commutator(m, adjoint(m))); };
    Mat2 m = a.mat();
    const double h = t / steps;
    for (int i = 0; i < steps; ++i) {
        const Mat2 k1 = w(m);
        const Mat2 k2 = w(m + cx(0.5 * h) * k1);
        const Mat2 k3 = w(m + cx(0.5 * h) * k2);
        const Mat2 k4 = w(m + cx(h) * k3);
        m = m + cx(h / 6.0) * (k1 + cx(2.0) * k2 + cx(2.0) * k3 + k4);
    }
    return Sl2Element::from_matrix(m);
}

double r_t_sq(const Sl2Element& a, double t) {
    const double r2 = norm_sq(a);
    const double u = 2.0 * std::abs(casimir(a));
    // u (u tanh(ut) + R^2) / (u + R^2 tanh(ut)) with tanh(ut) = u t theta_1.
    const double th = (u * t < 1e-8) ? 1.0 - (u * t) * (u * t) / 3.0 : theta(1, (u * t) * (u * t));
    return (r2 + u * u * t * th) / (1.0 + r2 * t * th);
}

double epsilon_t(const Sl2Element& a, double t) {
    const double r2 = norm_sq(a);
    const double x = 2.0 * std::abs(casimir(a)) * t;
    return 1.0 / (theta(2, x * x) + t * theta(3, x * x) * r2);
}

Mat2 k_t(const Sl2Element& a, double t) {
    const Mat2 m = a.mat();
    return cx(epsilon_t(a, t)) * commutator(m, adjoint(m));
}

Mat2 s_t(const Sl2Element& a, double t) {
    const Mat2 m = flow(a, t).mat();
    return m * adjoint(m);
}

double mu_eval(double u, int v, double t, double r) {
    if (u < 0.0 || v < 0 || std::abs(2.0 * u - std::round(2.0 * u)) > 1e-12) {
        throw std::invalid_argument("mu_eval: u in N/2, v in N");
    }
    const int p = std::min(static_cast<int>(std::lround(2.0 * u)), v);
    double acc = 0.0;
    for (int j = 0; j <= p; ++j) acc += std::pow(t, u - 0.5 * j) * std::pow(r, v - j);
    return acc;
}

double MuPoly::operator()(double t, double r) const { return mu_eval(u, v, t, r); }

namespace {

Sl2Element shifted(const Sl2Element& a, int i, double h) {
    auto v = a.real();
    v[i] += h;
    return Sl2Element::from_real(v);
}

Sl2Element combine(double ca, const Sl2Element& a, double cb, const Sl2Element& b) {
    return ca * a + cb * b;
}

// Richardson central difference along coordinate i of an element-valued map.
template <class F>
Sl2Element diff1(const F& fn, const Sl2Element& x, int i, double h) {
    const Sl2Element d1 = (0.5 / h) * (fn(shifted(x, i, h)) - fn(shifted(x, i, -h)));
    const Sl2Element d2 = (1.0 / h) * (fn(shifted(x, i, 0.5 * h)) - fn(shifted(x, i, -0.5 * h)));
    return combine(4.0 / 3.0, d2, -1.0 / 3.0, d1);
}

} // namespace

Sl2Element flow_derivative(const MultiIndex& a, const Sl2Element& base, double t) {
    const int n = std::accumulate(a.begin(), a.end(), 0);
    if (n > 2 || *std::min_element(a.begin(), a.end()) < 0) {
        throw std::invalid_argument("flow_derivative: |a| <= 2 required");
    }
    auto at = [t](const Sl2Element& x) { return flow(x, t); };
    const double r = std::sqrt(norm_sq(base));
    if (n == 0) return at(base);
    std::vector<int> dirs;
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < a[i]; ++k) dirs.push_back(i);
    if (n == 1) return diff1(at, base, dirs[0], 1e-4 * (1.0 + r));
    const double h = 2e-3 * (1.0 + r);
    auto inner = [&](const Sl2Element& x) { return diff1(at, x, dirs[1], 0.25 * h); };
    return diff1(inner, base, dirs[0], h);
}

BoundProbe flow_derivative_bound_probe(const MultiIndex& a, const std::vector<FlowState>& samples) {
    if (samples.empty()) throw std::invalid_argument("flow_derivative_bound_probe: empty sample set");
    const int n = std::accumulate(a.begin(), a.end(), 0);
    BoundProbe out{0.0, samples.size()};
    for (const auto& s : samples) {
        const double r = std::sqrt(norm_sq(s.a));
        const double mu = mu_eval(2.0 * n + 0.5, 3 * n + 2, s.t, r);
        if (mu <= 0.0) continue;
        const double d = std::sqrt(norm_sq(flow_derivative(a, s.a, s.t)));
        out.sup_ratio = std::max(out.sup_ratio, d / mu);
    }
    return out;
}

} // namespace sl2
