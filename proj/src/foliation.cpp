#include "sl2/foliation.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2 {

namespace {

constexpr int kCyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
constexpr auto kContra = Variance::Contravariant;
constexpr auto kCo = Variance::Covariant;

Point6 unit(int k) {
    Point6 e{};
    e[k] = 1.0;
    return e;
}

double r_sq(const Point6& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 2.0 * s;
}

void check_nonzero(const Point6& x, const char* who) {
    if (r_sq(x) < 1e-20) throw std::invalid_argument(std::string(who) + ": point too close to the origin");
}

void check_index(int i, const char* who) {
    if (i != 1 && i != 2) throw std::invalid_argument(std::string(who) + ": index must be 1 or 2");
}

// The linear bivectors before any normalization.
PointTensor linear_pi(int i, const Point6& x) {
    PointTensor out(2, kContra);
    for (const auto& c : kCyc) {
        const int a = c[0], j = c[1], k = c[2];
        const PointTensor pa = PointTensor::basis(kContra, {j, k}) - PointTensor::basis(kContra, {j + 3, k + 3});
        const PointTensor pb = PointTensor::basis(kContra, {j, k + 3}) + PointTensor::basis(kContra, {j + 3, k});
        if (i == 1) {
            out += x[a] * pa + x[a + 3] * pb;
        } else {
            out += x[a + 3] * pa - x[a] * pb;
        }
    }
    return out;
}

PointTensor linear_v(int i, const Point6& x) {
    PointTensor out(1, kContra);
    for (int j = 0; j < 3; ++j) {
        if (i == 1) {
            out.set_mask(1u << j, x[j]);
            out.set_mask(1u << (j + 3), -x[j + 3]);
        } else {
            out.set_mask(1u << j, x[j + 3]);
            out.set_mask(1u << (j + 3), x[j]);
        }
    }
    return out;
}

// R^2 omega~_i / 2.
PointTensor linear_omega(int i, const Point6& x) {
    PointTensor out(2, kCo);
    for (const auto& c : kCyc) {
        const int a = c[0], j = c[1], k = c[2];
        const PointTensor qa = PointTensor::basis(kCo, {j + 3, k + 3}) - PointTensor::basis(kCo, {j, k});
        const PointTensor qb = PointTensor::basis(kCo, {j, k + 3}) + PointTensor::basis(kCo, {j + 3, k});
        if (i == 1) {
            out += x[a] * qa - x[a + 3] * qb;
        } else {
            out += x[a + 3] * qa + x[a] * qb;
        }
    }
    return out;
}

// Field c * L(x) / R^2 with L linear, and its analytic partials.
FieldHandle quotient_field(std::function<PointTensor(const Point6&)> lin, double c, int degree, Variance v,
                           const char* who) {
    auto eval = [lin, c, who](const Point6& x) {
        check_nonzero(x, who);
        return (c / r_sq(x)) * lin(x);
    };
    auto deriv = [lin, c, who](const Point6& x, int k) {
        check_nonzero(x, who);
        const double r2 = r_sq(x);
        return (c / r2) * lin(unit(k)) - (4.0 * x[k] * c / (r2 * r2)) * lin(x);
    };
    return FieldHandle(eval, degree, v, 1e-4, deriv);
}

} // namespace

Point6 to_point(const Sl2Element& a) { return a.real(); }
Sl2Element from_point(const Point6& x) { return Sl2Element::from_real(x); }

PointTensor pi(int i, const Point6& x) {
    check_index(i, "pi");
    return linear_pi(i, x);
}

FieldHandle pi_field(int i) {
    check_index(i, "pi_field");
    return FieldHandle([i](const Point6& x) { return linear_pi(i, x); }, 2, kContra, 1e-3,
                       [i](const Point6&, int k) { return linear_pi(i, unit(k)); });
}

PointTensor vfield_v(int i, const Point6& x) {
    check_index(i, "vfield_v");
    check_nonzero(x, "vfield_v");
    return (1.0 / r_sq(x)) * linear_v(i, x);
}

FieldHandle vfield_v_field(int i) {
    check_index(i, "vfield_v_field");
    return quotient_field([i](const Point6& x) { return linear_v(i, x); }, 1.0, 1, kContra, "vfield_v");
}

PointTensor omega_tilde(int i, const Point6& x) {
    check_index(i, "omega_tilde");
    check_nonzero(x, "omega_tilde");
    return (2.0 / r_sq(x)) * linear_omega(i, x);
}

FieldHandle omega_tilde_field(int i) {
    check_index(i, "omega_tilde_field");
    return quotient_field([i](const Point6& x) { return linear_omega(i, x); }, 2.0, 2, kCo, "omega_tilde");
}

PointTensor d_omega_tilde(int i, const Point6& x) {
    return exterior_derivative(omega_tilde_field(i), x);
}

PointTensor gamma(int i, const Point6& x) {
    check_index(i, "gamma");
    return interior(vfield_v(i, x), d_omega_tilde(1, x));
}

FieldHandle gamma_field(int i) {
    check_index(i, "gamma_field");
    return FieldHandle([i](const Point6& x) { return gamma(i, x); }, 2, kCo, 1e-3);
}

double casimir_part(int i, const Point6& x) {
    check_index(i, "casimir_part");
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += (i == 1) ? x[j] * x[j] - x[j + 3] * x[j + 3] : 2.0 * x[j] * x[j + 3];
    return s;
}

PointTensor dcasimir(int i, const Point6& x) {
    check_index(i, "dcasimir");
    PointTensor out(1, kCo);
    for (int j = 0; j < 3; ++j) {
        if (i == 1) {
            out.set_mask(1u << j, 2.0 * x[j]);
            out.set_mask(1u << (j + 3), -2.0 * x[j + 3]);
        } else {
            out.set_mask(1u << j, 2.0 * x[j + 3]);
            out.set_mask(1u << (j + 3), 2.0 * x[j]);
        }
    }
    return out;
}

FieldHandle casimir_field(int i) {
    check_index(i, "casimir_field");
    return FieldHandle([i](const Point6& x) { return PointTensor::scalar(casimir_part(i, x)); }, 0, kContra, 1e-3,
                       [i](const Point6& x, int k) { return PointTensor::scalar(dcasimir(i, x).at_mask(1u << k)); });
}

FieldHandle dcasimir_field(int i) {
    check_index(i, "dcasimir_field");
    return FieldHandle([i](const Point6& x) { return dcasimir(i, x); }, 1, kCo, 1e-3,
                       [i](const Point6&, int k) { return dcasimir(i, unit(k)); });
}

PointTensor phi(const Point6& x) { return wedge(dcasimir(1, x), dcasimir(2, x)); }

FieldHandle phi_field() { return wedge(dcasimir_field(1), dcasimir_field(2)); }

PointTensor cartan_trivector(CartanPart part) {
    auto b = [](std::initializer_list<int> idx) { return PointTensor::basis(kContra, idx); };
    // Indices: x1 x2 x3 y1 y2 y3 = 0 1 2 3 4 5.
    PointTensor c(3, kContra);
    if (part == CartanPart::Real) {
        c = b({0, 1, 2}) - b({3, 4, 2}) - b({0, 4, 5}) - b({3, 1, 5});
    } else {
        c = b({3, 4, 5}) - b({3, 1, 2}) - b({0, 4, 2}) - b({0, 1, 5});
    }
    return 0.5 * c;
}

PointTensor poisson_diff(const FieldHandle& p, const Point6& x) { return schouten(pi_field(1), p, x); }

FieldHandle poisson_diff_field(const FieldHandle& p, double step) { return schouten_field(pi_field(1), p, step); }

Point6 drho_sphere(const DesingCoords& d, const std::array<double, 3>& u) {
    const double l1 = d.lambda.real();
    const double l2 = d.lambda.imag();
    return {l1 * u[0], l1 * u[1], l1 * u[2], l2 * u[0], l2 * u[1], l2 * u[2]};
}

Point6 drho_lambda(const DesingCoords& d, int j) {
    check_index(j, "drho_lambda");
    const auto& w = d.w;
    if (j == 1) return {w[0], w[1], w[2], 0.0, 0.0, 0.0};
    return {0.0, 0.0, 0.0, w[0], w[1], w[2]};
}

std::array<std::array<double, 3>, 2> sphere_frame(const std::array<double, 3>& w) {
    std::array<double, 3> a{1.0, 0.0, 0.0};
    if (std::abs(w[0]) > 0.8) a = {0.0, 1.0, 0.0};
    const double aw = a[0] * w[0] + a[1] * w[1] + a[2] * w[2];
    std::array<double, 3> e1{a[0] - aw * w[0], a[1] - aw * w[1], a[2] - aw * w[2]};
    const double n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& v : e1) v /= n;
    const std::array<double, 3> e2{w[1] * e1[2] - w[2] * e1[1], w[2] * e1[0] - w[0] * e1[2],
                                   w[0] * e1[1] - w[1] * e1[0]};
    return {e1, e2};
}

} // namespace sl2
