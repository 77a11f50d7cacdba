#include "sl2/homotopy.hpp"

#include "sl2/flow.hpp"
#include "sl2/skeleton.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace sl2 {

namespace {

double norm_r(const Point6& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(2.0 * s);
}

bool rational(double t, double af, double r2, const QuadratureSpec& q) {
    if (q.substitution == Substitution::Automatic) return !(af * t > 1e-3 * (1.0 + r2 * t));
    return q.substitution == Substitution::Rational;
}

// Initial time scale of the integrand.
double time_scale(double af, double r2) { return 1.0 / (1.0 + r2 + 2.0 * af); }

// Geometric breakpoints on [0, t]: one panel of width s0, then growth to t.
std::vector<double> breakpoints(double t, double af, double r2, int p) {
    std::vector<double> b(p + 1, 0.0);
    const double s0 = time_scale(af, r2);
    if (t <= s0 * p || p == 1) {
        for (int k = 0; k <= p; ++k) b[k] = t * k / p;
    } else {
        for (int k = 1; k <= p; ++k) b[k] = s0 * std::pow(t / s0, double(k - 1) / (p - 1));
    }
    return b;
}

Point6 flow_map(const Point6& x, double t) { return to_point(flow(from_point(x), t)); }

PointTensor to_covariant(const PointTensor& p) {
    PointTensor c(p.degree(), Variance::Covariant);
    for (unsigned m : PointTensor::masks(p.degree())) c.set_mask(m, p.at_mask(m));
    return c;
}

Mat6 invert(const Mat6& m) {
    Eigen::Matrix<double, 6, 6> e;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) e(i, j) = m[i][j];
    const auto lu = e.fullPivLu();
    if (!lu.isInvertible()) throw std::domain_error("pull_back: singular Jacobian");
    const Eigen::Matrix<double, 6, 6> inv = lu.inverse();
    Mat6 out{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out[i][j] = inv(i, j);
    return out;
}

void check_finite(const Mat6& j) {
    for (const auto& row : j)
        for (double v : row)
            if (!std::isfinite(v)) throw std::domain_error("jacobian: non-finite difference quotient");
}

} // namespace

QuadRule time_rule(double t, double af, double r2, const QuadratureSpec& q) {
    if (q.order < 2 || q.panels < 1) throw std::invalid_argument("time_rule: need order >= 2 and panels >= 1");
    if (t < 0.0) throw std::invalid_argument("time_rule: t < 0");
    QuadRule out;
    if (t == 0.0) return out;
    if (rational(t, af, r2, q)) {
        // s = c tau / (1 - tau), uniform panels in tau.
        const double c = time_scale(af, r2);
        const double tau_max = t / (c + t);
        for (int k = 0; k < q.panels; ++k) {
            const QuadRule g = gauss_legendre(q.order, tau_max * k / q.panels, tau_max * (k + 1) / q.panels);
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double tau = g.x[i];
                out.x.push_back(c * tau / (1.0 - tau));
                out.w.push_back(g.w[i] * c / ((1.0 - tau) * (1.0 - tau)));
            }
        }
        return out;
    }
    const auto b = breakpoints(t, af, r2, q.panels);
    for (int k = 0; k < q.panels; ++k) {
        const QuadRule g = gauss_legendre(q.order, b[k], b[k + 1]);
        out.x.insert(out.x.end(), g.x.begin(), g.x.end());
        out.w.insert(out.w.end(), g.w.begin(), g.w.end());
    }
    return out;
}

PointTensor w_vector(const Point6& x) {
    const Point6 w = to_point(vector_field_w(from_point(x)));
    PointTensor v(1, Variance::Contravariant);
    for (int i = 0; i < 6; ++i) v.set_mask(1u << i, w[i]);
    return v;
}

Mat6 jacobian(const std::function<Point6(const Point6&)>& map, const Point6& x, double h) {
    Mat6 j{};
    for (int k = 0; k < 6; ++k) {
        auto diff = [&](double step) {
            Point6 p = x, m = x;
            p[k] += step;
            m[k] -= step;
            const Point6 fp = map(p), fm = map(m);
            Point6 d{};
            for (int i = 0; i < 6; ++i) d[i] = (fp[i] - fm[i]) / (2.0 * step);
            return d;
        };
        const Point6 d1 = diff(h), d2 = diff(0.5 * h);
        for (int i = 0; i < 6; ++i) j[i][k] = (4.0 * d2[i] - d1[i]) / 3.0;
    }
    check_finite(j);
    return j;
}

PointTensor pull_back(const PointTensor& value, const Mat6& jac) {
    const int p = value.degree();
    if (p == 0) return value;
    PointTensor out(p, value.variance());
    if (value.variance() == Variance::Covariant) {
        for (unsigned m : PointTensor::masks(p)) {
            std::vector<Point6> cols;
            for (int i = 0; i < 6; ++i)
                if (m & (1u << i)) {
                    Point6 c{};
                    for (int r = 0; r < 6; ++r) c[r] = jac[r][i];
                    cols.push_back(c);
                }
            out.set_mask(m, evaluate(value, cols));
        }
        return out;
    }
    // Multivectors move by the inverse differential.
    const Mat6 inv = invert(jac);
    const PointTensor cov = to_covariant(value);
    for (unsigned m : PointTensor::masks(p)) {
        std::vector<Point6> rows;
        for (int i = 0; i < 6; ++i)
            if (m & (1u << i)) rows.push_back(inv[i]);
        out.set_mask(m, evaluate(cov, rows));
    }
    return out;
}

double flow_jacobian_step(const Point6& x, double t) {
    const double scale = 1.0 + norm_r(x);
    return std::max(1e-4 * scale / (1.0 + t), 1e-7 * scale);
}

PointTensor pullback_flow(const FieldHandle& form, double t, const Point6& x) {
    if (t < 0.0) throw std::invalid_argument("pullback_flow: t < 0");
    if (t == 0.0) return form(x);
    const Mat6 j = jacobian([t](const Point6& p) { return flow_map(p, t); }, x, flow_jacobian_step(x, t));
    return pull_back(form(flow_map(x, t)), j);
}

PointTensor h_t(const FieldHandle& form, double t, const Point6& x, const QuadratureSpec& q) {
    if (form.variance() != Variance::Covariant || form.degree() < 1)
        throw std::invalid_argument("h_t: form of degree >= 1 required");
    PointTensor acc(form.degree() - 1, Variance::Covariant);
    if (t == 0.0) return acc;
    const Sl2Element a = from_point(x);
    const QuadRule rule = time_rule(t, std::abs(casimir(a)), norm_sq(a), q);
    const PointTensor w = w_vector(x);
    std::vector<PointTensor> terms(rule.x.size());
    parallel_for(rule.x.size(), [&](std::size_t i) {
        terms[i] = rule.w[i] * interior(w, pullback_flow(form, rule.x[i], x));
    });
    for (const auto& term : terms) acc += term;
    return acc;
}

QuadratureCheck h_t_checked(const FieldHandle& form, double t, const Point6& x, const QuadratureSpec& q, double tol) {
    const PointTensor coarse = h_t(form, t, x, q);
    const PointTensor fine = h_t(form, t, x, q.refined());
    const double delta = (fine - coarse).max_abs();
    return {fine, delta, delta <= 10.0 * tol};
}

FieldHandle h_t_field(const FieldHandle& form, double t, const QuadratureSpec& q, double step) {
    return FieldHandle([form, t, q](const Point6& x) { return h_t(form, t, x, q); }, form.degree() - 1,
                       Variance::Covariant, step);
}

SkeletonProjection p_skeleton(const FieldHandle& form, const Point6& x, double max_time) {
    const double af = std::abs(casimir(from_point(x)));
    const double target = std::log(1e8) / 2.0;
    const double t = af > target / max_time ? target / af : max_time;
    return {pullback_flow(form, t, x), t, std::exp(-2.0 * af * t)};
}

PointTensor retract_pullback(const FieldHandle& form, const Point6& x) {
    auto r = [](const Point6& p) { return to_point(retract(from_point(p)).element()); };
    const Mat6 j = jacobian(r, x, 1e-4 * (1.0 + norm_r(x)));
    return pull_back(form(r(x)), j);
}

Mat6 ad_matrix(const Su2Element& u) {
    Mat6 m{};
    for (int k = 0; k < 6; ++k) {
        Point6 e{};
        e[k] = 1.0;
        const Point6 col = to_point(adjoint_action(u, from_point(e)));
        for (int i = 0; i < 6; ++i) m[i][k] = col[i];
    }
    return m;
}

namespace {

Point6 apply(const Mat6& m, const Point6& x) {
    Point6 y{};
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k) y[i] += m[i][k] * x[k];
    return y;
}

PointTensor transported(const FieldHandle& field, const Mat6& m, const Point6& x) {
    return pull_back(field(apply(m, x)), m);
}

} // namespace

PointTensor average_su2(const FieldHandle& field, const Point6& x, int order) {
    if (order < 1) throw std::invalid_argument("average_su2: order >= 1");
    const auto nodes = su2_haar(order);
    std::vector<PointTensor> terms(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        terms[i] = nodes[i].weight * transported(field, ad_matrix(nodes[i].u), x);
    });
    PointTensor acc(field.degree(), field.variance());
    for (const auto& t : terms) acc += t;
    return acc;
}

PointTensor average_su2_exp(const FieldHandle& field, const Point6& x, int order) {
    if (order < 1) throw std::invalid_argument("average_su2_exp: order >= 1");
    const auto nodes = su2_exp_ball(order);
    std::vector<PointTensor> terms(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        terms[i] = nodes[i].weight * transported(field, ad_matrix(su2_exp(nodes[i].x)), x);
    });
    PointTensor acc(field.degree(), field.variance());
    for (const auto& t : terms) acc += t;
    return acc;
}

PointTensor h_su2(const FieldHandle& form, const Point6& x, int order) {
    if (order < 1) throw std::invalid_argument("h_su2: order >= 1");
    if (form.variance() != Variance::Covariant || form.degree() < 1)
        throw std::invalid_argument("h_su2: form of degree >= 1 required");
    const auto ball = su2_exp_ball(order);
    const QuadRule tr = gauss_legendre(std::max(order, 2), 0.0, 1.0);
    std::vector<PointTensor> terms(ball.size());
    parallel_for(ball.size(), [&](std::size_t n) {
        const Su2Algebra& xa = ball[n].x;
        const Point6 gen = to_point(ad(xa, from_point(x)));
        PointTensor v(1, Variance::Contravariant);
        for (int i = 0; i < 6; ++i) v.set_mask(1u << i, gen[i]);
        PointTensor acc(form.degree() - 1, Variance::Covariant);
        for (std::size_t k = 0; k < tr.x.size(); ++k) {
            const auto vec = xa.vector();
            const Su2Algebra tx = Su2Algebra::from_vector({tr.x[k] * vec[0], tr.x[k] * vec[1], tr.x[k] * vec[2]});
            acc += tr.w[k] * interior(v, transported(form, ad_matrix(su2_exp(tx)), x));
        }
        terms[n] = ball[n].weight * acc;
    });
    PointTensor acc(form.degree() - 1, Variance::Covariant);
    for (const auto& t : terms) acc += t;
    return acc;
}

FieldHandle h_su2_field(const FieldHandle& form, int order, double step) {
    return FieldHandle([form, order](const Point6& x) { return h_su2(form, x, order); }, form.degree() - 1,
                       Variance::Covariant, step);
}

double sampled_weighted_sup(const FieldHandle& field, double r, double k, std::size_t count) {
    // Halton points: a direction from the cube and a radius uniform in [0, r],
    // so small radii, where the weight peaks, are sampled as densely as large.
    const auto pts = halton(7, count);
    double sup = 0.0;
    for (const auto& h : pts) {
        Point6 dir{};
        double n2 = 0.0;
        for (int i = 0; i < 6; ++i) {
            dir[i] = 2.0 * h[i] - 1.0;
            n2 += dir[i] * dir[i];
        }
        if (n2 < 1e-12) continue;
        const double rad = r * h[6];
        Point6 x{};
        const double scale = rad / std::sqrt(2.0 * n2);
        for (int i = 0; i < 6; ++i) x[i] = dir[i] * scale;
        if (rad < 1e-12) continue;
        sup = std::max(sup, std::pow(rad, -k) * field(x).max_abs());
    }
    return sup;
}

} // namespace sl2
