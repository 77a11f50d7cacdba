#include "sl2/skeleton.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2 {

SkeletonPoint::SkeletonPoint(const Sl2Element& a, double tol) : a_(a) {
    const double r2 = norm_sq(a);
    if (std::abs(r2 - 2.0 * std::abs(casimir(a))) > tol * (1.0 + r2)) {
        throw std::invalid_argument("SkeletonPoint: element is not normal");
    }
}

bool is_skeleton(const Sl2Element& a, double tol) {
    const Mat2 m = a.mat();
    return frob(commutator(m, adjoint(m))) <= tol * (1.0 + frob_sq(m));
}

namespace {

// Eigenvector of [[p, q], [s, -p]] for eigenvalue mu, choosing the better
// conditioned of the two closed forms.
std::array<cx, 2> eigenvector(const Mat2& m, cx mu) {
    const std::array<cx, 2> v1{m.b, mu - m.a};
    const std::array<cx, 2> v2{mu + m.a, m.c};
    const double n1 = std::norm(v1[0]) + std::norm(v1[1]);
    const double n2 = std::norm(v2[0]) + std::norm(v2[1]);
    return n1 >= n2 ? v1 : v2;
}

} // namespace

SkeletonResiduals skeleton_residuals(const Sl2Element& a) {
    const Mat2 m = a.mat();
    const Mat2 s = m * adjoint(m);
    const cx f = det(m);
    const double r2 = frob_sq(m);
    SkeletonResiduals res{};
    res.commutator = frob(commutator(m, adjoint(m)));
    res.norm_gap = r2 - 2.0 * std::abs(f);
    res.aastar_gap = frob(s - Mat2::scalar(std::abs(f)));
    if (std::abs(f) == 0.0) {
        res.unitary_gap = r2;
    } else {
        const cx mu = std::sqrt(-f);
        const auto v = eigenvector(m, mu);
        const auto w = eigenvector(m, -mu);
        const cx ip = std::conj(v[0]) * w[0] + std::conj(v[1]) * w[1];
        const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        const double nw = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
        res.unitary_gap = r2 * std::abs(ip) / (nv * nw);
    }
    return res;
}

SkeletonPoint retract(const Sl2Element& a) {
    const Mat2 m = a.mat();
    const double af = std::abs(det(m));
    if (af == 0.0) return SkeletonPoint(Sl2Element{});
    // (1 + S/|f|)^{1/2} and (|f| + S)^{1/2} differ by a scalar, so they
    // conjugate identically; the latter stays bounded near the cone f = 0.
    const HermitianPsd s(m * adjoint(m));
    auto g = [af](double x) { return std::sqrt(af + std::max(x, 0.0)); };
    auto dd = [&](double lo, double hi) { return 1.0 / (g(hi) + g(lo)); };
    const Mat2 gm = hermitian_function(s, g, dd);
    const Sl2Element r = Sl2Element::from_matrix(inverse(gm) * m * gm);
    return SkeletonPoint(r, 1e-8);
}

Sl2Element rho(const DesingCoords& d) {
    const auto& w = d.w;
    const double nw = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (std::abs(nw - 1.0) > 1e-9) throw std::invalid_argument("rho: w must be a unit vector");
    return from_coords({d.lambda * w[0], d.lambda * w[1], d.lambda * w[2]});
}

std::array<double, 3> hopf(const Su2Element& u) {
    const cx a = u.mat().a;
    const cx b = u.mat().b;
    const cx ab = -2.0 * a * b;
    return {std::norm(a) - std::norm(b), ab.imag(), ab.real()};
}

} // namespace sl2
