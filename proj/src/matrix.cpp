#include "sl2/matrix.hpp"

#include "sl2/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace sl2 {

namespace {

// Multiplication by i as an exact component swap.
cx mul_i(cx z) { return {-z.imag(), z.real()}; }
cx mul_minus_i(cx z) { return {z.imag(), -z.real()}; }

} // namespace

Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
Mat2 operator*(cx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
Mat2 adjoint(const Mat2& x) { return {std::conj(x.a), std::conj(x.c), std::conj(x.b), std::conj(x.d)}; }
Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }
cx trace(const Mat2& x) { return x.a + x.d; }
cx det(const Mat2& x) { return x.a * x.d - x.b * x.c; }
Mat2 inverse(const Mat2& x) {
    const cx dt = det(x);
    if (std::abs(dt) == 0.0) throw std::domain_error("inverse: singular matrix");
    return (1.0 / dt) * Mat2{x.d, -x.b, -x.c, x.a};
}
double frob_sq(const Mat2& x) { return std::norm(x.a) + std::norm(x.b) + std::norm(x.c) + std::norm(x.d); }
double frob(const Mat2& x) { return std::sqrt(frob_sq(x)); }

Mat2 Sl2Element::mat() const {
    const auto& [z1, z2, z3] = z_;
    return {mul_i(z1), -z2 + mul_i(z3), z2 + mul_i(z3), mul_minus_i(z1)};
}

Sl2Element Sl2Element::from_matrix(const Mat2& m) {
    return Sl2Element(Coords{mul_minus_i(0.5 * (m.a - m.d)), 0.5 * (m.c - m.b), mul_minus_i(0.5 * (m.b + m.c))});
}

std::array<double, 6> Sl2Element::real() const {
    return {z_[0].real(), z_[1].real(), z_[2].real(), z_[0].imag(), z_[1].imag(), z_[2].imag()};
}

Sl2Element Sl2Element::from_real(const std::array<double, 6>& v) {
    return Sl2Element(Coords{cx(v[0], v[3]), cx(v[1], v[4]), cx(v[2], v[5])});
}

Sl2Element from_coords(const Coords& z) { return Sl2Element(z); }
Coords to_coords(const Sl2Element& a) { return a.coords(); }

Sl2Element operator+(const Sl2Element& x, const Sl2Element& y) {
    const auto& p = x.coords();
    const auto& q = y.coords();
    return Sl2Element(Coords{p[0] + q[0], p[1] + q[1], p[2] + q[2]});
}
Sl2Element operator-(const Sl2Element& x, const Sl2Element& y) {
    const auto& p = x.coords();
    const auto& q = y.coords();
    return Sl2Element(Coords{p[0] - q[0], p[1] - q[1], p[2] - q[2]});
}
Sl2Element operator*(double s, const Sl2Element& x) {
    const auto& p = x.coords();
    return Sl2Element(Coords{s * p[0], s * p[1], s * p[2]});
}
double distance(const Sl2Element& x, const Sl2Element& y) { return std::sqrt(norm_sq(x - y)); }

cx casimir(const Sl2Element& a) { return det(a.mat()); }

cx casimir_coords(const Sl2Element& a) {
    const auto& z = a.coords();
    return z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
}

double norm_sq(const Sl2Element& a) { return frob_sq(a.mat()); }

CharResiduals char_residuals(const Sl2Element& a) {
    const Mat2 m = a.mat();
    const cx f = det(m);
    const double r2 = frob_sq(m);
    const Mat2 s = m * adjoint(m);
    const double af2 = std::norm(f);
    return {frob(m * m + Mat2::scalar(f)), frob(s * s - cx(r2) * s + Mat2::scalar(af2))};
}

HermitianPsd::HermitianPsd(const Mat2& h) : h_(h) {
    const double scale = 1.0 + frob(h);
    if (std::abs(h.a.imag()) > 1e-12 * scale || std::abs(h.d.imag()) > 1e-12 * scale ||
        std::abs(h.b - std::conj(h.c)) > 1e-12 * scale) {
        throw std::invalid_argument("HermitianPsd: matrix is not Hermitian");
    }
    h_.a = h.a.real();
    h_.d = h.d.real();
    h_.c = std::conj(h.b);
    const auto [lo, hi] = eigenvalues();
    (void)hi;
    const double tr = h_.a.real() + h_.d.real();
    if (lo < -1e-10 * std::max(tr, 0.0) - 1e-300) {
        throw std::invalid_argument("HermitianPsd: negative eigenvalue");
    }
}

std::pair<double, double> HermitianPsd::eigenvalues() const {
    const double p = h_.a.real();
    const double q = h_.d.real();
    const double mean = 0.5 * (p + q);
    const double disc = std::hypot(0.5 * (p - q), std::abs(h_.b));
    const double hi = mean + disc;
    double lo = mean - disc;
    if (hi > 0.0 && mean > 0.0) lo = (p * q - std::norm(h_.b)) / hi;
    return {lo, hi};
}

Mat2 hermitian_function(const HermitianPsd& h, const std::function<double(double)>& f,
                        const std::function<double(double, double)>& dd) {
    const auto [lo, hi] = h.eigenvalues();
    const double f_lo = f(lo);
    const double slope = dd(lo, hi);
    return Mat2::scalar(f_lo) + cx(slope) * (h.mat() - Mat2::scalar(lo));
}

HermitianPsd hermitian_sqrt(const HermitianPsd& h) {
    auto f = [](double s) { return std::sqrt(std::max(s, 0.0)); };
    auto dd = [&](double lo, double hi) {
        const double den = f(hi) + f(lo);
        return den > 0.0 ? 1.0 / den : 0.0;
    };
    return HermitianPsd(hermitian_function(h, f, dd));
}

Su2Element::Su2Element(const Mat2& u) : u_(u) {
    const double e1 = frob(u * adjoint(u) - Mat2::identity());
    const double e2 = std::abs(det(u) - 1.0);
    if (e1 > 1e-12 || e2 > 1e-12) throw std::invalid_argument("Su2Element: not special unitary");
}

Su2Element Su2Element::from_ab(cx a, cx b) { return Su2Element(Mat2{a, b, -std::conj(b), std::conj(a)}); }

Su2Algebra::Su2Algebra(const Mat2& x) : x_(x) {
    const double scale = 1.0 + frob(x);
    if (frob(adjoint(x) + x) > 1e-12 * scale || std::abs(trace(x)) > 1e-12 * scale) {
        throw std::invalid_argument("Su2Algebra: not anti-Hermitian traceless");
    }
}

Su2Algebra Su2Algebra::from_vector(const std::array<double, 3>& v) {
    return Su2Algebra(Mat2{cx(0.0, v[2]), cx(v[1], v[0]), cx(-v[1], v[0]), cx(0.0, -v[2])});
}

std::array<double, 3> Su2Algebra::vector() const { return {x_.b.imag(), x_.b.real(), x_.a.imag()}; }

Su2Element su2_exp(const Su2Algebra& x) {
    const auto v = x.vector();
    const double th = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    const double sinc = th < 1e-8 ? 1.0 - th * th / 6.0 : std::sin(th) / th;
    return Su2Element(Mat2::scalar(std::cos(th)) + cx(sinc) * x.mat());
}

Sl2Element adjoint_action(const Su2Element& u, const Sl2Element& a) {
    return Sl2Element::from_matrix(u.mat() * a.mat() * adjoint(u.mat()));
}

Sl2Element ad(const Su2Algebra& x, const Sl2Element& a) {
    return Sl2Element::from_matrix(commutator(x.mat(), a.mat()));
}

std::vector<Su2Node> su2_haar(int order) {
    if (order < 1) throw std::invalid_argument("su2_haar: order >= 1 required");
    const QuadRule gl = gauss_legendre(order, 0.0, 1.0);
    const int m = 2 * order;
    std::vector<Su2Node> nodes;
    nodes.reserve(static_cast<std::size_t>(order) * m * m);
    for (int i = 0; i < order; ++i) {
        const double s = gl.x[i];
        for (int j = 0; j < m; ++j) {
            const double al = 2.0 * M_PI * (j + 0.5) / m;
            for (int k = 0; k < m; ++k) {
                const double be = 2.0 * M_PI * (k + 0.5) / m;
                const cx a = std::sqrt(1.0 - s) * std::polar(1.0, al);
                const cx b = std::sqrt(s) * std::polar(1.0, be);
                nodes.push_back({Su2Element::from_ab(a, b), gl.w[i] / (m * m)});
            }
        }
    }
    return nodes;
}

std::vector<Su2Node> su2_haar_mc(std::size_t count, std::uint64_t seed) {
    Sampler rng(seed);
    std::vector<Su2Node> nodes;
    nodes.reserve(count);
    const double w = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        double q[4];
        double n = 0.0;
        do {
            n = 0.0;
            for (double& c : q) {
                c = rng.normal();
                n += c * c;
            }
        } while (n < 1e-12);
        n = std::sqrt(n);
        nodes.push_back({Su2Element::from_ab(cx(q[0] / n, q[1] / n), cx(q[2] / n, q[3] / n)), w});
    }
    return nodes;
}

double haar_exp_density(const Su2Algebra& x) {
    // Density with respect to Lebesgue measure in the vector coordinates v,
    // X = i v.sigma, on |v| <= pi. Total mass: 4 pi * int_0^pi sin^2 = 2 pi^2.
    const auto v = x.vector();
    const double th = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (th > M_PI) return 0.0;
    const double sinc = th < 1e-8 ? 1.0 - th * th / 6.0 : std::sin(th) / th;
    return sinc * sinc / (2.0 * M_PI * M_PI);
}

std::vector<Su2AlgebraNode> su2_exp_ball(int order) {
    if (order < 1) throw std::invalid_argument("su2_exp_ball: order >= 1 required");
    const QuadRule rad = gauss_legendre(2 * order, 0.0, M_PI);
    const QuadRule pol = gauss_legendre(order, -1.0, 1.0);
    const int m = 2 * order;
    std::vector<Su2AlgebraNode> nodes;
    double total = 0.0;
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
        const double th = rad.x[i];
        for (std::size_t j = 0; j < pol.x.size(); ++j) {
            const double ct = pol.x[j];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int k = 0; k < m; ++k) {
                const double ph = 2.0 * M_PI * (k + 0.5) / m;
                const std::array<double, 3> v{th * st * std::cos(ph), th * st * std::sin(ph), th * ct};
                const Su2Algebra x = Su2Algebra::from_vector(v);
                // Lebesgue measure in spherical coordinates times the density.
                const double w = rad.w[i] * th * th * pol.w[j] * (2.0 * M_PI / m) * haar_exp_density(x);
                nodes.push_back({x, w});
                total += w;
            }
        }
    }
    for (auto& n : nodes) n.weight /= total;
    return nodes;
}

} // namespace sl2
