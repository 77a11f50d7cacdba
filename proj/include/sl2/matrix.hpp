// sl2(C) matrix algebra, invariants, Hermitian functional calculus and SU(2).
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace sl2 {

using cx = std::complex<double>;
using Coords = std::array<cx, 3>;

// Row-major complex 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    cx a{}, b{}, c{}, d{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 scalar(cx s) { return {s, 0.0, 0.0, s}; }
};

Mat2 operator+(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x);
Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator*(cx s, const Mat2& x);
Mat2 adjoint(const Mat2& x);
Mat2 commutator(const Mat2& x, const Mat2& y);
Mat2 inverse(const Mat2& x);
cx trace(const Mat2& x);
cx det(const Mat2& x);
double frob_sq(const Mat2& x);
double frob(const Mat2& x);

// Traceless matrix stored through its coordinates z in C^3:
// A = [[i z1, -z2 + i z3], [z2 + i z3, -i z1]].
// The coordinate triple is canonical, so the trace vanishes by construction.
class Sl2Element {
public:
    Sl2Element() = default;
    explicit Sl2Element(const Coords& z) : z_(z) {}

    const Coords& coords() const { return z_; }
    Mat2 mat() const;

    // Orthogonal projection of a general matrix onto its traceless part.
    static Sl2Element from_matrix(const Mat2& m);

    // Real coordinates (x1, x2, x3, y1, y2, y3), z_j = x_j + i y_j.
    std::array<double, 6> real() const;
    static Sl2Element from_real(const std::array<double, 6>& v);

private:
    Coords z_{};
};

Sl2Element from_coords(const Coords& z);
Coords to_coords(const Sl2Element& a);

Sl2Element operator+(const Sl2Element& x, const Sl2Element& y);
Sl2Element operator-(const Sl2Element& x, const Sl2Element& y);
Sl2Element operator*(double s, const Sl2Element& x);
double distance(const Sl2Element& x, const Sl2Element& y);

cx casimir(const Sl2Element& a);
cx casimir_coords(const Sl2Element& a);
double norm_sq(const Sl2Element& a);

struct CharResiduals {
    double square;  // |A^2 + f 1|
    double quartic; // |(AA*)^2 - R^2 AA* + |f|^2 1|
};
CharResiduals char_residuals(const Sl2Element& a);

// Hermitian positive semi-definite 2x2 matrix.
class HermitianPsd {
public:
    // Throws std::invalid_argument if h is not Hermitian or has a negative
    // eigenvalue below -1e-10 tr h.
    explicit HermitianPsd(const Mat2& h);
    const Mat2& mat() const { return h_; }
    // Eigenvalues, smaller first. The small one is computed as det / large to
    // avoid cancellation.
    std::pair<double, double> eigenvalues() const;

private:
    Mat2 h_;
};

HermitianPsd hermitian_sqrt(const HermitianPsd& h);

// F(H) for scalar F on the spectrum. dd(s-, s+) must return the divided
// difference (F(s+) - F(s-)) / (s+ - s-), also when s+ == s-.
Mat2 hermitian_function(const HermitianPsd& h, const std::function<double(double)>& f,
                        const std::function<double(double, double)>& dd);

// SU(2) and su(2).
class Su2Element {
public:
    explicit Su2Element(const Mat2& u);
    static Su2Element from_ab(cx a, cx b); // [[a, b], [-conj b, conj a]], |a|^2+|b|^2 = 1
    const Mat2& mat() const { return u_; }

private:
    Mat2 u_;
};

class Su2Algebra {
public:
    explicit Su2Algebra(const Mat2& x);
    // X = i (v1 s1 + v2 s2 + v3 s3) with Pauli matrices s_k, |X|^2 = 2 |v|^2.
    static Su2Algebra from_vector(const std::array<double, 3>& v);
    const Mat2& mat() const { return x_; }
    std::array<double, 3> vector() const;

private:
    Mat2 x_;
};

Su2Element su2_exp(const Su2Algebra& x);
Sl2Element adjoint_action(const Su2Element& u, const Sl2Element& a);
Sl2Element ad(const Su2Algebra& x, const Sl2Element& a);

struct Su2Node {
    Su2Element u;
    double weight;
};

// Product rule on SU(2) ~ S^3 in Hopf coordinates a = sqrt(1-s) e^{i al},
// b = sqrt(s) e^{i be}: Gauss-Legendre in s (order nodes), periodic rule with
// 2*order nodes in each angle. Weights sum to one.
std::vector<Su2Node> su2_haar(int order);
std::vector<Su2Node> su2_haar_mc(std::size_t count, std::uint64_t seed);

// Haar measure pushed to exponential coordinates on the ball |X| <= sqrt(2) pi:
// density proportional to (sin th / th)^2 where the eigenvalues of X are +-i th.
double haar_exp_density(const Su2Algebra& x);

struct Su2AlgebraNode {
    Su2Algebra x;
    double weight;
};
// Spherical product rule on the ball, normalized numerically to total mass one.
std::vector<Su2AlgebraNode> su2_exp_ball(int order);

} // namespace sl2
