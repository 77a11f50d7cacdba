// Pullbacks along the flow, the homotopy operator h_t by time quadrature, the
// infinite-time projection p_S and SU(2) averaging.
#pragma once

#include "sl2/foliation.hpp"
#include "sl2/numerics.hpp"

#include <functional>

namespace sl2 {

enum class Substitution { Geometric, Rational, Automatic };

struct QuadratureSpec {
    int order = 8;   // Gauss-Legendre nodes per panel
    int panels = 6;
    Substitution substitution = Substitution::Automatic;

    QuadratureSpec refined() const { return {order, 2 * panels, substitution}; }
};

// Time nodes on [0, t] for a base point with |f| = af and norm R^2 = r2.
QuadRule time_rule(double t, double af, double r2, const QuadratureSpec& q);

// The vector field W as a real 6-vector at x.
PointTensor w_vector(const Point6& x);

// Jacobian of a map R^6 -> R^6 by Richardson central differences.
Mat6 jacobian(const std::function<Point6(const Point6&)>& map, const Point6& x, double h);

// (F^* alpha)_x for a form, or the pushforward by F^{-1} for a multivector
// given the Jacobian of F at x and the value of the field at F(x).
PointTensor pull_back(const PointTensor& value_at_image, const Mat6& jac);

// Jacobian step 1e-4 (1 + R) / (1 + t).
double flow_jacobian_step(const Point6& x, double t);

PointTensor pullback_flow(const FieldHandle& form, double t, const Point6& x);

// h_t(alpha) = int_0^t i_W phi_s^* alpha ds.
PointTensor h_t(const FieldHandle& form, double t, const Point6& x, const QuadratureSpec& q = {});

struct QuadratureCheck {
    PointTensor value;
    double refinement_delta; // max |value(q) - value(refined q)|
    bool converged;          // delta <= 10 tol
};
QuadratureCheck h_t_checked(const FieldHandle& form, double t, const Point6& x, const QuadratureSpec& q, double tol);

FieldHandle h_t_field(const FieldHandle& form, double t, const QuadratureSpec& q = {}, double step = 1e-3);

struct SkeletonProjection {
    PointTensor value;
    double time;            // T used
    double decay;           // exp(-2 |f| T), the achieved contraction estimate
};
// phi_T^* alpha with exp(-2|f|T) < 1e-8 when f != 0; max_time caps T on and
// near the nilpotent cone, where `decay` reports the achieved tolerance.
SkeletonProjection p_skeleton(const FieldHandle& form, const Point6& x, double max_time = 1e6);

// r_S^* alpha with the Jacobian of the retraction by finite differences.
PointTensor retract_pullback(const FieldHandle& form, const Point6& x);

// Real-linear action of Ad_U on R^6.
Mat6 ad_matrix(const Su2Element& u);

// p_SU(2) by the product Haar rule.
PointTensor average_su2(const FieldHandle& field, const Point6& x, int order);
// The same average through exponential coordinates and the Haar density.
PointTensor average_su2_exp(const FieldHandle& field, const Point6& x, int order);

// h_SU(2)(beta) = int int_0^1 i_{ad_X} Ad^*_{exp(tX)} beta dt dlambda(X).
PointTensor h_su2(const FieldHandle& form, const Point6& x, int order);
FieldHandle h_su2_field(const FieldHandle& form, int order, double step = 1e-3);

// Sampled sup over the ball of radius r of |x|^{-k} |alpha(x)| (max over
// components), radius measured by R, from `count` Halton points. An estimate,
// not a bound.
double sampled_weighted_sup(const FieldHandle& field, double r, double k, std::size_t count = 4096);

} // namespace sl2
