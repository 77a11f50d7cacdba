// The linear Poisson structures pi_1, pi_2 on sl2(C) ~ R^6, the transversal
// fields V_i, the leafwise symplectic extensions omega~_i, gamma_i, phi, the
// Cartan trivectors and the Poisson differential.
#pragma once

#include "sl2/skeleton.hpp"
#include "sl2/tensor.hpp"

#include <array>

namespace sl2 {

Point6 to_point(const Sl2Element& a);
Sl2Element from_point(const Point6& x);

// 4 Re / 4 Im of z1 dz2^dz3 + cyclic, i in {1, 2}.
PointTensor pi(int i, const Point6& x);
FieldHandle pi_field(int i);

// R^{-2} sum (x_j d_{x_j} - y_j d_{y_j}) and R^{-2} sum (x_j d_{y_j} + y_j d_{x_j}).
// Throw for R^2 < 1e-20.
PointTensor vfield_v(int i, const Point6& x);
FieldHandle vfield_v_field(int i);

PointTensor omega_tilde(int i, const Point6& x);
FieldHandle omega_tilde_field(int i);

// d omega~_1 from the analytic coefficient derivatives.
PointTensor d_omega_tilde(int i, const Point6& x);
// gamma_i = i_{V_i} d omega~_1.
PointTensor gamma(int i, const Point6& x);
FieldHandle gamma_field(int i);

// Real and imaginary parts of the Casimir f = det A = z.z and their
// differentials df_1 = 2 sum (x dx - y dy), df_2 = 2 sum (y dx + x dy).
double casimir_part(int i, const Point6& x);
PointTensor dcasimir(int i, const Point6& x);
FieldHandle casimir_field(int i);
FieldHandle dcasimir_field(int i);

// phi = df_1 ^ df_2.
PointTensor phi(const Point6& x);
FieldHandle phi_field();

enum class CartanPart { Real, Imag };
PointTensor cartan_trivector(CartanPart part);

// d_pi P = [pi_1, P].
PointTensor poisson_diff(const FieldHandle& p, const Point6& x);
FieldHandle poisson_diff_field(const FieldHandle& p, double step = 1e-3);

// Pushforward of tangent vectors of S^2 x C along rho: a tangent vector u of
// S^2 at w (u.w = 0) and the real directions d_lambda1, d_lambda2.
Point6 drho_sphere(const DesingCoords& d, const std::array<double, 3>& u);
Point6 drho_lambda(const DesingCoords& d, int j);

// Orthonormal tangent basis (e1, e2) of S^2 at w with e1 x e2 = w, so the
// area form takes the value 1 on it.
std::array<std::array<double, 3>, 2> sphere_frame(const std::array<double, 3>& w);

} // namespace sl2
