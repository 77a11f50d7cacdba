// The vector field W_A = 1/4 [A, [A, A*]], its closed-form flow and the
// quantities derived from it.
#pragma once

#include "sl2/matrix.hpp"

#include <array>
#include <vector>

namespace sl2 {

struct FlowState {
    Sl2Element a;
    double t;
    FlowState(const Sl2Element& a0, double t0);
};

Sl2Element vector_field_w(const Sl2Element& a);

// A_t = g_t^{-1} A g_t, g_t = (1 + tanh(|f|t)/|f| AA*)^{1/2}; the quotient
// tanh(u)/u is evaluated by series when |f| t < 1e-8.
Sl2Element flow(const Sl2Element& a, double t);
Sl2Element flow(const FlowState& s);

// Classical RK4 for A' = W(A); independent of the closed form.
Sl2Element flow_rk4(const Sl2Element& a, double t, int steps);

double r_t_sq(const Sl2Element& a, double t);
double epsilon_t(const Sl2Element& a, double t);
// K_t = eps_t [A, A*] (traceless Hermitian).
Mat2 k_t(const Sl2Element& a, double t);
// S_t = A_t A_t^*.
Mat2 s_t(const Sl2Element& a, double t);

struct MuPoly {
    double u; // half-integer >= 0
    int v;    // >= 0
    double operator()(double t, double r) const;
};
double mu_eval(double u, int v, double t, double r);

// theta_1(s) = tanh(x)/x, theta_2(s) = cosh(x), theta_3(s) = sinh(x)/x with
// s = x^2 >= 0; series near 0.
double theta(int j, double s);
// d theta_j / ds.
double theta_prime(int j, double s);

using MultiIndex = std::array<int, 6>;

struct BoundProbe {
    double sup_ratio;
    std::size_t samples;
};
// sup over samples of |D^a A_t| / mu_{2n+1/2, 3n+2}(t, R), n = |a| <= 2, with
// derivatives in the real base-point coordinates by Richardson differences.
BoundProbe flow_derivative_bound_probe(const MultiIndex& a, const std::vector<FlowState>& samples);

// D^a A_t by finite differences (exposed for tests).
Sl2Element flow_derivative(const MultiIndex& a, const Sl2Element& base, double t);

} // namespace sl2
