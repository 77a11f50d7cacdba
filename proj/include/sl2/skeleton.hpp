// The skeleton {[A, A*] = 0}, its retraction and the desingularization
// S^2 x C -> skeleton.
#pragma once

#include "sl2/matrix.hpp"

#include <array>

namespace sl2 {

class SkeletonPoint {
public:
    // Throws std::invalid_argument unless |R^2 - 2|f|| <= tol (1 + R^2).
    explicit SkeletonPoint(const Sl2Element& a, double tol = 1e-10);
    const Sl2Element& element() const { return a_; }

private:
    Sl2Element a_;
};

struct DesingCoords {
    std::array<double, 3> w; // point of S^2
    cx lambda;
};

// |[A, A*]| <= tol (1 + R^2).
bool is_skeleton(const Sl2Element& a, double tol);

// The four characterizations, as residuals that vanish on the skeleton:
// commutator |[A,A*]|, R^2 - 2|f|, |AA* - |f| 1|, and the normality defect of
// the eigenbasis (distance of A from a unitary diagonalization).
struct SkeletonResiduals {
    double commutator;
    double norm_gap;
    double aastar_gap;
    double unitary_gap;
};
SkeletonResiduals skeleton_residuals(const Sl2Element& a);

// g_inf^{-1} A g_inf with g_inf = (1 + AA*/|f|)^{1/2}, and 0 when f = 0.
SkeletonPoint retract(const Sl2Element& a);

// rho(w, lambda) with z_j = lambda w_j. Throws for non-unit w.
Sl2Element rho(const DesingCoords& d);

// Hopf map of U = [[a, b], [-conj b, conj a]].
std::array<double, 3> hopf(const Su2Element& u);

} // namespace sl2
