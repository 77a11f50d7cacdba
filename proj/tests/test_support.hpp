// Generators and small oracles shared by the unit tests.
#pragma once

#include "sl2/matrix.hpp"
#include "sl2/numerics.hpp"
#include "sl2/tensor.hpp"

#include <array>
#include <cmath>

namespace sl2::testing {

inline Sl2Element random_element(Sampler& rng, double scale = 1.0) {
    Coords z;
    for (auto& c : z) c = cx(scale * rng.normal(), scale * rng.normal());
    return from_coords(z);
}

// Element of norm R <= rmax, uniform radius.
inline Sl2Element random_element_radius(Sampler& rng, double rmax) {
    const Sl2Element a = random_element(rng);
    const double r = std::sqrt(norm_sq(a));
    return (rng.uniform(0.05, 1.0) * rmax / r) * a;
}

inline Point6 random_point(Sampler& rng, double scale = 1.0) {
    Point6 x;
    for (double& v : x) v = scale * rng.normal();
    return x;
}

inline std::array<double, 3> random_unit3(Sampler& rng) {
    std::array<double, 3> w;
    double n = 0.0;
    do {
        n = 0.0;
        for (double& v : w) {
            v = rng.normal();
            n += v * v;
        }
    } while (n < 1e-6);
    n = std::sqrt(n);
    for (double& v : w) v /= n;
    return w;
}

inline Su2Element random_su2(Sampler& rng) {
    double q[4];
    double n = 0.0;
    for (double& v : q) {
        v = rng.normal();
        n += v * v;
    }
    n = std::sqrt(n);
    return Su2Element::from_ab(cx(q[0] / n, q[1] / n), cx(q[2] / n, q[3] / n));
}

inline double mat_dist(const Mat2& a, const Mat2& b) { return frob(a - b); }

inline double tensor_dist(const PointTensor& a, const PointTensor& b) { return (a - b).max_abs(); }

} // namespace sl2::testing
