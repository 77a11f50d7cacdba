// Shared numerical utilities: quadrature nodes, low-discrepancy points,
// regression and seeded sampling.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace sl2 {

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre rule with n nodes on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// First `count` points of the Halton sequence in [0,1)^dim (dim <= 12).
std::vector<std::vector<double>> halton(int dim, std::size_t count);

struct LineFit {
    double slope;
    double intercept;
};
// Least-squares fit y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares fit of log y against log x.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic sampler; identical seeds give identical streams.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a = 0.0, double b = 1.0);
    double normal();
    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Runs body(i) for i in [0, n) on a small thread pool. Results must be written
// to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Richardson-extrapolated central difference of a scalar function.
double richardson_derivative(const std::function<double(double)>& f, double x, double h);

} // namespace sl2
