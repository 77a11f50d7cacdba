// Smoothing operators: the Fourier mollifier on Schwartz-like grid fields,
// the inversion x -> x/|x|^2, the extension of flat functions off the unit
// disk, and the flat smoothings S_{t,r}, T_{s,r} and their composite.
#pragma once

#include "sl2/flatcalc.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sl2 {

using ScalarField2 = std::function<double(double, double)>;

// Decreasing profile for the kernel: 1 on |u| <= 1, 0 on |u| >= 2, and
// psi(2-|u|) / (psi(2-|u|) + psi(|u|-1)) in between, psi(s) = exp(-1/s).
double chi_dec(double u);
// Increasing profile for the weight cutoff: 1 - chi_dec(u) for u >= 0, so 0
// on u <= 1 and 1 on u >= 2.
double chi_inc(double u);
// Profile used by the extension: 0 on u <= 1/4, 1 on u >= 1/2.
double chi_ext(double u);

struct KernelSpec {
    int dimension = 2;     // 1 or 2
    double radius = 64.0;  // spatial half-width of the grid
    int resolution = 1025; // odd
};

struct KernelReport {
    double integral = 0.0;          // h^m sum K
    double asymmetry = 0.0;         // max |K(x) - K(-x)|
    double aliased_energy = 0.0;    // share of |K^|^2 beyond half-Nyquist
    double decay_sup = 0.0;         // max |x|^4 |K(x)| on the grid
};

// K sampled on [-radius, radius]^2 (Square domain) from the inverse DFT of
// K^(xi) = (2 pi)^{-m/2} prod chi_dec(|xi_i|). Throws std::invalid_argument if
// the grid does not resolve [-2, 2] in frequency or dimension != 2.
GridField nash_kernel(const KernelSpec& spec, KernelReport* report = nullptr);
// One-dimensional kernel samples at coord(i) = h (i - (n-1)/2).
std::vector<double> nash_kernel_1d(const KernelSpec& spec, KernelReport* report = nullptr);

struct SmoothingReport {
    double leakage = 0.0; // share of sum |f| in the outer four rows and columns
    bool flagged = false; // leakage above 1e-6
    std::string stage;    // chain stage that raised the flag, empty if none
};

// S~_t f = K_t * f on the grid: aperiodic convolution of the samples with the
// kernel whose transform is chi_dec(xi_1 / t) chi_dec(xi_2 / t) restricted to
// the grid's Nyquist band, done by FFT with zero padding by two. Invalid nodes
// count as 0. Output keeps the input grid and mask. Requires t >= 1.
GridField smooth_schwartz(const GridField& f, double t, SmoothingReport* report = nullptr);

enum class Flavor { Flat, Schwartz };

struct InversionReport {
    std::size_t truncated = 0; // output nodes whose preimage left the input domain
    double edge_magnitude = 0; // max |f| on the input's outer ring
};

// (rho* f)(x) = f(x / |x|^2) on a grid of the given radius and resolution.
// A Flat input is resampled onto a Square grid and a Schwartz input onto a
// Disk grid. Nodes whose image falls outside the input are invalid; the origin
// is 0.
GridField invert(const GridField& f, Flavor input, double out_radius, int out_resolution,
                 InversionReport* report = nullptr);
// Same with an exact callable; no truncation.
GridField invert(const ScalarField2& f, Flavor input, double out_radius, int out_resolution);

// sup over valid nodes and |a| <= n of max(1, |x|^k) |D^a f|.
double schwartz_norm(const GridField& f, int n, double k);

struct MomentSystem {
    std::vector<double> rates;        // c_j = 2^j
    std::vector<double> coefficients; // a_j
    double condition = 0.0;           // 2-norm condition number of the system
    double residual = 0.0;            // max_n |int phi t^n dt - (-1)^n|
    double l1_norm = 0.0;             // int |phi|, the sup-norm gain of the extension
};
// phi(t) = sum_j a_j exp(-c_j t) with int phi t^n dt = (-1)^n for n <= order.
const MomentSystem& extension_moments();

// Extension of f from the closed unit disk. Inside the disk it returns f;
// outside it returns chi_ext(1/|x|) int phi(t) (chi_ext f)(x / |x|^{1+t}) dt,
// which vanishes for |x| >= 4.
double extend_at(const ScalarField2& f, double x, double y);
GridField extend(const ScalarField2& f, double out_radius = 4.0, int out_resolution = 257);
// Grid input on the unit disk, read back by interpolation. Interpolation
// errors are amplified by up to extension_moments().l1_norm.
GridField extend(const GridField& f, double out_radius = 4.0, int out_resolution = 257);

struct FlatSmoothingConfig {
    double box = 6.0;      // half-width L of the grid on which S~_t acts
    double max_step = 0.05;
};

// S_{t,r} f = m_{1/r}* S_{t,1} m_r* f with S_{t,1} = rho_B* iota* S~_t rho* eps.
// The output lives on the radius-r disk with the given resolution; nodes with
// |x| < 1.05 r / box are invalid because their image leaves the box.
GridField smooth_flat(const ScalarField2& f, double t, double r, int resolution,
                      const FlatSmoothingConfig& cfg = {}, SmoothingReport* report = nullptr);
// Grid input goes through interpolation and inherits the extension's gain.
GridField smooth_flat(const GridField& f, double t, const FlatSmoothingConfig& cfg = {},
                      SmoothingReport* report = nullptr);

// T_{s,r} f = chi_inc(s |x| / r) f.
GridField cutoff_T(const GridField& f, double s, double r);
// S_{t,s,r} = T_{s,r} o S_{t,r}.
GridField smooth_combined(const ScalarField2& f, double t, double s, double r, int resolution,
                          const FlatSmoothingConfig& cfg = {}, SmoothingReport* report = nullptr);

// Regression of log(measured) on log(parameter).
struct ExponentProbe {
    std::string op;
    std::vector<int> indices;    // operator-specific index tuple
    std::vector<double> params;  // t or s grid
    std::vector<double> measured;
    std::vector<bool> fitted;    // which points enter the fit
    double expected = 0.0;
    double slope = 0.0;
    double constant = 0.0;       // exp(intercept)
    bool within(double tol) const;
};
std::string to_json(const ExponentProbe& p);

struct ProbeConfig {
    std::vector<double> params{1, 2, 4, 8, 16, 32, 64};
    int resolution = 257;
};

// Sup over a fixed test family of the estimate ratios. `up` selects the
// smoothing estimate (gain of t^l or s^j), otherwise the approximation one.
ExponentProbe probe_schwartz(bool up, const ProbeConfig& cfg = {});
ExponentProbe probe_cutoff(bool up, const ProbeConfig& cfg = {});
// S_{t,1} on the family exp(-(c/|x|)^2) cos(m theta): the estimates
// ||S f||_{1,0} <= C t ||f||_{0,2} and ||(S - id) f||_{0,2} <= C t^-1 ||f||_{1,0},
// and the composite T_{t,1} S_{t,1} along s = t with (n, l, k, j) = (0, 1, 0, 0)
// for the first and (0, 1, 0, 1) for the second, whose right-hand side is
// t^-1 max(||f||_{1,0}, ||f||_{0,3}).
struct FlatProbes {
    ExponentProbe up, down, combined_up, combined_down;
};
FlatProbes probe_flat(const ProbeConfig& cfg = {});

// Sup over a Gaussian family of ||rho* f||'_{1,k} / ||f||_{1,k+2} with the
// flat side on the unit disk at the given resolution.
double inversion_constant(double k, int resolution);

} // namespace sl2
