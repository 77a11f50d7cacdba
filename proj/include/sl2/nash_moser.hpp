// Bookkeeping for the Nash-Moser iteration: the integer constants and their
// inequality ledger, the radius and smoothing schedules, the Maurer-Cartan
// residual, time-one flows of vector fields with their pullbacks, and a
// single iteration step driven by pluggable homotopy and smoothing providers.
#pragma once

#include "sl2/tensor.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl2 {

struct SlbTriple {
    long long a = 0, b = 0, c = 0;
};

struct ScheduleParams {
    SlbTriple slb;
    long long p = 0, x_a = 0, y_a = 0, x_b = 0, y_b = 0, x_c = 0, y_c = 0, alpha = 0;
    double r = 1.0;  // final radius
    double R = 2.0;  // initial radius
    double t0 = 2.0;
    double theta = 0.1;
};

// p = max(a + c + 1, b + 1, 22) and the constants derived from it. Throws
// std::invalid_argument on a negative entry or when 50 p^2 overflows.
ScheduleParams derive_constants(const SlbTriple& slb);

struct ScheduleStep {
    int i = 0;
    double r = 0.0;
    double log_t = 0.0;
    double t = 0.0; // +inf once exp(log_t) overflows
};
// r_i = r + (R - r) / (i + 1), log t_i = (3/2)^i log t0.
ScheduleStep schedule(const ScheduleParams& params, int i);

struct LedgerEntry {
    std::string name;     // the inequality as text
    std::string relation; // "<", "<=" or "="
    __int128 lhs = 0;
    __int128 rhs = 0;
    bool pass = false;
    // rhs - lhs, or -|lhs - rhs| for an equality.
    __int128 margin() const;
};
struct LedgerReport {
    std::vector<LedgerEntry> entries;
    bool all_pass() const;
    std::size_t failures() const;
};
// Every inequality is cleared of denominators and evaluated in 128-bit
// integers. Throws std::overflow_error if an intermediate would not fit.
LedgerReport ledger_verify(const ScheduleParams& params);

std::string to_string(__int128 v);

// d_pi Z + 1/2 [Z, Z] with d_pi = [pi_1, .]; zero iff pi_1 + Z is Poisson at x.
PointTensor maurer_cartan_residual(const FieldHandle& z, const Point6& x);

double euclidean_norm(const Point6& x);

struct FlowEscape : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FlowOptions {
    int steps = 32;              // RK4 steps on [0, 1]
    double outer_radius = 1e300; // escape bound for |phi_t(x)|
};

// Time-one RK4 flow of a vector field. Throws FlowEscape if an intermediate
// point leaves the outer ball.
Point6 flow_of_field(const FieldHandle& y, const Point6& x, const FlowOptions& opt = {});
// The flow and its Jacobian, integrated with the variational equation.
Point6 flow_of_field(const FieldHandle& y, const Point6& x, Mat6& jacobian, const FlowOptions& opt = {});

// phi_Y^* W at x for a multivector or form W.
PointTensor pullback_by_flow(const FieldHandle& w, const FieldHandle& y, const Point6& x,
                             const FlowOptions& opt = {});

// t m_t^* W at x with m_t(x) = t x.
PointTensor scaled_pullback(const FieldHandle& w, double t, const Point6& x);

// Sampled C^n norms (n <= 2) over the Euclidean ball of radius r: the max over
// components and partial derivatives of order <= n at `count` Halton points
// with uniform radius. Estimates, not bounds.
double sampled_cn_norm(const FieldHandle& field, double r, int n, std::size_t count = 512);
double sampled_distance(const std::function<PointTensor(const Point6&)>& a,
                        const std::function<PointTensor(const Point6&)>& b, double r,
                        std::size_t count = 512);

// Flow estimates on Y = eps Y0 with Y0 = exp(-1/|x|^2) B x flat at 0, on
// B_s inside B_r: the displacement ratio ||phi_Y - id||_{0,s} / ||Y||_{0,r}
// and the remainder ||phi_Y^* pi_1 - pi_1 - [Y, pi_1]||_{0,s}, both sampled.
struct FlowProbe {
    std::vector<double> eps;
    std::vector<double> y_norm;
    std::vector<double> displacement;
    std::vector<double> remainder;
    double ratio_max = 0.0;          // the fitted constant C in the first estimate
    double displacement_slope = 0.0; // log displacement against log ||Y||
    double remainder_slope = 0.0;    // log remainder against log ||Y||
};
FlowProbe probe_flow(double r = 2.0, double s = 1.0, std::size_t samples = 128);
FieldHandle flat_test_field();

struct Smallness {
    double norm0 = 0.0;
    double norm1 = 0.0;
    double theta = 0.0;
    bool holds = false; // norm0 < (r - s) theta and norm1 < theta
};
Smallness check_smallness(const FieldHandle& y, double r, double s, double theta, std::size_t count = 512);

// Providers. h1(Z, r) returns a vector field on the radius-r ball; S(X, i, t, r)
// smooths it. Both must be re-entrant.
using HomotopyProvider = std::function<FieldHandle(const FieldHandle& z, double r)>;
using SmoothingProvider = std::function<FieldHandle(const FieldHandle& x, int i, double t, double r)>;

struct Providers {
    HomotopyProvider homotopy;
    SmoothingProvider smoothing;
};

// h1 = 0. Every step is then a no-op, which iterate_step reports.
HomotopyProvider zero_homotopy();
SmoothingProvider identity_smoothing();
// Smoothing for vector fields whose coefficients depend only on the
// coordinates (u, v) = (x[i], x[j]): each coefficient is sampled on the
// radius-r disk and passed through the flat 2-D smoothing S_{t,r}. Fails with
// std::domain_error if a coefficient varies in another direction.
SmoothingProvider planar_flat_smoothing(int i, int j, int resolution = 129);

struct StepOptions {
    std::size_t samples = 256;
    FlowOptions flow{};
};

struct StepRecord {
    int i = 0;
    double r_i = 0.0, r_next = 0.0;
    double log_t = 0.0;
    double z_norm = 0.0;       // sampled ||Z_i||_0 on B_{r_i}
    double x_norm0 = 0.0;      // sampled ||X_i||_0
    double x_norm1 = 0.0;      // sampled ||X_i||_1
    double z_next_norm = 0.0;  // sampled ||Z_{i+1}||_0 on B_{r_{i+1}}
    double mc_residual = 0.0;  // sampled |MC(Z_i)|
    bool small = false;        // flow smallness with theta
    bool noop = false;         // X_i vanished at every sample
};

struct NashMoserState {
    FieldHandle z = constant_field(PointTensor(2, Variance::Contravariant)); // Z_i = pi_i - pi_1
    int i = 0;
    ScheduleParams params;
};

struct StepResult {
    NashMoserState next;
    StepRecord record;
};

// X_i = S_i(h1_{r_i}(Z_i)), Z_{i+1} = phi_{X_i}^*(pi_1 + Z_i) - pi_1.
StepResult iterate_step(const NashMoserState& state, const Providers& providers, const StepOptions& opt = {});

// {params, ledger, steps} as JSON.
std::string run_report_json(const ScheduleParams& params, const std::vector<StepRecord>& steps);

} // namespace sl2
