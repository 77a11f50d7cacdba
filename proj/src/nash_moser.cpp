#include "sl2/nash_moser.hpp"

#include "sl2/foliation.hpp"
#include "sl2/homotopy.hpp"
#include "sl2/numerics.hpp"
#include "sl2/smoothing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace sl2 {

namespace {

using i128 = __int128;

i128 mul(i128 a, i128 b) {
    i128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("ledger_verify: 128-bit overflow");
    return out;
}

i128 add(i128 a, i128 b) {
    i128 out;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("ledger_verify: 128-bit overflow");
    return out;
}

i128 sub(i128 a, i128 b) {
    i128 out;
    if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("ledger_verify: 128-bit overflow");
    return out;
}

LedgerEntry entry(std::string name, const char* rel, i128 lhs, i128 rhs) {
    LedgerEntry e;
    e.name = std::move(name);
    e.relation = rel;
    e.lhs = lhs;
    e.rhs = rhs;
    const std::string r = rel;
    e.pass = r == "<" ? lhs < rhs : r == "<=" ? lhs <= rhs : lhs == rhs;
    return e;
}

// Points in the Euclidean ball of radius r: a direction from the cube and a
// radius uniform in [0, r].
std::vector<Point6> ball_points(double r, std::size_t count) {
    std::vector<Point6> out;
    out.reserve(count);
    for (const auto& h : halton(7, count)) {
        Point6 x{};
        double n2 = 0.0;
        for (int i = 0; i < 6; ++i) {
            x[i] = 2.0 * h[i] - 1.0;
            n2 += x[i] * x[i];
        }
        if (n2 < 1e-12) continue;
        const double scale = r * h[6] / std::sqrt(n2);
        for (double& v : x) v *= scale;
        out.push_back(x);
    }
    return out;
}

Point6 axpy(const Point6& x, double a, const Point6& d) {
    Point6 out;
    for (int i = 0; i < 6; ++i) out[i] = x[i] + a * d[i];
    return out;
}

Point6 vec(const PointTensor& t) {
    Point6 out;
    for (int i = 0; i < 6; ++i) out[i] = t.at_mask(1u << i);
    return out;
}

void guard(const Point6& x, const FlowOptions& opt) {
    if (!(euclidean_norm(x) <= opt.outer_radius))
        throw FlowEscape("flow_of_field: trajectory left the ball of radius " + std::to_string(opt.outer_radius));
}

// Right-hand side of x' = Y(x), J' = DY(x) J.
void rhs(const FieldHandle& y, const Point6& x, const Mat6& j, Point6& dx, Mat6& dj, bool with_jac) {
    dx = vec(y(x));
    if (!with_jac) return;
    Mat6 dy{}; // dy[a][k] = d_k Y_a
    for (int k = 0; k < 6; ++k) {
        const Point6 col = vec(y.partial(x, k));
        for (int a = 0; a < 6; ++a) dy[a][k] = col[a];
    }
    dj = matmul(dy, j);
}

Point6 integrate(const FieldHandle& y, const Point6& x0, Mat6* jac, const FlowOptions& opt) {
    if (y.degree() != 1 || y.variance() != Variance::Contravariant)
        throw std::invalid_argument("flow_of_field: expected a vector field");
    if (opt.steps < 1) throw std::invalid_argument("flow_of_field: steps must be positive");
    const bool with_jac = jac != nullptr;
    const double h = 1.0 / opt.steps;
    Point6 x = x0;
    Mat6 j{};
    for (int i = 0; i < 6; ++i) j[i][i] = 1.0;
    guard(x, opt);
    auto mat_axpy = [](const Mat6& a, double s, const Mat6& b) {
        Mat6 out;
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) out[r][c] = a[r][c] + s * b[r][c];
        return out;
    };
    for (int n = 0; n < opt.steps; ++n) {
        Point6 k1, k2, k3, k4;
        Mat6 m1{}, m2{}, m3{}, m4{};
        rhs(y, x, j, k1, m1, with_jac);
        const Point6 x2 = axpy(x, 0.5 * h, k1);
        guard(x2, opt);
        rhs(y, x2, mat_axpy(j, 0.5 * h, m1), k2, m2, with_jac);
        const Point6 x3 = axpy(x, 0.5 * h, k2);
        guard(x3, opt);
        rhs(y, x3, mat_axpy(j, 0.5 * h, m2), k3, m3, with_jac);
        const Point6 x4 = axpy(x, h, k3);
        guard(x4, opt);
        rhs(y, x4, mat_axpy(j, h, m3), k4, m4, with_jac);
        for (int i = 0; i < 6; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (with_jac)
            for (int r = 0; r < 6; ++r)
                for (int c = 0; c < 6; ++c)
                    j[r][c] += h / 6.0 * (m1[r][c] + 2.0 * m2[r][c] + 2.0 * m3[r][c] + m4[r][c]);
        guard(x, opt);
    }
    if (jac) *jac = j;
    return x;
}

} // namespace

ScheduleParams derive_constants(const SlbTriple& slb) {
    if (slb.a < 0 || slb.b < 0 || slb.c < 0) throw std::invalid_argument("derive_constants: negative entry");
    const i128 p = std::max<i128>({i128(slb.a) + slb.c + 1, i128(slb.b) + 1, 22});
    const i128 limit = std::numeric_limits<long long>::max();
    if (p > limit / 130 || p * p > limit / 130) throw std::invalid_argument("derive_constants: constants overflow");
    ScheduleParams s;
    s.slb = slb;
    s.p = static_cast<long long>(p);
    const long long p2 = s.p * s.p;
    s.x_a = s.p;
    s.y_a = p2;
    s.x_b = 13 * s.p;
    s.y_b = 13 * p2;
    s.x_c = 2 * s.p;
    s.y_c = 130 * p2;
    s.alpha = 50 * p2;
    return s;
}

ScheduleStep schedule(const ScheduleParams& params, int i) {
    if (i < 0) throw std::invalid_argument("schedule: negative step");
    if (!(params.r > 0.0 && params.r < params.R)) throw std::invalid_argument("schedule: need 0 < r < R");
    if (!(params.t0 > 1.0)) throw std::invalid_argument("schedule: need t0 > 1");
    ScheduleStep s;
    s.i = i;
    s.r = params.r + (params.R - params.r) / (i + 1);
    // Repeated multiplication keeps log t_{i+1} = 1.5 log t_i exact in floating point.
    s.log_t = std::log(params.t0);
    for (int k = 0; k < i; ++k) s.log_t *= 1.5;
    s.t = s.log_t < 709.0 ? std::exp(s.log_t) : std::numeric_limits<double>::infinity();
    return s;
}

i128 LedgerEntry::margin() const {
    if (relation == "=") return lhs > rhs ? rhs - lhs : lhs - rhs;
    return rhs - lhs;
}

bool LedgerReport::all_pass() const { return failures() == 0; }

std::size_t LedgerReport::failures() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.pass; }));
}

LedgerReport ledger_verify(const ScheduleParams& s) {
    const i128 p = s.p, p2 = mul(p, p), xa = s.x_a, ya = s.y_a, xb = s.x_b, yb = s.y_b, xc = s.x_c, yc = s.y_c,
               al = s.alpha;
    LedgerReport rep;
    auto& e = rep.entries;
    // Halves and the 5/2 factor are cleared by doubling both sides.
    e.push_back(entry("13p^2 + 2p - 1 < alpha/2", "<", mul(2, sub(add(mul(13, p2), mul(2, p)), 1)), al));
    e.push_back(entry("24p^2 - 9p - 1 < alpha/2", "<", mul(2, sub(sub(mul(24, p2), mul(9, p)), 1)), al));
    e.push_back(entry("12p^2 + 13p - 1 < alpha/2", "<", mul(2, sub(add(mul(12, p2), mul(13, p)), 1)), al));
    e.push_back(entry("-132p^2 < -5/2 alpha", "<", mul(-264, p2), mul(-5, al)));
    e.push_back(entry("-y_c + 2p^2 < -5/2 alpha", "<", mul(2, add(-yc, mul(2, p2))), mul(-5, al)));
    // Multiplied through by 2 (y_c - y_a), which must be positive.
    const i128 den = sub(yc, ya);
    if (den > 0) {
        const i128 lhs = add(mul(mul(24, p2), den), mul(mul(4, al), sub(add(sub(yb, ya), p), 1)));
        e.push_back(entry("12p^2 + 2 alpha (y_b - y_a + p - 1) / (y_c - y_a) < 3/2 alpha", "<", lhs, mul(mul(3, al), den)));
    } else {
        LedgerEntry bad;
        bad.name = "12p^2 + 2 alpha (y_b - y_a + p - 1) / (y_c - y_a) < 3/2 alpha (y_c <= y_a)";
        bad.relation = "<";
        bad.lhs = den;
        bad.rhs = 0;
        bad.pass = false;
        e.push_back(bad);
    }
    e.push_back(entry("4p < x_b - x_a", "<", mul(4, p), sub(xb, xa)));
    e.push_back(entry("(p - 1) x_a <= y_a", "<=", mul(p - 1, xa), ya));
    e.push_back(entry("22p <= y_a", "<=", mul(22, p), ya));
    e.push_back(entry("x_a + p = x_c", "=", add(xa, p), xc));
    const i128 tail = mul(p - 1, add(sub(xb, p), 1));
    e.push_back(entry("y_a + (p - 1)(x_b - p + 1) - 22p <= y_b", "<=", sub(add(ya, tail), mul(22, p)), yb));
    e.push_back(entry("2p + (p - 1)(x_b - p + 1) <= y_b", "<=", add(mul(2, p), tail), yb));
    e.push_back(entry("3p + 1 <= y_a", "<=", add(mul(3, p), 1), ya));
    e.push_back(entry("4p(p - 1) + 3 < N, N = alpha", "<", add(mul(mul(4, p), p - 1), 3), al));
    return rep;
}

std::string to_string(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    // Work with negative values so the minimum does not overflow.
    if (!neg) v = -v;
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
        v /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

PointTensor maurer_cartan_residual(const FieldHandle& z, const Point6& x) {
    if (z.degree() != 2 || z.variance() != Variance::Contravariant)
        throw std::invalid_argument("maurer_cartan_residual: expected a bivector field");
    return poisson_diff(z, x) + 0.5 * schouten(z, z, x);
}

double euclidean_norm(const Point6& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

Point6 flow_of_field(const FieldHandle& y, const Point6& x, const FlowOptions& opt) {
    return integrate(y, x, nullptr, opt);
}

Point6 flow_of_field(const FieldHandle& y, const Point6& x, Mat6& jacobian, const FlowOptions& opt) {
    return integrate(y, x, &jacobian, opt);
}

PointTensor pullback_by_flow(const FieldHandle& w, const FieldHandle& y, const Point6& x, const FlowOptions& opt) {
    Mat6 jac;
    const Point6 img = flow_of_field(y, x, jac, opt);
    return pull_back(w(img), jac);
}

PointTensor scaled_pullback(const FieldHandle& w, double t, const Point6& x) {
    Mat6 jac{};
    Point6 tx;
    for (int i = 0; i < 6; ++i) {
        jac[i][i] = t;
        tx[i] = t * x[i];
    }
    return t * pull_back(w(tx), jac);
}

double sampled_cn_norm(const FieldHandle& field, double r, int n, std::size_t count) {
    if (n < 0 || n > 2) throw std::invalid_argument("sampled_cn_norm: n must be 0, 1 or 2");
    const auto pts = ball_points(r, count);
    std::vector<double> sup(pts.size(), 0.0);
    parallel_for(pts.size(), [&](std::size_t m) {
        const Point6& x = pts[m];
        double s = field(x).max_abs();
        if (n >= 1)
            for (int k = 0; k < 6; ++k) s = std::max(s, field.partial(x, k).max_abs());
        if (n == 2) {
            const double h = field.step();
            for (int k = 0; k < 6; ++k)
                for (int l = k; l < 6; ++l) {
                    Point6 xp = x, xm = x;
                    xp[l] += h;
                    xm[l] -= h;
                    s = std::max(s, (1.0 / (2.0 * h)) * (field.partial(xp, k) - field.partial(xm, k)).max_abs());
                }
        }
        sup[m] = s;
    });
    return sup.empty() ? 0.0 : *std::max_element(sup.begin(), sup.end());
}

double sampled_distance(const std::function<PointTensor(const Point6&)>& a,
                        const std::function<PointTensor(const Point6&)>& b, double r, std::size_t count) {
    const auto pts = ball_points(r, count);
    std::vector<double> d(pts.size(), 0.0);
    parallel_for(pts.size(), [&](std::size_t m) { d[m] = (a(pts[m]) - b(pts[m])).max_abs(); });
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

Smallness check_smallness(const FieldHandle& y, double r, double s, double theta, std::size_t count) {
    Smallness out;
    out.theta = theta;
    out.norm0 = sampled_cn_norm(y, r, 0, count);
    out.norm1 = sampled_cn_norm(y, r, 1, count);
    out.holds = out.norm0 < (r - s) * theta && out.norm1 < theta;
    return out;
}

FieldHandle flat_test_field() {
    static const double b[6][6] = {{0.3, -1.0, 0.2, 0.0, 0.1, 0.0},  {1.0, 0.1, 0.0, -0.3, 0.0, 0.2},
                                   {0.0, 0.4, -0.2, 0.5, 0.0, -0.1}, {0.2, 0.0, -0.5, 0.0, 0.7, 0.0},
                                   {-0.1, 0.0, 0.3, -0.7, 0.2, 0.4}, {0.0, -0.2, 0.1, 0.0, -0.4, -0.3}};
    return FieldHandle(
        [](const Point6& x) {
            PointTensor out(1, Variance::Contravariant);
            const double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[4] * x[4] + x[5] * x[5];
            if (n2 < 1e-4) return out; // exp(-1/n2) underflows below double precision
            const double g = std::exp(-1.0 / n2);
            for (int i = 0; i < 6; ++i) {
                double v = 0.0;
                for (int k = 0; k < 6; ++k) v += b[i][k] * x[k];
                out.set_mask(1u << i, g * v);
            }
            return out;
        },
        1, Variance::Contravariant);
}

FlowProbe probe_flow(double r, double s, std::size_t samples) {
    if (!(0.0 < s && s < r)) throw std::invalid_argument("probe_flow: need 0 < s < r");
    FlowProbe out;
    const FieldHandle y0 = flat_test_field();
    const FieldHandle p1 = pi_field(1);
    const auto pts = ball_points(s, samples);
    for (double eps = 0.2; eps > 0.002; eps /= 2.0) {
        const FieldHandle y = scale(eps, y0);
        FlowOptions fo;
        fo.outer_radius = r;
        std::vector<double> disp(pts.size()), rem(pts.size());
        parallel_for(pts.size(), [&](std::size_t m) {
            const Point6& x = pts[m];
            const Point6 img = flow_of_field(y, x, fo);
            Point6 d;
            for (int i = 0; i < 6; ++i) d[i] = img[i] - x[i];
            disp[m] = *std::max_element(d.begin(), d.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
            disp[m] = std::abs(disp[m]);
            rem[m] = (pullback_by_flow(p1, y, x, fo) - p1(x) - schouten(y, p1, x)).max_abs();
        });
        out.eps.push_back(eps);
        out.y_norm.push_back(sampled_cn_norm(y, r, 0, samples));
        out.displacement.push_back(*std::max_element(disp.begin(), disp.end()));
        out.remainder.push_back(*std::max_element(rem.begin(), rem.end()));
        out.ratio_max = std::max(out.ratio_max, out.displacement.back() / out.y_norm.back());
    }
    out.displacement_slope = fit_loglog(out.y_norm, out.displacement).slope;
    out.remainder_slope = fit_loglog(out.y_norm, out.remainder).slope;
    return out;
}

HomotopyProvider zero_homotopy() {
    return [](const FieldHandle&, double) { return constant_field(PointTensor(1, Variance::Contravariant)); };
}

SmoothingProvider identity_smoothing() {
    return [](const FieldHandle& x, int, double, double) { return x; };
}

SmoothingProvider planar_flat_smoothing(int i, int j, int resolution) {
    if (i < 0 || i > 5 || j < 0 || j > 5 || i == j)
        throw std::invalid_argument("planar_flat_smoothing: need two distinct coordinates");
    return [i, j, resolution](const FieldHandle& x, int, double t, double r) {
        if (x.degree() != 1 || x.variance() != Variance::Contravariant)
            throw std::invalid_argument("planar_flat_smoothing: expected a vector field");
        auto planar = [i, j](double u, double v) {
            Point6 p{};
            p[i] = u;
            p[j] = v;
            return p;
        };
        for (const Point6& p : ball_points(r, 64)) {
            const PointTensor full = x(p), proj = x(planar(p[i], p[j]));
            if ((full - proj).max_abs() > 1e-12 * (1.0 + full.max_abs()))
                throw std::domain_error("planar_flat_smoothing: coefficients depend on other coordinates");
        }
        auto grids = std::make_shared<std::vector<std::unique_ptr<GridField>>>(6);
        for (int c = 0; c < 6; ++c) {
            const ScalarField2 g = [&x, &planar, c](double u, double v) { return x(planar(u, v)).at_mask(1u << c); };
            bool zero = true;
            for (const Point6& p : ball_points(r, 64)) zero = zero && g(p[i], p[j]) == 0.0;
            if (!zero) (*grids)[c] = std::make_unique<GridField>(smooth_flat(g, t, r, resolution));
        }
        // Nodes the flat smoothing leaves unresolved lie next to the origin,
        // where the output is flat; they read as 0.
        return FieldHandle(
            [grids, i, j](const Point6& p) {
                PointTensor out(1, Variance::Contravariant);
                for (int c = 0; c < 6; ++c) {
                    double v = 0.0;
                    if ((*grids)[c] && (*grids)[c]->interpolate(p[i], p[j], v)) out.set_mask(1u << c, v);
                }
                return out;
            },
            1, Variance::Contravariant, x.step());
    };
}

StepResult iterate_step(const NashMoserState& state, const Providers& providers, const StepOptions& opt) {
    if (!providers.homotopy || !providers.smoothing) throw std::invalid_argument("iterate_step: missing provider");
    const ScheduleParams& params = state.params;
    const ScheduleStep now = schedule(params, state.i), next = schedule(params, state.i + 1);
    const FieldHandle z = state.z;
    const FieldHandle x = providers.smoothing(providers.homotopy(z, now.r), state.i, now.t, now.r);

    StepRecord rec;
    rec.i = state.i;
    rec.r_i = now.r;
    rec.r_next = next.r;
    rec.log_t = now.log_t;
    rec.z_norm = sampled_cn_norm(z, now.r, 0, opt.samples);
    const Smallness sm = check_smallness(x, now.r, next.r, params.theta, opt.samples);
    rec.x_norm0 = sm.norm0;
    rec.x_norm1 = sm.norm1;
    rec.small = sm.holds;
    rec.noop = sm.norm0 == 0.0;
    rec.mc_residual = sampled_distance([&z](const Point6& p) { return maurer_cartan_residual(z, p); },
                                       [](const Point6&) { return PointTensor(3, Variance::Contravariant); }, now.r,
                                       opt.samples);

    StepResult out;
    out.next.i = state.i + 1;
    out.next.params = params;
    if (rec.noop) {
        out.next.z = z;
    } else {
        FlowOptions fo = opt.flow;
        fo.outer_radius = std::min(fo.outer_radius, now.r);
        const FieldHandle total = pi_field(1) + z;
        out.next.z = FieldHandle(
            [total, x, fo](const Point6& p) { return pullback_by_flow(total, x, p, fo) - pi(1, p); }, 2,
            Variance::Contravariant, z.step());
    }
    rec.z_next_norm = sampled_cn_norm(out.next.z, next.r, 0, opt.samples);
    out.record = rec;
    return out;
}

std::string run_report_json(const ScheduleParams& s, const std::vector<StepRecord>& steps) {
    nlohmann::ordered_json j;
    j["params"] = {{"a", s.slb.a},         {"b", s.slb.b}, {"c", s.slb.c},   {"p", s.p},       {"x_a", s.x_a},
                   {"y_a", s.y_a},         {"x_b", s.x_b}, {"y_b", s.y_b},   {"x_c", s.x_c},   {"y_c", s.y_c},
                   {"alpha", s.alpha},     {"r", s.r},     {"R", s.R},       {"t0", s.t0},     {"theta", s.theta}};
    const LedgerReport led = ledger_verify(s);
    auto& arr = j["ledger"] = nlohmann::ordered_json::array();
    for (const auto& e : led.entries)
        arr.push_back({{"inequality", e.name},
                       {"relation", e.relation},
                       {"lhs", to_string(e.lhs)},
                       {"rhs", to_string(e.rhs)},
                       {"margin", to_string(e.margin())},
                       {"pass", e.pass}});
    j["ledger_pass"] = led.all_pass();
    auto& st = j["steps"] = nlohmann::ordered_json::array();
    for (const auto& r : steps)
        st.push_back({{"i", r.i},
                      {"r_i", r.r_i},
                      {"r_next", r.r_next},
                      {"log_t", r.log_t},
                      {"sampled", {{"z", r.z_norm},
                                   {"x0", r.x_norm0},
                                   {"x1", r.x_norm1},
                                   {"z_next", r.z_next_norm},
                                   {"maurer_cartan", r.mc_residual}}},
                      {"small", r.small},
                      {"noop", r.noop}});
    return j.dump(2);
}

} // namespace sl2
