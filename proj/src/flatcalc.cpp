#include "sl2/flatcalc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sl2 {

GridField::GridField(double r, int resolution, Domain domain)
    : r_(r), n_(resolution), h_(0.0) {
    if (!(r > 0.0)) throw std::invalid_argument("GridField: radius must be positive");
    if (resolution < 17 || resolution % 2 == 0)
        throw std::invalid_argument("GridField: resolution must be odd and at least 17");
    h_ = 2.0 * r / (n_ - 1);
    v_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    mask_.assign(v_.size(), 1);
    if (domain == Domain::Disk)
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) set_valid(i, j, norm_at(i, j) <= r_ * (1.0 + 1e-12));
}

GridField GridField::sample(double r, int resolution, const std::function<double(double, double)>& f, Domain domain) {
    GridField g(r, resolution, domain);
    for (int i = 0; i < g.n_; ++i)
        for (int j = 0; j < g.n_; ++j)
            if (g.valid(i, j)) g.set(i, j, f(g.coord(i), g.coord(j)));
    return g;
}

double GridField::norm_at(int i, int j) const { return std::hypot(coord(i), coord(j)); }

std::size_t GridField::valid_count() const { return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1)); }

bool GridField::same_grid(const GridField& o) const { return n_ == o.n_ && r_ == o.r_; }

namespace {

std::array<double, 4> lagrange4(double u) {
    std::array<double, 4> w{};
    for (int a = 0; a < 4; ++a) {
        double p = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) p *= (u - b) / double(a - b);
        w[a] = p;
    }
    return w;
}

} // namespace

bool GridField::interpolate(double x, double y, double& out) const {
    const double ux = (x + r_) / h_, uy = (y + r_) / h_;
    const int bx = static_cast<int>(std::floor(ux)) - 1, by = static_cast<int>(std::floor(uy)) - 1;
    // Centered stencil first, then shifts of growing size toward valid nodes.
    static const auto offsets = [] {
        std::vector<std::array<int, 2>> o;
        for (int a = -3; a <= 3; ++a)
            for (int b = -3; b <= 3; ++b) o.push_back({a, b});
        std::stable_sort(o.begin(), o.end(), [](const auto& p, const auto& q) {
            return p[0] * p[0] + p[1] * p[1] < q[0] * q[0] + q[1] * q[1];
        });
        return o;
    }();
    for (const auto& o : offsets) {
        const int i0 = bx + o[0], j0 = by + o[1];
        if (i0 < 0 || j0 < 0 || i0 + 3 >= n_ || j0 + 3 >= n_) continue;
        bool ok = true;
        for (int a = 0; a < 4 && ok; ++a)
            for (int b = 0; b < 4 && ok; ++b) ok = valid(i0 + a, j0 + b);
        if (!ok) continue;
        const auto wx = lagrange4(ux - i0), wy = lagrange4(uy - j0);
        double s = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) s += wx[a] * wy[b] * at(i0 + a, j0 + b);
        out = s;
        return true;
    }
    return false;
}

GridField GridField::map(const std::function<double(double, double, double)>& f) const {
    GridField g = *this;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (valid(i, j)) g.set(i, j, f(coord(i), coord(j), at(i, j)));
    return g;
}

GridField& GridField::operator+=(const GridField& o) {
    if (!same_grid(o)) throw std::invalid_argument("GridField: grids differ");
    for (std::size_t k = 0; k < v_.size(); ++k) {
        v_[k] += o.v_[k];
        mask_[k] &= o.mask_[k];
    }
    return *this;
}

GridField& GridField::operator-=(const GridField& o) {
    if (!same_grid(o)) throw std::invalid_argument("GridField: grids differ");
    for (std::size_t k = 0; k < v_.size(); ++k) {
        v_[k] -= o.v_[k];
        mask_[k] &= o.mask_[k];
    }
    return *this;
}

GridField& GridField::operator*=(double s) {
    for (double& v : v_) v *= s;
    return *this;
}

double GridField::max_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k < v_.size(); ++k)
        if (mask_[k]) m = std::max(m, std::abs(v_[k]));
    return m;
}

std::string GridField::to_csv() const {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", r_);
    os << "r,resolution\n" << buf << ',' << n_ << "\nix,iy,value\n";
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (valid(i, j)) {
                std::snprintf(buf, sizeof buf, "%.17g", at(i, j));
                os << i << ',' << j << ',' << buf << '\n';
            }
    return os.str();
}

GridField GridField::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "r,resolution") throw std::invalid_argument("from_csv: bad header");
    double r = 0.0;
    int n = 0;
    char comma = 0;
    if (!std::getline(is, line)) throw std::invalid_argument("from_csv: missing grid line");
    std::istringstream hdr(line);
    if (!(hdr >> r >> comma >> n) || comma != ',') throw std::invalid_argument("from_csv: bad grid line");
    if (!std::getline(is, line) || line != "ix,iy,value") throw std::invalid_argument("from_csv: bad column header");
    GridField g(r, n, Domain::Square);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.set_valid(i, j, false);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        int i = 0, j = 0;
        double v = 0.0;
        char c1 = 0, c2 = 0;
        if (!(row >> i >> c1 >> j >> c2 >> v) || c1 != ',' || c2 != ',' || i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("from_csv: bad row '" + line + "'");
        g.set(i, j, v);
        g.set_valid(i, j, true);
    }
    return g;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

GridField operator*(const GridField& a, const GridField& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("GridField: grids differ");
    GridField out = a;
    for (int i = 0; i < a.resolution(); ++i)
        for (int j = 0; j < a.resolution(); ++j) {
            out.set(i, j, a.at(i, j) * b.at(i, j));
            out.set_valid(i, j, a.valid(i, j) && b.valid(i, j));
        }
    return out;
}

GridField derivative(const GridField& f, int axis) {
    if (axis != 0 && axis != 1) throw std::invalid_argument("derivative: axis must be 0 or 1");
    // Five-point weights (times 12 h) for the node at stencil position p.
    static const double w[5][5] = {{-25, 48, -36, 16, -3},
                                   {-3, -10, 18, -6, 1},
                                   {1, -8, 0, 8, -1},
                                   {-1, 6, -18, 10, 3},
                                   {3, -16, 36, -48, 25}};
    static const int preference[5] = {2, 1, 3, 0, 4};
    const int n = f.resolution();
    const double h = f.spacing();
    GridField out = f;
    auto node = [&](int i, int j, int s) { return axis == 0 ? std::make_pair(i + s, j) : std::make_pair(i, j + s); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.set(i, j, 0.0);
            if (!f.valid(i, j)) continue;
            bool done = false;
            for (int p : preference) {
                bool ok = true;
                for (int s = 0; s < 5 && ok; ++s) {
                    const auto [a, b] = node(i, j, s - p);
                    ok = a >= 0 && b >= 0 && a < n && b < n && f.valid(a, b);
                }
                if (!ok) continue;
                double d = 0.0;
                for (int s = 0; s < 5; ++s) {
                    const auto [a, b] = node(i, j, s - p);
                    d += w[p][s] * f.at(a, b);
                }
                out.set(i, j, d / (12.0 * h));
                done = true;
                break;
            }
            out.set_valid(i, j, done);
        }
    return out;
}

namespace {

// All derivatives D_x^a D_y^b f with a + b <= n.
std::vector<GridField> derivatives_up_to(const GridField& f, int n) {
    if (n < 0 || n > 3) throw std::invalid_argument("flat norms: derivative order must be in [0, 3]");
    std::vector<GridField> out{f};
    std::vector<GridField> level{f};
    for (int m = 1; m <= n; ++m) {
        std::vector<GridField> next;
        // From the previous level (x^a y^b, a descending) take d_x of all and
        // d_y of the last to cover every x^a y^{m-a}.
        for (const auto& g : level) next.push_back(derivative(g, 0));
        next.push_back(derivative(level.back(), 1));
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

double weighted_sup(const std::vector<GridField>& ds, const NormIndex& idx, const GridField& grid, bool weight) {
    const double floor = 2.0 * grid.spacing();
    double sup = 0.0;
    for (int i = 0; i < grid.resolution(); ++i)
        for (int j = 0; j < grid.resolution(); ++j) {
            const double rho = grid.norm_at(i, j);
            if (rho > idx.r * (1.0 + 1e-12)) continue;
            if (idx.k > 0.0 && rho < floor) continue;
            const double w = weight && idx.k > 0.0 ? std::pow(rho, -idx.k) : 1.0;
            for (const auto& d : ds)
                if (d.valid(i, j)) sup = std::max(sup, w * std::abs(d.at(i, j)));
        }
    return sup;
}

void require_flat(const GridField& f, const NormIndex& idx) {
    if (idx.k <= 0.0) return;
    const int c = f.resolution() / 2;
    if (f.valid(c, c) && std::abs(f.at(c, c)) > 1e-12 * std::max(1.0, f.max_abs()))
        throw std::invalid_argument("flat norm with k > 0 of a function not vanishing at the origin");
}

} // namespace

double flat_norm(const GridField& f, const NormIndex& idx) {
    require_flat(f, idx);
    return weighted_sup(derivatives_up_to(f, idx.n), idx, f, true);
}

double alt_norm(const GridField& f, const NormIndex& idx) {
    require_flat(f, idx);
    const GridField g = f.map([k = idx.k](double x, double y, double v) {
        const double rho = std::hypot(x, y);
        if (k <= 0.0) return v;
        return rho > 0.0 ? std::pow(rho, -k) * v : 0.0;
    });
    return weighted_sup(derivatives_up_to(g, idx.n), idx, f, false);
}

double interpolation_probe(const std::vector<GridField>& family, InterpolationKind kind, const InterpolationIndices& idx) {
    const double a = double(idx.l2) / (idx.l1 + idx.l2), b = double(idx.l1) / (idx.l1 + idx.l2);
    double sup = 0.0;
    for (const auto& f : family) {
        double lhs, lo, hi;
        switch (kind) {
        case InterpolationKind::Standard:
        case InterpolationKind::Derivative: {
            if (idx.l1 > idx.n) throw std::invalid_argument("interpolation_probe: l1 > n");
            const double k = kind == InterpolationKind::Standard ? 0.0 : idx.k;
            lhs = flat_norm(f, {idx.n, k, idx.r});
            lo = flat_norm(f, {idx.n - idx.l1, k, idx.r});
            hi = flat_norm(f, {idx.n + idx.l2, k, idx.r});
            break;
        }
        case InterpolationKind::Weight: {
            if (idx.l1 > idx.k) throw std::invalid_argument("interpolation_probe: l1 > k");
            lhs = flat_norm(f, {idx.n, idx.k, idx.r});
            lo = flat_norm(f, {idx.n, idx.k - idx.l1, idx.r});
            hi = flat_norm(f, {idx.n, idx.k + idx.l2, idx.r});
            break;
        }
        default:
            throw std::invalid_argument("interpolation_probe: kind");
        }
        const double rhs = std::pow(lo, a) * std::pow(hi, b);
        if (rhs > 0.0) sup = std::max(sup, lhs / rhs);
    }
    return sup;
}

namespace {

void require_same(const GridField& a, const GridField& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("module operations need fields on one grid");
}

template <class F>
double residual_sup(const GridField& g1, const GridField& g2, F rel) {
    require_same(g1, g2);
    double sup = 0.0;
    for (int i = 0; i < g1.resolution(); ++i)
        for (int j = 0; j < g1.resolution(); ++j) {
            if (!g1.valid(i, j) || !g2.valid(i, j)) continue;
            const double x = g1.coord(i), y = g1.coord(j), z = std::hypot(x, y);
            sup = std::max(sup, std::abs(rel(x, y, z, g1.at(i, j), g2.at(i, j))));
        }
    return sup;
}

double module_scale(const GridField& g1, const GridField& g2) {
    return g1.radius() * std::max(g1.max_abs(), g2.max_abs());
}

template <class F>
FieldPair project(const GridField& g1, const GridField& g2, F formula) {
    require_same(g1, g2);
    GridField a = g1, b = g2;
    const double floor = 2.0 * g1.spacing();
    for (int i = 0; i < g1.resolution(); ++i)
        for (int j = 0; j < g1.resolution(); ++j) {
            const double x = g1.coord(i), y = g1.coord(j), z = std::hypot(x, y);
            const bool ok = g1.valid(i, j) && g2.valid(i, j) && z >= floor;
            a.set_valid(i, j, ok);
            b.set_valid(i, j, ok);
            if (!ok) {
                a.set(i, j, 0.0);
                b.set(i, j, 0.0);
                continue;
            }
            const auto [p, q] = formula(x, y, z, g1.at(i, j), g2.at(i, j));
            a.set(i, j, p);
            b.set(i, j, q);
        }
    return {a, b};
}

} // namespace

double module_residual_M(const GridField& g1, const GridField& g2) {
    return residual_sup(g1, g2, [](double x, double y, double z, double a, double b) { return y * a + (z + x) * b; });
}

double module_residual_K(const GridField& g1, const GridField& g2) {
    return residual_sup(g1, g2, [](double x, double y, double z, double a, double b) { return y * a - (z - x) * b; });
}

bool in_module_M(const GridField& g1, const GridField& g2, double tol) {
    return module_residual_M(g1, g2) <= tol * module_scale(g1, g2);
}

bool in_module_K(const GridField& g1, const GridField& g2, double tol) {
    return module_residual_K(g1, g2) <= tol * module_scale(g1, g2);
}

FieldPair project_M(const GridField& g1, const GridField& g2) {
    return project(g1, g2, [](double x, double y, double z, double a, double b) {
        const double s = 0.5 / z;
        return std::make_pair(s * ((z + x) * a - y * b), s * (-y * a + (z - x) * b));
    });
}

FieldPair project_K(const GridField& g1, const GridField& g2) {
    return project(g1, g2, [](double x, double y, double z, double a, double b) {
        const double s = 0.5 / z;
        return std::make_pair(s * ((z - x) * a + y * b), s * (y * a + (z + x) * b));
    });
}

FieldPair twist_J(const GridField& g1, const GridField& g2) {
    require_same(g1, g2);
    return {-1.0 * g2, g1};
}

ParityParts parity_decompose(const GridField& g) {
    const int n = g.resolution();
    const double floor = 2.0 * g.spacing();
    GridField g0 = g, gx = g, gy = g, gxy = g;
    std::size_t masked = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int ri = n - 1 - i, rj = n - 1 - j;
            const bool ok = g.valid(i, j) && g.valid(ri, rj) && g.valid(i, rj) && g.valid(ri, j);
            const double v = g.at(i, j), s = g.at(ri, rj), t = g.at(i, rj), st = g.at(ri, j);
            const double x = g.coord(i), y = g.coord(j);
            const bool okx = ok && std::abs(x) >= floor, oky = ok && std::abs(y) >= floor;
            g0.set_valid(i, j, ok);
            g0.set(i, j, ok ? 0.25 * (v + s + t + st) : 0.0);
            gx.set_valid(i, j, okx);
            gx.set(i, j, okx ? 0.25 * (v - s + t - st) / x : 0.0);
            gy.set_valid(i, j, oky);
            gy.set(i, j, oky ? 0.25 * (v - s - t + st) / y : 0.0);
            gxy.set_valid(i, j, okx && oky);
            gxy.set(i, j, okx && oky ? 0.25 * (v + s - t - st) / (x * y) : 0.0);
            if (g.valid(i, j) && !(okx && oky)) ++masked;
        }
    return {g0, gx, gy, gxy, masked};
}

GridField sq_pullback(const GridField& g) {
    GridField h(std::sqrt(g.radius()), g.resolution());
    for (int i = 0; i < h.resolution(); ++i)
        for (int j = 0; j < h.resolution(); ++j) {
            if (!h.valid(i, j)) continue;
            const double a = h.coord(i), b = h.coord(j);
            double v = 0.0;
            const bool ok = g.interpolate(a * a - b * b, 2.0 * a * b, v);
            h.set_valid(i, j, ok);
            h.set(i, j, ok ? v : 0.0);
        }
    return h;
}

GridField sq_descend(const GridField& h, double tol) {
    const int n = h.resolution();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (h.valid(i, j) && h.valid(n - 1 - i, n - 1 - j) &&
                std::abs(h.at(i, j) - h.at(n - 1 - i, n - 1 - j)) > tol)
                throw std::invalid_argument("sq_descend: input is not invariant under l -> -l");
    const double rho = h.radius();
    GridField g(rho * rho, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!g.valid(i, j)) continue;
            const double x = g.coord(i), y = g.coord(j);
            // Principal square root; either branch gives the same value.
            const double m = std::hypot(x, y);
            const double a = std::sqrt(0.5 * (m + x));
            const double b = std::copysign(std::sqrt(0.5 * std::max(0.0, m - x)), y);
            double v = 0.0;
            const bool ok = h.interpolate(a, b, v);
            g.set_valid(i, j, ok);
            g.set(i, j, ok ? v : 0.0);
        }
    return g;
}

namespace {
void check_field_args(int i, double x, double y, const char* what) {
    if (i != 1 && i != 2) throw std::invalid_argument(std::string(what) + ": index must be 1 or 2");
    if (std::hypot(x, y) < 1e-15) throw std::invalid_argument(std::string(what) + ": point too close to 0");
}
} // namespace

std::array<double, 2> y_field(int i, double x, double y) {
    check_field_args(i, x, y, "y_field");
    const double z = std::hypot(x, y);
    if (i == 1) return {-y, z + x};
    return {z - x, -y};
}

std::array<double, 2> w_field(int i, double l1, double l2) {
    check_field_args(i, l1, l2, "w_field");
    const double s = 0.5 / (l1 * l1 + l2 * l2);
    if (i == 1) return {s * l1, -s * l2};
    return {s * l2, s * l1};
}

} // namespace sl2
