#include "sl2/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sl2 {

namespace {

constexpr const char* kNames[6] = {"x1", "x2", "x3", "y1", "y2", "y3"};

std::vector<int> tuple_of(unsigned mask) {
    std::vector<int> out;
    for (int i = 0; i < 6; ++i)
        if (mask & (1u << i)) out.push_back(i);
    return out;
}

bool compatible(const PointTensor& a, const PointTensor& b) {
    return a.degree() == 0 || b.degree() == 0 || a.variance() == b.variance();
}

} // namespace

PointTensor::PointTensor(int degree, Variance v) : degree_(degree), variance_(v) {
    if (degree < 0 || degree > 6) throw std::invalid_argument("PointTensor: degree in 0..6");
}

PointTensor PointTensor::scalar(double s) {
    PointTensor t(0, Variance::Contravariant);
    t.c_[0] = s;
    return t;
}

PointTensor PointTensor::basis(Variance v, std::initializer_list<int> idx) {
    PointTensor t(static_cast<int>(idx.size()), v);
    unsigned mask = 0;
    int inversions = 0;
    std::vector<int> seen;
    for (int i : idx) {
        if (i < 0 || i > 5) throw std::invalid_argument("PointTensor::basis: index in 0..5");
        if (mask & (1u << i)) return t;
        for (int j : seen)
            if (j > i) ++inversions;
        seen.push_back(i);
        mask |= 1u << i;
    }
    t.c_[mask] = (inversions % 2) ? -1.0 : 1.0;
    return t;
}

void PointTensor::set_mask(unsigned mask, double v) {
    if (mask >= 64 || std::popcount(mask) != degree_) {
        throw std::invalid_argument("PointTensor: mask does not match degree");
    }
    c_[mask] = v;
}

double PointTensor::component(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("PointTensor::component: arity");
    unsigned mask = 0;
    int inversions = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (mask & (1u << idx[a])) return 0.0;
        mask |= 1u << idx[a];
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (idx[a] > idx[b]) ++inversions;
    }
    return (inversions % 2 ? -1.0 : 1.0) * c_[mask];
}

const std::vector<unsigned>& PointTensor::masks(int degree) {
    static const std::array<std::vector<unsigned>, 7> table = [] {
        std::array<std::vector<unsigned>, 7> t;
        for (unsigned m = 0; m < 64; ++m) t[std::popcount(m)].push_back(m);
        for (auto& v : t) std::sort(v.begin(), v.end(), [](unsigned a, unsigned b) { return tuple_of(a) < tuple_of(b); });
        return t;
    }();
    return table.at(degree);
}

std::vector<double> PointTensor::components() const {
    std::vector<double> out;
    for (unsigned m : masks(degree_)) out.push_back(c_[m]);
    return out;
}

double PointTensor::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

std::string PointTensor::to_string() const {
    std::ostringstream os;
    os << (variance_ == Variance::Covariant ? "form" : "multivector") << "[" << degree_ << "]{";
    bool first = true;
    for (unsigned m : masks(degree_)) {
        if (c_[m] == 0.0) continue;
        if (!first) os << ", ";
        first = false;
        for (int i : tuple_of(m)) os << kNames[i];
        os << ": " << c_[m];
    }
    os << "}";
    return os.str();
}

PointTensor& PointTensor::operator+=(const PointTensor& o) {
    if (o.degree_ != degree_ || (degree_ > 0 && o.variance_ != variance_)) {
        throw std::invalid_argument("PointTensor: adding tensors of different type");
    }
    for (int i = 0; i < 64; ++i) c_[i] += o.c_[i];
    return *this;
}

PointTensor& PointTensor::operator-=(const PointTensor& o) {
    PointTensor neg = o;
    neg *= -1.0;
    return *this += neg;
}

PointTensor& PointTensor::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

PointTensor operator+(PointTensor a, const PointTensor& b) { return a += b; }
PointTensor operator-(PointTensor a, const PointTensor& b) { return a -= b; }
PointTensor operator*(double s, PointTensor a) { return a *= s; }

int merge_sign(unsigned a, unsigned b) {
    int inversions = 0;
    for (int j = 0; j < 6; ++j) {
        if (!(b & (1u << j))) continue;
        inversions += std::popcount(a >> (j + 1));
    }
    return inversions % 2 ? -1 : 1;
}

PointTensor wedge(const PointTensor& a, const PointTensor& b) {
    if (!compatible(a, b)) throw std::invalid_argument("wedge: variance mismatch");
    const int deg = a.degree() + b.degree();
    const Variance v = a.degree() > 0 ? a.variance() : b.variance();
    if (deg > 6) return PointTensor(0, v);
    PointTensor out(deg, v);
    for (unsigned ma : PointTensor::masks(a.degree())) {
        const double ca = a.at_mask(ma);
        if (ca == 0.0) continue;
        for (unsigned mb : PointTensor::masks(b.degree())) {
            if (ma & mb) continue;
            const double cb = b.at_mask(mb);
            if (cb == 0.0) continue;
            out.add_mask(ma | mb, merge_sign(ma, mb) * ca * cb);
        }
    }
    return out;
}

PointTensor interior(const PointTensor& v, const PointTensor& t) {
    if (v.degree() != 1) throw std::invalid_argument("interior: first argument must have degree 1");
    if (t.degree() == 0) throw std::invalid_argument("interior: contraction into a scalar");
    if (v.variance() == t.variance()) throw std::invalid_argument("interior: variances must be opposite");
    PointTensor out(t.degree() - 1, t.variance());
    for (unsigned m : PointTensor::masks(t.degree())) {
        const double c = t.at_mask(m);
        if (c == 0.0) continue;
        int pos = 0;
        for (int i = 0; i < 6; ++i) {
            if (!(m & (1u << i))) continue;
            out.add_mask(m & ~(1u << i), (pos % 2 ? -1.0 : 1.0) * v.at_mask(1u << i) * c);
            ++pos;
        }
    }
    return out;
}

double pairing(const PointTensor& form, const PointTensor& multivector) {
    if (form.degree() != multivector.degree()) throw std::invalid_argument("pairing: degree mismatch");
    double acc = 0.0;
    for (unsigned m : PointTensor::masks(form.degree())) acc += form.at_mask(m) * multivector.at_mask(m);
    return acc;
}

double evaluate(const PointTensor& form, const std::vector<Point6>& vectors) {
    if (form.degree() != static_cast<int>(vectors.size())) throw std::invalid_argument("evaluate: arity");
    if (form.variance() != Variance::Covariant && form.degree() > 0) throw std::invalid_argument("evaluate: form required");
    // Expand as the determinant of the p x p minor for each sorted tuple.
    const int p = form.degree();
    double acc = 0.0;
    for (unsigned m : PointTensor::masks(p)) {
        const double c = form.at_mask(m);
        if (c == 0.0) continue;
        const auto idx = tuple_of(m);
        std::vector<int> perm(p);
        for (int i = 0; i < p; ++i) perm[i] = i;
        double det = 0.0;
        do {
            int inversions = 0;
            for (int a = 0; a < p; ++a)
                for (int b = a + 1; b < p; ++b)
                    if (perm[a] > perm[b]) ++inversions;
            double term = inversions % 2 ? -1.0 : 1.0;
            for (int a = 0; a < p; ++a) term *= vectors[a][idx[perm[a]]];
            det += term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        acc += c * det;
    }
    return acc;
}

Mat6 to_matrix(const PointTensor& t) {
    if (t.degree() != 2) throw std::invalid_argument("to_matrix: degree 2 required");
    Mat6 m{};
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            const double c = t.at_mask((1u << i) | (1u << j));
            m[i][j] = c;
            m[j][i] = -c;
        }
    return m;
}

PointTensor from_matrix(const Mat6& m, Variance v) {
    PointTensor t(2, v);
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) t.set_mask((1u << i) | (1u << j), 0.5 * (m[i][j] - m[j][i]));
    return t;
}

Mat6 matmul(const Mat6& a, const Mat6& b) {
    Mat6 c{};
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k)
            for (int j = 0; j < 6; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Mat6 transpose(const Mat6& a) {
    Mat6 t{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) t[i][j] = a[j][i];
    return t;
}

PointTensor flat(const PointTensor& omega, const PointTensor& p) {
    if (omega.variance() != Variance::Covariant || p.variance() != Variance::Contravariant) {
        throw std::invalid_argument("flat: expects a 2-form and a bivector");
    }
    const Mat6 w = to_matrix(omega);
    return from_matrix(matmul(transpose(w), matmul(to_matrix(p), w)), Variance::Covariant);
}

PointTensor sharp(const PointTensor& p, const PointTensor& alpha) {
    if (p.degree() != 2 || alpha.degree() != 1) throw std::invalid_argument("sharp: bivector and 1-form");
    const Mat6 m = to_matrix(p);
    PointTensor out(1, Variance::Contravariant);
    for (int j = 0; j < 6; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 6; ++i) acc += alpha.at_mask(1u << i) * m[i][j];
        out.set_mask(1u << j, acc);
    }
    return out;
}

FieldHandle::FieldHandle(Eval eval, int degree, Variance v, double step, std::optional<Deriv> deriv)
    : eval_(std::move(eval)), degree_(degree), variance_(v), step_(step), deriv_(std::move(deriv)) {
    if (!(step > 0.0)) throw std::invalid_argument("FieldHandle: step > 0 required");
}

PointTensor FieldHandle::operator()(const Point6& x) const { return eval_(x); }

PointTensor FieldHandle::partial(const Point6& x, int k) const {
    if (deriv_) return (*deriv_)(x, k);
    auto at = [&](double h) {
        Point6 y = x;
        y[k] += h;
        return eval_(y);
    };
    const double h = step_;
    const PointTensor d1 = (0.5 / h) * (at(h) - at(-h));
    const PointTensor d2 = (1.0 / h) * (at(0.5 * h) - at(-0.5 * h));
    return (4.0 / 3.0) * d2 - (1.0 / 3.0) * d1;
}

FieldHandle constant_field(const PointTensor& t) {
    const PointTensor zero(t.degree(), t.variance());
    return FieldHandle([t](const Point6&) { return t; }, t.degree(), t.variance(), 1e-3,
                       [zero](const Point6&, int) { return zero; });
}

namespace {

FieldHandle combine(const FieldHandle& a, const FieldHandle& b, double sb) {
    if (a.degree() != b.degree()) throw std::invalid_argument("FieldHandle: degree mismatch");
    std::optional<FieldHandle::Deriv> d;
    if (a.has_analytic_derivative() && b.has_analytic_derivative()) {
        d = [a, b, sb](const Point6& x, int k) { return a.partial(x, k) + sb * b.partial(x, k); };
    }
    return FieldHandle([a, b, sb](const Point6& x) { return a(x) + sb * b(x); }, a.degree(), a.variance(),
                       std::max(a.step(), b.step()), d);
}

} // namespace

FieldHandle operator+(const FieldHandle& a, const FieldHandle& b) { return combine(a, b, 1.0); }
FieldHandle operator-(const FieldHandle& a, const FieldHandle& b) { return combine(a, b, -1.0); }

FieldHandle scale(double s, const FieldHandle& a) {
    std::optional<FieldHandle::Deriv> d;
    if (a.has_analytic_derivative()) d = [a, s](const Point6& x, int k) { return s * a.partial(x, k); };
    return FieldHandle([a, s](const Point6& x) { return s * a(x); }, a.degree(), a.variance(), a.step(), d);
}

FieldHandle wedge(const FieldHandle& a, const FieldHandle& b) {
    const Variance v = a.degree() > 0 ? a.variance() : b.variance();
    std::optional<FieldHandle::Deriv> d;
    if (a.has_analytic_derivative() && b.has_analytic_derivative()) {
        d = [a, b](const Point6& x, int k) { return wedge(a.partial(x, k), b(x)) + wedge(a(x), b.partial(x, k)); };
    }
    return FieldHandle([a, b](const Point6& x) { return wedge(a(x), b(x)); }, a.degree() + b.degree(), v,
                       std::max(a.step(), b.step()), d);
}

PointTensor exterior_derivative(const FieldHandle& form, const Point6& x) {
    if (form.degree() > 0 && form.variance() != Variance::Covariant) {
        throw std::invalid_argument("exterior_derivative: covariant field required");
    }
    PointTensor out(form.degree() + 1, Variance::Covariant);
    if (form.degree() == 6) return PointTensor(0, Variance::Covariant);
    for (int k = 0; k < 6; ++k) out += wedge(PointTensor::basis(Variance::Covariant, {k}), form.partial(x, k));
    return out;
}

FieldHandle exterior_derivative_field(const FieldHandle& form, double step) {
    return FieldHandle([form](const Point6& x) { return exterior_derivative(form, x); }, form.degree() + 1,
                       Variance::Covariant, step);
}

PointTensor odd_derivative(const PointTensor& p, int i) {
    if (p.degree() == 0) throw std::invalid_argument("odd_derivative: scalar input");
    PointTensor out(p.degree() - 1, p.variance());
    const unsigned bit = 1u << i;
    for (unsigned m : PointTensor::masks(p.degree())) {
        if (!(m & bit)) continue;
        const int after = std::popcount(m >> (i + 1));
        out.add_mask(m & ~bit, (after % 2 ? -1.0 : 1.0) * p.at_mask(m));
    }
    return out;
}

PointTensor schouten(const FieldHandle& p, const FieldHandle& q, const Point6& x) {
    for (const FieldHandle* f : {&p, &q}) {
        if (f->degree() > 0 && f->variance() != Variance::Contravariant) {
            throw std::invalid_argument("schouten: multivector fields required");
        }
    }
    const int dp = p.degree();
    const int dq = q.degree();
    const int deg = dp + dq - 1;
    if (deg < 0) return PointTensor::scalar(0.0);
    PointTensor out(std::min(deg, 6), Variance::Contravariant);
    if (deg > 6) return out;
    const double sgn = ((dp - 1) * (dq - 1)) % 2 ? -1.0 : 1.0;
    const PointTensor pv = p(x);
    const PointTensor qv = q(x);
    for (int i = 0; i < 6; ++i) {
        if (dp > 0) out += wedge(odd_derivative(pv, i), q.partial(x, i));
        if (dq > 0) out -= sgn * wedge(odd_derivative(qv, i), p.partial(x, i));
    }
    return out;
}

FieldHandle schouten_field(const FieldHandle& p, const FieldHandle& q, double step) {
    const int deg = std::max(p.degree() + q.degree() - 1, 0);
    return FieldHandle([p, q](const Point6& x) { return schouten(p, q, x); }, deg, Variance::Contravariant, step);
}

} // namespace sl2
