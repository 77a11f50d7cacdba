// Pointwise exterior calculus on R^6 with basis (x1, x2, x3, y1, y2, y3) and
// differentiable fields evaluated by callback.
#pragma once

#include <array>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace sl2 {

using Point6 = std::array<double, 6>;
using Mat6 = std::array<std::array<double, 6>, 6>;

enum class Variance { Covariant, Contravariant };

// Antisymmetric tensor of degree p. Components live on sorted index tuples,
// addressed by the bitmask of the tuple.
class PointTensor {
public:
    PointTensor() : PointTensor(0, Variance::Contravariant) {}
    PointTensor(int degree, Variance v);

    static PointTensor scalar(double s);
    // Basis element dx_{i1} ^ ... (covariant) or d_{i1} ^ ... (contravariant);
    // indices in any order, sign by permutation parity.
    static PointTensor basis(Variance v, std::initializer_list<int> idx);

    int degree() const { return degree_; }
    Variance variance() const { return variance_; }

    double at_mask(unsigned mask) const { return c_[mask]; }
    void set_mask(unsigned mask, double v);
    void add_mask(unsigned mask, double v) { set_mask(mask, c_[mask] + v); }
    // Component for an arbitrary index order (zero on repeated indices).
    double component(const std::vector<int>& idx) const;

    // Masks of degree p in lexicographic order of the sorted tuples.
    static const std::vector<unsigned>& masks(int degree);
    std::vector<double> components() const;

    double max_abs() const;
    std::string to_string() const;

    PointTensor& operator+=(const PointTensor& o);
    PointTensor& operator-=(const PointTensor& o);
    PointTensor& operator*=(double s);

private:
    int degree_;
    Variance variance_;
    std::array<double, 64> c_{};
};

PointTensor operator+(PointTensor a, const PointTensor& b);
PointTensor operator-(PointTensor a, const PointTensor& b);
PointTensor operator*(double s, PointTensor a);

// Sign of moving the tuple of `b` past the tuple of `a` into sorted order.
int merge_sign(unsigned a, unsigned b);

PointTensor wedge(const PointTensor& a, const PointTensor& b);
// Contraction of a degree-1 tensor into the first slot of t (opposite variance).
PointTensor interior(const PointTensor& v, const PointTensor& t);
// Full pairing of a p-form with a p-vector on the sorted basis.
double pairing(const PointTensor& form, const PointTensor& multivector);

// alpha(v_1, ..., v_p) for a p-form and p vectors given by components.
double evaluate(const PointTensor& form, const std::vector<Point6>& vectors);

// Degree-2 tensors as antisymmetric 6x6 matrices and back.
Mat6 to_matrix(const PointTensor& t);
PointTensor from_matrix(const Mat6& m, Variance v);
Mat6 matmul(const Mat6& a, const Mat6& b);
Mat6 transpose(const Mat6& a);
// omega^flat applied to a bivector P: the 2-form with matrix Omega^T P Omega.
PointTensor flat(const PointTensor& omega, const PointTensor& p);
// Contravariant image P^sharp(alpha) of a 1-form.
PointTensor sharp(const PointTensor& p, const PointTensor& alpha);

// A field point -> tensor. When `deriv` is absent, partial derivatives come
// from Richardson-extrapolated central differences with step `step`.
class FieldHandle {
public:
    using Eval = std::function<PointTensor(const Point6&)>;
    using Deriv = std::function<PointTensor(const Point6&, int)>;

    FieldHandle(Eval eval, int degree, Variance v, double step = 1e-3,
                std::optional<Deriv> deriv = std::nullopt);

    PointTensor operator()(const Point6& x) const;
    PointTensor partial(const Point6& x, int k) const;
    int degree() const { return degree_; }
    Variance variance() const { return variance_; }
    double step() const { return step_; }
    bool has_analytic_derivative() const { return deriv_.has_value(); }

private:
    Eval eval_;
    int degree_;
    Variance variance_;
    double step_;
    std::optional<Deriv> deriv_;
};

FieldHandle constant_field(const PointTensor& t);
FieldHandle operator+(const FieldHandle& a, const FieldHandle& b);
FieldHandle operator-(const FieldHandle& a, const FieldHandle& b);
FieldHandle scale(double s, const FieldHandle& a);
FieldHandle wedge(const FieldHandle& a, const FieldHandle& b);

PointTensor exterior_derivative(const FieldHandle& form, const Point6& x);
FieldHandle exterior_derivative_field(const FieldHandle& form, double step = 1e-3);

// [P, Q] = sum_i (dR_i P) ^ d_i Q - (-1)^{(p-1)(q-1)} (dR_i Q) ^ d_i P with
// dR_i the right derivative in the odd variable paired with x_i.
PointTensor schouten(const FieldHandle& p, const FieldHandle& q, const Point6& x);
FieldHandle schouten_field(const FieldHandle& p, const FieldHandle& q, double step = 1e-3);

// Right odd derivative of a multivector along basis direction i.
PointTensor odd_derivative(const PointTensor& p, int i);

} // namespace sl2
