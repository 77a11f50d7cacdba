// Calculus on C ~ R^2 for functions flat at the origin: sampled grid fields,
// weighted flat norms, the modules M and K, parity splitting, the square map
// and the vector fields Y_i, W_i.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sl2 {

// Real samples on the square [-r, r]^2 with an odd number of nodes per axis,
// so the origin is a node and sign flips act by index reflection. Nodes
// carry a validity flag; by default exactly the nodes of the closed disk.
class GridField {
public:
    enum class Domain { Disk, Square };

    GridField(double r, int resolution, Domain domain = Domain::Disk);
    static GridField sample(double r, int resolution, const std::function<double(double, double)>& f,
                            Domain domain = Domain::Disk);

    double radius() const { return r_; }
    int resolution() const { return n_; }
    double spacing() const { return h_; }
    double coord(int i) const { return h_ * (i - (n_ - 1) / 2); }
    double norm_at(int i, int j) const;

    double at(int i, int j) const { return v_[index(i, j)]; }
    void set(int i, int j, double v) { v_[index(i, j)] = v; }
    bool valid(int i, int j) const { return mask_[index(i, j)] != 0; }
    void set_valid(int i, int j, bool ok) { mask_[index(i, j)] = ok ? 1 : 0; }
    std::size_t valid_count() const;

    // Cubic Lagrange interpolation in each axis with a stencil shifted to
    // valid nodes when needed. Returns false if no valid 4x4 stencil exists.
    bool interpolate(double x, double y, double& out) const;

    // Same grid, values and mask; combinations intersect the masks.
    GridField map(const std::function<double(double, double, double)>& f) const;
    GridField& operator+=(const GridField& o);
    GridField& operator-=(const GridField& o);
    GridField& operator*=(double s);
    double max_abs() const;

    // CSV: "r,resolution" header line, its values, then "ix,iy,value" rows
    // for valid nodes.
    std::string to_csv() const;
    static GridField from_csv(const std::string& text);

    bool same_grid(const GridField& o) const;

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    double r_;
    int n_;
    double h_;
    std::vector<double> v_;
    std::vector<std::uint8_t> mask_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);
// Pointwise product; masks intersect.
GridField operator*(const GridField& a, const GridField& b);

// Fourth-order first derivative along axis 0 (x) or 1 (y): central where the
// five-point stencil is valid, otherwise one-sided toward valid nodes. Nodes
// without any valid stencil become invalid.
GridField derivative(const GridField& f, int axis);

struct NormIndex {
    int n = 0;
    double k = 0.0;
    double r = 1.0;
};

// sup over valid nodes with |x| <= r of |x|^{-k} |D^a f|, |a| <= n <= 3;
// nodes with |x| < 2 h are excluded when k > 0.
double flat_norm(const GridField& f, const NormIndex& idx);
// sup of |D^a(|x|^{-k} f)| over the same nodes; the weighted field is set to 0
// at the origin.
double alt_norm(const GridField& f, const NormIndex& idx);

enum class InterpolationKind { Standard, Derivative, Weight };
struct InterpolationIndices {
    int n = 1;     // middle derivative order (Standard / Derivative) or fixed n (Weight)
    int l1 = 1;    // lower step (derivative or weight)
    int l2 = 1;    // upper step
    double k = 0;  // weight (Derivative) or middle weight (Weight)
    double r = 1.0;
};
// sup over the family of LHS / RHS for
//   Standard:   ||f||_n <= C ||f||_{n-l1}^{l2/(l1+l2)} ||f||_{n+l2}^{l1/(l1+l2)}
//   Derivative: the same with weight k,
//   Weight:     ||f||_{n,k} <= C ||f||_{n,k-l1}^{l2/(l1+l2)} ||f||_{n,k+l2}^{l1/(l1+l2)}.
// Members with zero right-hand side contribute 0.
double interpolation_probe(const std::vector<GridField>& family, InterpolationKind kind,
                           const InterpolationIndices& idx);

// Modules M = {y g1 = -(|z|+x) g2} and K = {y g1 = (|z|-x) g2}.
bool in_module_M(const GridField& g1, const GridField& g2, double tol);
bool in_module_K(const GridField& g1, const GridField& g2, double tol);
// Residual sup |y g1 + (|z|+x) g2| (M) or |y g1 - (|z|-x) g2| (K).
double module_residual_M(const GridField& g1, const GridField& g2);
double module_residual_K(const GridField& g1, const GridField& g2);

using FieldPair = std::pair<GridField, GridField>;
// Nodes with |z| < 2 h are invalid in the outputs.
FieldPair project_M(const GridField& g1, const GridField& g2);
FieldPair project_K(const GridField& g1, const GridField& g2);
FieldPair twist_J(const GridField& g1, const GridField& g2); // (-g2, g1)

struct ParityParts {
    GridField g0, gx, gy, gxy;
    std::size_t masked; // nodes dropped by the division near the axes
};
// g = g0 + x gx + y gy + xy gxy with all four parts even in x and in y.
ParityParts parity_decompose(const GridField& g);

// h(l) = g(l^2) on the disk of radius sqrt(r); nodes whose image leaves the
// valid part of g are invalid.
GridField sq_pullback(const GridField& g);
// g(z) = h(sqrt z) on the disk of radius rho^2; throws std::invalid_argument if
// h is not even within tol.
GridField sq_descend(const GridField& h, double tol);

// Coefficient vectors of Y_1 = -y d_x + (|z|+x) d_y, Y_2 = (|z|-x) d_x - y d_y.
std::array<double, 2> y_field(int i, double x, double y);
// W_1 = (l1 d_1 - l2 d_2) / (2|l|^2), W_2 = (l2 d_1 + l1 d_2) / (2|l|^2).
std::array<double, 2> w_field(int i, double l1, double l2);

} // namespace sl2
