#include "anosov/cone.hpp"

#include "anosov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anosov {

namespace {

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1, 0, 8, 1>;

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u)
{
    if (u <= 0.0) {
        return 0.0;
    }
    if (u >= 1.0) {
        return 1.0;
    }
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double smooth_step_derivative(double u)
{
    if (u <= 0.0 || u >= 1.0) {
        return 0.0;
    }
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    const double da = a / (u * u);
    const double db = -b / ((1.0 - u) * (1.0 - u));
    return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

// Bump on [lo, hi]: 1 on the middle third, 0 outside.
void interval_bump(double t, double lo, double hi, double& value, double& slope)
{
    const double w = (hi - lo) / 3.0;
    const double u = (t - lo) / w;
    const double v = (hi - t) / w;
    const double su = smooth_step(u);
    const double sv = smooth_step(v);
    value = su * sv;
    slope = (smooth_step_derivative(u) * sv - su * smooth_step_derivative(v)) / w;
}

struct Bump {
    double value = 0.0;
    Vec grad;
};

Bump box_bump(const Box& box, std::size_t k, const Vec& p)
{
    const std::size_t n = box.dim();
    Bump out;
    out.grad = Vec::Zero(static_cast<Eigen::Index>(n));
    if (!box.contains(p)) {
        return out;
    }
    Vec f(n);
    Vec g(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k || i == k + 1) {
            continue;
        }
        interval_bump(p[i], box.lo[i], box.hi[i], f[i], g[i]);
    }
    // Radial factor in the first two expanding coordinates.
    const double c0 = (box.lo[k] + box.hi[k]) / 2;
    const double c1 = (box.lo[k + 1] + box.hi[k + 1]) / 2;
    const double radius = std::min(box.hi[k] - box.lo[k], box.hi[k + 1] - box.lo[k + 1]) / 2;
    const double w0 = p[k] - c0;
    const double w1 = p[k + 1] - c1;
    const double r = std::hypot(w0, w1);
    const double width = 2.0 * radius / 3.0;
    const double rho = smooth_step((radius - r) / width);
    const double drho = -smooth_step_derivative((radius - r) / width) / width;
    double rest = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != k && i != k + 1) {
            rest *= f[i];
        }
    }
    out.value = rest * rho;
    if (out.value == 0.0 && drho == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k || i == k + 1) {
            continue;
        }
        double others = rho;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && j != k && j != k + 1) {
                others *= f[j];
            }
        }
        out.grad[i] = g[i] * others;
    }
    if (r > 0.0) {
        out.grad[k] = rest * drho * w0 / r;
        out.grad[k + 1] = rest * drho * w1 / r;
    }
    return out;
}

// Extreme singular values; closed form for 1x1 and 2x2 blocks.
std::pair<double, double> singular_range(const Mat& m)
{
    if (m.size() == 0) {
        return {0.0, 0.0};
    }
    if (m.rows() == 1 && m.cols() == 1) {
        return {std::abs(m(0, 0)), std::abs(m(0, 0))};
    }
    if (m.rows() == 2 && m.cols() == 2) {
        const double f = m.squaredNorm();
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
        const double big = std::sqrt((f + disc) / 2.0);
        return {big == 0.0 ? 0.0 : std::abs(det) / big, big};
    }
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    return {s(s.size() - 1), s(0)};
}

double spectral_norm(const Mat& m) { return singular_range(m).second; }

double sigma_min(const Mat& m) { return singular_range(m).first; }

// Gram-Schmidt data for the columns of b.
void gram_schmidt(const LMat& b, LMat& bstar, LMat& mu, LVec& norms)
{
    const Eigen::Index n = b.cols();
    bstar = b;
    mu = LMat::Zero(n, n);
    norms = LVec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            mu(i, j) = b.col(i).dot(bstar.col(j)) / norms[j];
            bstar.col(i) -= mu(i, j) * bstar.col(j);
        }
        norms[i] = bstar.col(i).squaredNorm();
    }
}

void lll_reduce(LMat& b)
{
    const Eigen::Index n = b.cols();
    LMat bstar;
    LMat mu;
    LVec norms;
    gram_schmidt(b, bstar, mu, norms);
    Eigen::Index k = 1;
    std::size_t guard = 0;
    while (k < n) {
        if (++guard > 100000) {
            throw std::runtime_error("lattice reduction did not terminate");
        }
        for (Eigen::Index j = k - 1; j >= 0; --j) {
            const long double q = std::round(mu(k, j));
            if (q != 0) {
                b.col(k) -= q * b.col(j);
                gram_schmidt(b, bstar, mu, norms);
            }
        }
        if (norms[k] >= (0.75L - mu(k, k - 1) * mu(k, k - 1)) * norms[k - 1]) {
            ++k;
        } else {
            b.col(k).swap(b.col(k - 1));
            gram_schmidt(b, bstar, mu, norms);
            k = std::max<Eigen::Index>(k - 1, 1);
        }
    }
}

// Integer u with |r u - y|^2 <= radius2, r upper triangular.
class Enumerator {
public:
    Enumerator(const LMat& r, const LVec& y, long double radius2) : r_(r), y_(y), radius2_(radius2), u_(r.cols()) {}

    template <class Visit>
    bool run(Visit&& visit)
    {
        return descend(r_.cols() - 1, 0.0L, visit);
    }

private:
    const LMat& r_;
    const LVec& y_;
    long double radius2_;
    Eigen::Matrix<long, Eigen::Dynamic, 1, 0, 8, 1> u_;
    std::size_t nodes_ = 0;

    template <class Visit>
    bool descend(Eigen::Index i, long double partial, Visit& visit)
    {
        if (i < 0) {
            return visit(u_);
        }
        if (++nodes_ > 20000000) {
            throw std::runtime_error("lattice enumeration too large");
        }
        long double s = y_[i];
        for (Eigen::Index j = i + 1; j < r_.cols(); ++j) {
            s -= r_(i, j) * static_cast<long double>(u_[j]);
        }
        const long double rem = radius2_ - partial;
        if (rem < 0) {
            return false;
        }
        const long double rii = r_(i, i);
        const long double center = s / rii;
        const long double span = std::sqrt(rem) / std::fabs(rii);
        const long lo = static_cast<long>(std::ceil(center - span));
        const long hi = static_cast<long>(std::floor(center + span));
        for (long v = lo; v <= hi; ++v) {
            u_[i] = v;
            const long double d = rii * static_cast<long double>(v) - s;
            if (descend(i - 1, partial + d * d, visit)) {
                return true;
            }
        }
        return false;
    }
};

Box translated(const Box& b, const Vec& l) { return Box{b.lo + l, b.hi + l}; }

bool same_box(const Box& a, const Box& b)
{
    const double tol = 1e-12 * (1.0 + std::max(a.lo.cwiseAbs().maxCoeff(), a.hi.cwiseAbs().maxCoeff()));
    return (a.lo - b.lo).cwiseAbs().maxCoeff() <= tol && (a.hi - b.hi).cwiseAbs().maxCoeff() <= tol;
}

void push_unique(std::vector<Box>& list, const Box& b)
{
    for (const auto& x : list) {
        if (same_box(x, b)) {
            return;
        }
    }
    list.push_back(b);
}

Vec grid_point(const Box& b, const std::vector<unsigned>& idx, unsigned grid)
{
    Vec p(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) {
        p[i] = b.lo[i] + (idx[i] + 0.5) / grid * (b.hi[i] - b.lo[i]);
    }
    return p;
}

// Calls visit(p) on the cell centers of a grid^n subdivision of b.
template <class Visit>
void for_each_grid_point(const Box& b, unsigned grid, Visit&& visit)
{
    const std::size_t n = b.dim();
    std::vector<unsigned> idx(n, 0);
    for (;;) {
        visit(grid_point(b, idx, grid));
        std::size_t i = 0;
        while (i < n && idx[i] + 1 == grid) {
            idx[i] = 0;
            ++i;
        }
        if (i == n) {
            return;
        }
        ++idx[i];
    }
}

} // namespace

bool Box::contains(const Vec& p, double tol) const
{
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) {
            return false;
        }
    }
    return true;
}

bool Box::intersects(const Box& other) const
{
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (hi[i] < other.lo[i] || other.hi[i] < lo[i]) {
            return false;
        }
    }
    return true;
}

Box Box::inflated(double r) const
{
    Box out = *this;
    out.lo.array() -= r;
    out.hi.array() += r;
    return out;
}

Box Box::hull(const Box& other) const { return Box{lo.cwiseMin(other.lo), hi.cwiseMax(other.hi)}; }

double RegionLayout::min_unstable() const { return eigenvalues.tail(n - k).cwiseAbs().minCoeff(); }
double RegionLayout::max_unstable() const { return eigenvalues.tail(n - k).cwiseAbs().maxCoeff(); }
double RegionLayout::max_stable() const { return eigenvalues.head(k).cwiseAbs().maxCoeff(); }
double RegionLayout::min_stable() const { return eigenvalues.head(k).cwiseAbs().minCoeff(); }

Box RegionLayout::image(const Box& b, int power) const
{
    Box out = b;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::pow(eigenvalues[i], power);
        const double a = d * b.lo[i];
        const double c = d * b.hi[i];
        out.lo[i] = std::min(a, c);
        out.hi[i] = std::max(a, c);
    }
    return out;
}

std::vector<Vec> lattice_translates(const RegionLayout& layout, double period, const Box& b, const Box& target,
                                    bool first_only)
{
    const auto n = static_cast<Eigen::Index>(layout.n);
    // l must lie in target - b.
    Box diff{target.lo - b.hi, target.hi - b.lo};
    const double scale = 1.0 + std::max(diff.lo.cwiseAbs().maxCoeff(), diff.hi.cwiseAbs().maxCoeff());
    diff = diff.inflated(1e-13 * scale);
    const Vec center = diff.center();
    const Vec half = (diff.hi - diff.lo) / 2;

    LMat basis(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            basis(i, j) = static_cast<long double>(period) * layout.basis_inverse(i, j) / half[i];
        }
    }
    lll_reduce(basis);
    Eigen::HouseholderQR<LMat> qr(basis);
    const LMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    LVec c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        c[i] = center[i] / half[i];
    }
    const LVec y = (qr.householderQ().transpose() * c).eval();

    std::vector<Vec> out;
    Enumerator e(r, y, static_cast<long double>(n) * (1.0L + 1e-12L));
    e.run([&](const auto& u) {
        LVec lu = LVec::Zero(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            lu += static_cast<long double>(u[j]) * basis.col(j);
        }
        Vec l(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            l[i] = static_cast<double>(lu[i] * half[i]);
        }
        if (!diff.contains(l)) {
            return false;
        }
        out.push_back(l);
        return first_only;
    });
    return out;
}

RegionLayout layout_regions(const RatMatrix& l, std::size_t k, double scale)
{
    if (!l.is_square() || l.rows() < 2 || l.rows() > 8) {
        throw std::invalid_argument("layout: matrix must be square of size 2..8");
    }
    if (!is_anosov_matrix(l)) {
        throw std::invalid_argument("layout: matrix is not a hyperbolic unimodular integer matrix");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("layout: scale must be positive");
    }
    const std::size_t n = l.rows();
    const SpectralClass spec = classify_spectrum(l);
    if (spec.stable_dim != k) {
        throw std::invalid_argument("layout: k must equal the number of contracting eigenvalues (use the inverse)");
    }

    Eigen::MatrixXd ld(n, n);
    bool symmetric = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ld(i, j) = l(i, j).get_d();
            if (l(i, j) != l(j, i)) {
                symmetric = false;
            }
        }
    }
    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors(n, n);
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ld);
        values = es.eigenvalues();
        vectors = es.eigenvectors();
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(ld);
        if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-9 * ld.norm()) {
            throw std::invalid_argument("layout: eigenvalues must be real (pass a suitable power)");
        }
        values = es.eigenvalues().real();
        vectors = es.eigenvectors().real();
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(values[a]) < std::abs(values[b]); });

    RegionLayout out;
    out.n = n;
    out.k = k;
    out.scale = scale;
    out.matrix = l;
    out.basis = Mat(n, n);
    out.eigenvalues = Vec(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = values[order[j]];
        const Eigen::VectorXd v = vectors.col(order[j]).normalized();
        for (std::size_t i = 0; i < n; ++i) {
            out.basis(i, j) = v[i];
        }
    }
    Eigen::JacobiSVD<Mat> svd(out.basis);
    const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    if (!(cond < 1e8)) {
        throw std::invalid_argument("layout: matrix is not diagonalizable");
    }
    out.basis_inverse = out.basis.inverse();
    const Mat residual = ld * out.basis - out.basis * out.eigenvalues.asDiagonal();
    if (residual.norm() > 1e-9 * (1.0 + ld.norm())) {
        throw std::invalid_argument("layout: eigen decomposition failed");
    }

    const double lambda = out.min_unstable();
    const double rho = (1.0 + lambda) / 2.0;
    const double collar = std::min(0.25, (lambda - 1.0) / (4.0 * (lambda + 1.0))) * scale;
    const double d = scale;

    Box r0p{Vec(n), Vec(n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (i < k) {
            r0p.lo[i] = d;
            r0p.hi[i] = 2 * d;
        } else {
            r0p.lo[i] = d;
            r0p.hi[i] = rho * d;
        }
    }
    Box r0m = r0p;
    Box r0 = r0p;
    for (std::size_t i = 0; i < k; ++i) {
        r0m.lo[i] = -2 * d;
        r0m.hi[i] = -d;
        r0.lo[i] = -2 * d;
    }
    out.r0_plus = r0p;
    out.r0_minus = r0m;
    out.r0 = r0;
    out.u0_plus = r0p.inflated(collar);
    out.u0_minus = r0m.inflated(collar);
    out.u0 = r0.inflated(collar);
    out.r1_plus = out.image(r0p, 1);
    out.r1_minus = out.image(r0m, 1);
    out.r2_plus = out.image(r0p, 2);
    out.u1 = out.image(out.u0, 1);
    out.u1_plus = out.image(out.u0_plus, 1);
    out.u1_minus = out.image(out.u0_minus, 1);
    out.u2 = out.image(out.u0, 2);
    out.u2_plus = out.image(out.u0_plus, 2);

    // Tube from the center of U1- to the center of U2+, one coordinate at a
    // time, expanding coordinates first.
    const Vec from = out.u1_minus.center();
    const Vec to = out.u2_plus.center();
    Vec thick(n);
    for (std::size_t i = 0; i < n; ++i) {
        thick[i] = 0.25 * std::min(out.u1_minus.hi[i] - out.u1_minus.lo[i], out.u2_plus.hi[i] - out.u2_plus.lo[i]) / 2;
    }
    Vec current = from;
    std::vector<std::size_t> axes;
    for (std::size_t i = k; i < n; ++i) {
        axes.push_back(i);
    }
    for (std::size_t i = 0; i < k; ++i) {
        axes.push_back(i);
    }
    for (std::size_t axis : axes) {
        Vec next = current;
        next[axis] = to[axis];
        Box seg{current.cwiseMin(next) - thick, current.cwiseMax(next) + thick};
        out.tube.push_back(seg);
        current = next;
    }
    out.v0 = {out.u1_minus, out.u2_plus};
    out.v0.insert(out.v0.end(), out.tube.begin(), out.tube.end());
    out.w = {out.u0, out.u1_plus};
    out.w.insert(out.w.end(), out.v0.begin(), out.v0.end());
    out.p = out.v0;
    out.p.push_back(out.u1_plus);

    // All regions must fit in one fundamental domain around their common center.
    Box hull = out.u2;
    for (const auto& b : out.w) {
        hull = hull.hull(b);
    }
    hull = hull.hull(out.u1);
    out.home = out.basis * hull.center();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        double extent = 0.0;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
            extent += std::abs(out.basis(i, j)) * (hull.hi[j] - hull.lo[j]) / 2;
        }
        if (extent >= 0.45) {
            throw std::domain_error("layout: regions do not fit in one fundamental domain; reduce the scale");
        }
    }

    // Disjointness and injectivity modulo Z^n.
    const std::vector<Box> levels{out.u0, out.u1, out.u2};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        for (std::size_t j = i; j < levels.size(); ++j) {
            for (const Vec& t : lattice_translates(out, 1.0, levels[i], levels[j])) {
                if (i != j || t.norm() > 0.0) {
                    throw std::domain_error("layout: U0, U1, U2 are not disjoint on the torus; reduce the scale");
                }
            }
        }
    }
    std::vector<Box> all = out.w;
    all.push_back(out.u1);
    all.push_back(out.u2);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i; j < all.size(); ++j) {
            for (const Vec& t : lattice_translates(out, 1.0, all[i], all[j])) {
                if (t.norm() > 0.0) {
                    throw std::domain_error("layout: regions overlap their lattice translates; reduce the scale");
                }
            }
        }
    }
    return out;
}

PerturbedMap::PerturbedMap(RegionLayout layout, double strength, unsigned s, unsigned m)
    : layout_(std::move(layout)), strength_(strength), s_(s), m_(m), period_(std::pow(double(s), double(m)))
{
    if (s < 2) {
        throw std::invalid_argument("perturbed map: cover base must be at least 2");
    }
    if (!std::isfinite(strength)) {
        throw std::invalid_argument("perturbed map: strength must be finite");
    }
    if (strength != 0.0 && layout_.n - layout_.k < 2) {
        throw std::invalid_argument("perturbed map: the twist needs two expanding directions");
    }
    if (strength != 0.0) {
        f1_ = {Twist{layout_.r1_plus, 1.0}, Twist{layout_.r1_minus, -1.0}};
        f2_ = {Twist{layout_.r1_minus, -1.0}, Twist{layout_.r2_plus, 1.0}};
    }
}

Vec PerturbedMap::reduce(const Vec& p) const
{
    const Vec z = layout_.basis * p;
    Vec shift = Vec::Zero(p.size());
    bool moved = false;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double r = std::floor((z[i] - layout_.home[i]) / period_ + 0.5);
        if (r != 0.0) {
            shift[i] = r * period_;
            moved = true;
        }
    }
    if (!moved) {
        return p;
    }
    return p - layout_.basis_inverse * shift;
}

Vec PerturbedMap::linear(const Vec& p) const { return reduce(layout_.eigenvalues.cwiseProduct(p)); }

Vec PerturbedMap::twist(const std::vector<Twist>& ts, double direction, const Vec& p, Mat* d) const
{
    const auto n = static_cast<Eigen::Index>(layout_.n);
    const auto k = static_cast<Eigen::Index>(layout_.k);
    Vec q = p;
    for (const auto& t : ts) {
        if (!t.box.contains(q)) {
            continue;
        }
        const Bump b = box_bump(t.box, layout_.k, q);
        if (b.value == 0.0 && b.grad.isZero()) {
            continue;
        }
        const double scale = direction * t.sign * strength_;
        const double theta = scale * b.value;
        const double c0 = (t.box.lo[k] + t.box.hi[k]) / 2;
        const double c1 = (t.box.lo[k + 1] + t.box.hi[k + 1]) / 2;
        const double w0 = q[k] - c0;
        const double w1 = q[k + 1] - c1;
        const double cs = std::cos(theta);
        const double sn = std::sin(theta);
        if (d != nullptr) {
            // Rows k, k+1 of the step derivative: rotation plus the angle gradient term.
            const double v0 = -sn * w0 - cs * w1;
            const double v1 = cs * w0 - sn * w1;
            Mat step = Mat::Identity(n, n);
            step(k, k) = cs;
            step(k, k + 1) = -sn;
            step(k + 1, k) = sn;
            step(k + 1, k + 1) = cs;
            step.row(k) += v0 * scale * b.grad.transpose();
            step.row(k + 1) += v1 * scale * b.grad.transpose();
            *d = step * *d;
        }
        q[k] = c0 + cs * w0 - sn * w1;
        q[k + 1] = c1 + sn * w0 + cs * w1;
    }
    return q;
}

Vec PerturbedMap::evaluate(const Vec& p, bool forward, Mat* d) const
{
    const auto n = static_cast<Eigen::Index>(layout_.n);
    const auto& first = forward ? f2_ : f1_;
    const auto& second = forward ? f1_ : f2_;
    const Vec scaling = forward ? Vec(layout_.eigenvalues) : Vec(layout_.eigenvalues.cwiseInverse());
    if (d != nullptr) {
        *d = Mat::Identity(n, n);
    }
    Vec q = twist(first, -1.0, reduce(p), d);
    q = scaling.cwiseProduct(q);
    if (d != nullptr) {
        *d = scaling.asDiagonal() * *d;
    }
    return reduce(twist(second, 1.0, q, d));
}

Vec PerturbedMap::apply(const Vec& p) const { return evaluate(p, true, nullptr); }

Vec PerturbedMap::apply_inverse(const Vec& p) const { return evaluate(p, false, nullptr); }

Mat PerturbedMap::derivative(const Vec& p) const
{
    Mat d;
    evaluate(p, true, &d);
    return d;
}

Mat PerturbedMap::inverse_derivative(const Vec& p) const
{
    Mat d;
    evaluate(p, false, &d);
    return d;
}

Vec PerturbedMap::step(const Vec& p, bool forward, Mat& d) const { return evaluate(p, forward, &d); }

bool PerturbedMap::in_set(const Vec& p, const std::vector<Box>& boxes) const
{
    const Vec q = reduce(p);
    for (const auto& b : boxes) {
        if (b.contains(q)) {
            return true;
        }
    }
    return false;
}

double PerturbedMap::boundary_discrepancy(unsigned grid) const
{
    std::vector<Box> regions{layout_.u0, layout_.u1_plus};
    regions.insert(regions.end(), layout_.v0.begin(), layout_.v0.end());
    double worst = 0.0;
    for (const auto& box : regions) {
        for (std::size_t face = 0; face < 2 * layout_.n; ++face) {
            const std::size_t axis = face / 2;
            Box slab = box;
            const double v = face % 2 == 0 ? box.lo[axis] : box.hi[axis];
            slab.lo[axis] = v;
            slab.hi[axis] = v;
            for_each_grid_point(slab, grid, [&](const Vec& p) {
                // Faces interior to another piece of W are not region boundaries.
                for (const auto& other : regions) {
                    if (!(other == box) && other.contains(p, -1e-12 * layout_.scale)) {
                        return;
                    }
                }
                Vec diff = layout_.basis * (apply(p) - linear(p));
                for (Eigen::Index i = 0; i < diff.size(); ++i) {
                    diff[i] -= period_ * std::round(diff[i] / period_);
                }
                worst = std::max(worst, diff.cwiseAbs().maxCoeff());
            });
        }
    }
    return worst;
}

PerturbedMap build_perturbed_map(const RegionLayout& layout, double strength, unsigned s, unsigned m)
{
    PerturbedMap f(layout, strength, s, m);
    const double gap = f.boundary_discrepancy(4);
    if (gap >= 1e-12) {
        throw std::logic_error("perturbed map: region formulas disagree on a boundary");
    }
    return f;
}

AlphaResult measure_alpha(const PerturbedMap& f, unsigned grid)
{
    const RegionLayout& lay = f.layout();
    const auto n = static_cast<Eigen::Index>(lay.n);
    const auto k = static_cast<Eigen::Index>(lay.k);
    AlphaResult out;
    out.grid = grid;
    out.linear_bound = std::pow(lay.min_unstable(), 3);
    out.alpha = out.linear_bound;
    out.witness = lay.u0.center();
    if (f.strength() == 0.0) {
        return out;
    }
    // Outside these boxes Df^3 = L^3 on W.
    const std::vector<Box> active{lay.r0_plus, lay.r0_minus, lay.r1_plus, lay.r1_minus, lay.r2_plus};
    for (const auto& box : active) {
        for_each_grid_point(box, grid, [&](const Vec& x) {
            Mat d0;
            Mat d1;
            Mat d2;
            const Vec x1 = f.step(x, true, d0);
            const Vec x2 = f.step(x1, true, d1);
            f.step(x2, true, d2);
            const Mat d = d2 * d1 * d0;
            const double s = sigma_min(d.bottomRightCorner(n - k, n - k));
            ++out.samples;
            if (s < out.alpha) {
                out.alpha = s;
                out.witness = x;
            }
        });
    }
    return out;
}

namespace {

std::vector<Box> enclosure_step(const PerturbedMap& f, const std::vector<Box>& list, bool forward)
{
    const RegionLayout& lay = f.layout();
    const auto& first = forward ? f.f2() : f.f1();
    const auto& second = forward ? f.f1() : f.f2();
    auto absorb = [&](std::vector<Box>& boxes, const std::vector<Twist>& ts) {
        const std::size_t count = boxes.size();
        for (std::size_t i = 0; i < count; ++i) {
            for (const auto& t : ts) {
                for (const Vec& l : lattice_translates(lay, f.period(), t.box, boxes[i])) {
                    push_unique(boxes, translated(t.box, l));
                }
            }
        }
    };
    std::vector<Box> out = list;
    absorb(out, first);
    for (auto& b : out) {
        b = lay.image(b, forward ? 1 : -1);
    }
    absorb(out, second);
    return out;
}

bool meets(const PerturbedMap& f, const std::vector<Box>& list, const std::vector<Box>& targets)
{
    for (const auto& b : list) {
        for (const auto& t : targets) {
            if (!lattice_translates(f.layout(), f.period(), b, t, true).empty()) {
                return true;
            }
        }
    }
    return false;
}

} // namespace

ReturnBounds first_return_bounds(const PerturbedMap& f, long cap)
{
    const RegionLayout& lay = f.layout();
    ReturnBounds out;
    std::vector<Box> forward = lay.w;
    for (long i = 1; i <= cap; ++i) {
        forward = enclosure_step(f, forward, true);
        if (i >= 3 && meets(f, forward, lay.w)) {
            out.n1 = i;
            break;
        }
    }
    std::vector<Box> backward = lay.p;
    for (long i = 1; i <= cap; ++i) {
        backward = enclosure_step(f, backward, false);
        if (i >= 2 && meets(f, backward, lay.p)) {
            out.n2 = i;
            break;
        }
    }
    return out;
}

ConeSamples sample_cone_data(const PerturbedMap& f, double epsilon, unsigned grid)
{
    if (!(epsilon > 0.0 && epsilon < 1.5)) {
        throw std::invalid_argument("cone: epsilon must lie in (0, 1.5)");
    }
    if (grid == 0) {
        throw std::invalid_argument("cone: grid must be positive");
    }
    const RegionLayout& lay = f.layout();
    const auto n = static_cast<Eigen::Index>(lay.n);
    const auto k = static_cast<Eigen::Index>(lay.k);
    const double t = std::tan(epsilon);
    ConeSamples out;
    out.epsilon = epsilon;
    out.grid = grid;
    out.alpha = measure_alpha(f, grid);
    out.coupling = 0.0;
    out.expansion = std::numeric_limits<double>::infinity();
    out.stable_rate = 1.0 / lay.max_stable();

    auto record = [&](const Mat& h, const Mat& b, const Vec& where) {
        const double a = sigma_min(h.topLeftCorner(k, k));
        const double coupling = (spectral_norm(h.bottomLeftCorner(n - k, k)) +
                                 t * spectral_norm(h.bottomRightCorner(n - k, n - k))) /
                                (t * a);
        // The stable part evolves on its own, so growth is measured in |x|.
        const double expansion = a / spectral_norm(b.topLeftCorner(k, k));
        if (coupling > out.coupling) {
            out.coupling = coupling;
            out.coupling_witness = where;
        }
        if (expansion < out.expansion) {
            out.expansion = expansion;
            out.expansion_witness = where;
        }
    };

    // Linear heads: points of V0 (j = 1) and U1+ (j = 2) away from the twists.
    for (int j = 1; j <= 2; ++j) {
        const Vec inv = lay.eigenvalues.cwiseInverse();
        Mat h = Mat::Identity(n, n);
        Mat b = Mat::Identity(n, n);
        for (int s = 0; s < j + 2; ++s) {
            h = inv.asDiagonal() * h;
            if (s == j - 1) {
                b = h;
            }
        }
        record(h, b, j == 1 ? lay.tube.front().center() : lay.u1_plus.center());
    }
    if (f.strength() != 0.0) {
        const std::vector<std::pair<Box, int>> active{{lay.r1_minus, 1}, {lay.r2_plus, 1}, {lay.r1_plus, 2}};
        for (const auto& [box, j] : active) {
            for_each_grid_point(box, grid, [&](const Vec& x) {
                Vec q = x;
                for (int s = 0; s < j; ++s) {
                    q = f.apply(q);
                }
                Mat h = Mat::Identity(n, n);
                Mat b = Mat::Identity(n, n);
                Mat dinv;
                for (int s = 0; s < j + 2; ++s) {
                    const Vec next = f.step(q, false, dinv);
                    h = dinv * h;
                    if (s == j - 1) {
                        b = h;
                    }
                    if (s == 0) {
                        out.stable_rate = std::min(out.stable_rate, sigma_min(dinv.leftCols(k)));
                    }
                    q = next;
                }
                ++out.samples;
                record(h, b, x);
            });
        }
    }
    return out;
}

CertifyResult certify_with(const PerturbedMap& f, const ConeSamples& samples, const ReturnBounds& returns, long n_cap)
{
    const RegionLayout& lay = f.layout();
    CertifyResult out;
    ConeCertificate& c = out.certificate;
    c.epsilon = samples.epsilon;
    c.alpha = samples.alpha.alpha;
    c.n1 = returns.n1;
    c.n2 = returns.n2;
    c.m = f.m();
    c.grid = samples.grid;
    c.stable_rate = samples.stable_rate;
    c.unstable_rate = lay.min_unstable();

    const double t = std::tan(samples.epsilon);
    const double kappa = lay.min_unstable() / lay.max_stable();
    const double back = 1.0 / lay.max_stable();
    const long hi = returns.n2 == kNoReturn ? n_cap : std::min(returns.n2 - 1, n_cap);
    auto lambda_at = [&](long n) { return samples.expansion * std::pow(back, double(n - 2)); };
    auto invariance_at = [&](long n) { return 1.0 - samples.coupling / std::pow(kappa, double(n - 2)); };

    long chosen = 0;
    for (long n = 2; n <= hi; ++n) {
        if (invariance_at(n) > 0.0 && lambda_at(n) > 1.0) {
            chosen = n;
            break;
        }
    }
    c.n = chosen != 0 ? chosen : std::max<long>(2, hi);
    c.lambda = lambda_at(c.n);
    const double a = 1.0 / lay.max_stable();
    const double b = 1.0 / lay.max_unstable();
    const double mu0 = std::sqrt((a * a + b * b * t * t) / (1.0 + t * t));
    c.mu = std::min(std::pow(c.lambda, 1.0 / double(c.n)), mu0);

    c.margins.no_return = returns.n2 == kNoReturn ? double(n_cap) : double(returns.n2 - 1 - c.n);
    c.margins.invariance = invariance_at(c.n);
    c.margins.expansion = c.lambda - 1.0;
    c.margins.unstable = returns.n1 == kNoReturn
                             ? std::numeric_limits<double>::infinity()
                             : std::log(c.alpha) + double(returns.n1 - 3) * std::log(lay.min_unstable());

    if (!(c.margins.unstable > 0.0)) {
        out.violations.push_back("unstable-expansion");
        if (out.witness.size() == 0) {
            out.witness = samples.alpha.witness;
        }
    }
    if (!(c.margins.no_return >= 0.0) || hi < 2) {
        out.violations.push_back("no-return");
        if (out.witness.size() == 0) {
            out.witness = lay.p.front().center();
        }
    }
    if (!(c.margins.invariance > 0.0)) {
        out.violations.push_back("invariance");
        if (out.witness.size() == 0) {
            out.witness = samples.coupling_witness;
        }
    }
    if (!(c.margins.expansion > 0.0) || !(c.mu > 1.0)) {
        out.violations.push_back("expansion");
        if (out.witness.size() == 0) {
            out.witness = samples.expansion_witness;
        }
    }
    out.valid = out.violations.empty();
    return out;
}

CertifyResult certify(const PerturbedMap& f, double epsilon, unsigned grid)
{
    return certify_with(f, sample_cone_data(f, epsilon, grid), first_return_bounds(f));
}

MinimalMResult minimal_m(const PerturbationSpec& spec, unsigned max_doublings)
{
    if (spec.m_cap == 0) {
        throw std::invalid_argument("minimal_m: m_cap must be positive");
    }
    const RegionLayout layout = layout_regions(spec.l, spec.k, spec.scale);
    MinimalMResult out;
    std::vector<PerturbedMap> maps;
    std::vector<ReturnBounds> returns;
    for (unsigned m = 1; m <= spec.m_cap; ++m) {
        maps.push_back(build_perturbed_map(layout, spec.strength, spec.s, m));
        returns.push_back(first_return_bounds(maps.back()));
    }
    auto decide = [&](const ConeSamples& samples) {
        std::vector<CertifyResult> results;
        for (std::size_t i = 0; i < maps.size(); ++i) {
            results.push_back(certify_with(maps[i], samples, returns[i]));
        }
        return results;
    };
    unsigned grid = spec.grid;
    out.grids.push_back(grid);
    std::vector<CertifyResult> results = decide(sample_cone_data(maps.front(), spec.epsilon, grid));
    for (unsigned d = 0; d < max_doublings; ++d) {
        grid *= 2;
        out.grids.push_back(grid);
        std::vector<CertifyResult> finer = decide(sample_cone_data(maps.front(), spec.epsilon, grid));
        bool same = true;
        for (std::size_t i = 0; i < finer.size(); ++i) {
            same = same && finer[i].valid == results[i].valid;
        }
        results = std::move(finer);
        if (same) {
            out.grid_stable = true;
            break;
        }
    }
    for (std::size_t i = 0; i < maps.size(); ++i) {
        out.table.push_back(GrowthRow{maps[i].m(), returns[i].n1, returns[i].n2, results[i].valid});
        if (!out.found && results[i].valid) {
            out.found = true;
            out.m0 = maps[i].m();
            out.certificate = results[i];
        }
    }
    if (!out.found) {
        out.certificate = results.back();
    }
    out.runs = std::move(results);
    return out;
}

} // namespace anosov
