#include "anosov/heisenberg.hpp"

#include "anosov/smith.hpp"

#include <cmath>
#include <stdexcept>

namespace anosov {

namespace {

constexpr std::array<std::size_t, 4> kHorizontal{0, 1, 3, 4};
constexpr std::array<std::size_t, 2> kCentral{2, 5};

// beta(h, h') = m(x, y') in horizontal coordinates (x1, y1, x2, y2).
std::array<Rational, 2> beta(const NilStructure& s, const RatVector& h, const RatVector& hp)
{
    return s.bracket({h[0], h[2]}, {hp[1], hp[3]});
}

RatVector unit(std::size_t n, std::size_t i)
{
    RatVector v(n);
    v[i] = 1;
    return v;
}

Rational quad_eval(const RatMatrix& m, const RatVector& h)
{
    Rational acc = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        for (std::size_t j = 0; j < h.size(); ++j) {
            acc += m(i, j) * h[i] * h[j];
        }
    }
    return acc;
}

// R_k(h, h') = beta(P h, P h')_k - (Q beta(h, h'))_k as 4 x 4 matrices.
std::array<RatMatrix, 2> defect_forms(const NilStructure& s, const RatMatrix& p, const RatMatrix& q)
{
    std::array<RatMatrix, 2> r{RatMatrix(4, 4), RatMatrix(4, 4)};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const RatVector ei = unit(4, i);
            const RatVector ej = unit(4, j);
            const auto image = beta(s, p * ei, p * ej);
            const auto base = beta(s, ei, ej);
            for (std::size_t k = 0; k < 2; ++k) {
                r[k](i, j) = image[k] - (q(k, 0) * base[0] + q(k, 1) * base[1]);
            }
        }
    }
    return r;
}

Integer denominator_lcm(const std::vector<RatVector>& vs)
{
    Integer d = 1;
    for (const auto& v : vs) {
        const Integer dv = common_denominator(v);
        mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), dv.get_mpz_t());
    }
    return d;
}

RatMatrix columns_to_matrix(const std::vector<RatVector>& cols, std::size_t rows)
{
    RatMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            m(i, j) = cols[j][i];
        }
    }
    return m;
}

// Is v in the Z-span of cols?
bool in_span(const std::vector<RatVector>& cols, const RatVector& v)
{
    if (cols.empty()) {
        return v.is_zero();
    }
    std::vector<RatVector> all = cols;
    all.push_back(v);
    const Rational d(denominator_lcm(all));
    return solve_integer(d * columns_to_matrix(cols, v.size()), d * v).has_value();
}

HeisPoint word_product(const NilStructure& s, const std::vector<HeisPoint>& gens, const RatVector& exps)
{
    HeisPoint acc = HeisPoint::identity();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (exps[i] != 0) {
            acc = heis_mul(s, acc, heis_power(s, gens[i], exps[i].get_num()));
        }
    }
    return acc;
}

struct LatticeData {
    std::vector<RatVector> horizontal;
    std::vector<RatVector> central; ///< spanning set of the subgroup's center part
};

LatticeData lattice_data(const NilStructure& s, const std::vector<HeisPoint>& gens)
{
    LatticeData out;
    for (const auto& g : gens) {
        out.horizontal.push_back(g.horizontal());
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const RatVector c = heis_commutator(s, gens[i], gens[j]).central();
            if (!c.is_zero()) {
                out.central.push_back(c);
            }
        }
    }
    if (!gens.empty()) {
        const Rational d(denominator_lcm(out.horizontal));
        const RatMatrix kernel = integer_kernel(d * columns_to_matrix(out.horizontal, 4));
        for (std::size_t j = 0; j < kernel.cols(); ++j) {
            const RatVector c = word_product(s, gens, kernel.column(j)).central();
            if (!c.is_zero()) {
                out.central.push_back(c);
            }
        }
    }
    return out;
}

// Shortest nonzero squared Euclidean norm in the Z-span of cols.
Rational shortest_squared(const std::vector<RatVector>& cols, std::size_t dim)
{
    if (cols.empty()) {
        return 0;
    }
    const Rational d(denominator_lcm(cols));
    const RatMatrix scaled = d * columns_to_matrix(cols, dim);
    const SmithForm snf = smith_normal_form(scaled);
    if (snf.rank == 0) {
        return 0;
    }
    const RatMatrix image = scaled * snf.right;
    RatMatrix basis(dim, snf.rank);
    for (std::size_t j = 0; j < snf.rank; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
            basis(i, j) = image(i, j) / d;
        }
    }
    Rational best = -1;
    for (std::size_t j = 0; j < snf.rank; ++j) {
        const RatVector c = basis.column(j);
        Rational n2 = 0;
        for (const auto& x : c) {
            n2 += x * x;
        }
        if (best < 0 || n2 < best) {
            best = n2;
        }
    }
    // Coefficient bounds |x_i| <= |row_i(B^+)| * sqrt(best).
    const RatMatrix pinv = inverse(basis.transpose() * basis) * basis.transpose();
    std::vector<long> bound(snf.rank);
    double total = 1.0;
    for (std::size_t i = 0; i < snf.rank; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            row += pinv(i, j).get_d() * pinv(i, j).get_d();
        }
        bound[i] = static_cast<long>(std::ceil(std::sqrt(row * best.get_d()) + 1e-9));
        total *= double(2 * bound[i] + 1);
    }
    if (total > 2e6) {
        throw std::runtime_error("shortest vector enumeration too large");
    }
    std::vector<long> x(snf.rank);
    for (std::size_t i = 0; i < snf.rank; ++i) {
        x[i] = -bound[i];
    }
    for (;;) {
        bool nonzero = false;
        RatVector v(dim);
        for (std::size_t i = 0; i < snf.rank; ++i) {
            if (x[i] != 0) {
                nonzero = true;
                v += Rational(x[i]) * basis.column(i);
            }
        }
        if (nonzero) {
            Rational n2 = 0;
            for (const auto& c : v) {
                n2 += c * c;
            }
            if (n2 < best) {
                best = n2;
            }
        }
        std::size_t k = 0;
        while (k < snf.rank && x[k] == bound[k]) {
            x[k] = -bound[k];
            ++k;
        }
        if (k == snf.rank) {
            break;
        }
        ++x[k];
    }
    return best;
}

// Lower bound for the smallest singular value: 1 / sqrt(|M^-1|_1 |M^-1|_inf).
Rational sigma_min_lower(const RatMatrix& m)
{
    const RatMatrix inv = inverse(m);
    Rational norm1 = 0;
    Rational norm_inf = 0;
    for (std::size_t j = 0; j < inv.cols(); ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < inv.rows(); ++i) {
            col += abs_of(inv(i, j));
        }
        norm1 = std::max(norm1, col);
    }
    for (std::size_t i = 0; i < inv.rows(); ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < inv.cols(); ++j) {
            row += abs_of(inv(i, j));
        }
        norm_inf = std::max(norm_inf, row);
    }
    return 1 / sqrt_upper(norm1 * norm_inf, 96);
}

} // namespace

NilStructure NilStructure::split()
{
    NilStructure s;
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                s.t[k][i][j] = (k == i && k == j) ? 1 : 0;
            }
        }
    }
    return s;
}

NilStructure NilStructure::sqrt3()
{
    NilStructure s;
    for (auto& plane : s.t) {
        for (auto& row : plane) {
            row = {0, 0};
        }
    }
    s.t[0][0][0] = 1;
    s.t[0][1][1] = 3;
    s.t[1][0][1] = 1;
    s.t[1][1][0] = 1;
    return s;
}

std::array<Rational, 2> NilStructure::bracket(const std::array<Rational, 2>& x, const std::array<Rational, 2>& y) const
{
    std::array<Rational, 2> out{0, 0};
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                if (t[k][i][j] != 0) {
                    out[k] += t[k][i][j] * x[i] * y[j];
                }
            }
        }
    }
    return out;
}

HeisPoint HeisPoint::from_ints(std::array<long, 6> v)
{
    HeisPoint p;
    for (std::size_t i = 0; i < 6; ++i) {
        p.c[i] = v[i];
    }
    return p;
}

RatVector HeisPoint::horizontal() const { return {c[0], c[1], c[3], c[4]}; }

RatVector HeisPoint::central() const { return {c[2], c[5]}; }

HeisPoint HeisPoint::assemble(const RatVector& horizontal, const RatVector& central)
{
    HeisPoint p;
    for (std::size_t i = 0; i < 4; ++i) {
        p.c[kHorizontal[i]] = horizontal[i];
    }
    for (std::size_t k = 0; k < 2; ++k) {
        p.c[kCentral[k]] = central[k];
    }
    return p;
}

HeisPoint heis_mul(const NilStructure& s, const HeisPoint& a, const HeisPoint& b)
{
    HeisPoint out;
    for (std::size_t i = 0; i < 6; ++i) {
        out.c[i] = a.c[i] + b.c[i];
    }
    const auto corr = s.bracket(a.x(), b.y());
    out.c[2] += corr[0];
    out.c[5] += corr[1];
    return out;
}

HeisPoint heis_mul(const HeisPoint& a, const HeisPoint& b) { return heis_mul(NilStructure::split(), a, b); }

HeisPoint heis_power(const NilStructure& s, const HeisPoint& a, const Integer& e)
{
    const Rational er(e);
    const RatVector h = a.horizontal();
    const auto self = beta(s, h, h);
    const Rational tri = er * (er - 1) / 2;
    RatVector z = er * a.central();
    z[0] += tri * self[0];
    z[1] += tri * self[1];
    return HeisPoint::assemble(er * h, z);
}

HeisPoint heis_inverse(const NilStructure& s, const HeisPoint& a) { return heis_power(s, a, Integer(-1)); }

HeisPoint heis_commutator(const NilStructure& s, const HeisPoint& a, const HeisPoint& b)
{
    return heis_mul(s, heis_mul(s, heis_mul(s, a, b), heis_inverse(s, a)), heis_inverse(s, b));
}

NilAuto::NilAuto(NilStructure s, RatMatrix p_, RatMatrix q_)
    : structure(std::move(s)), p(std::move(p_)), q(std::move(q_)), ell(2, 4)
{
    const auto r = defect_forms(structure, p, q);
    for (std::size_t k = 0; k < 2; ++k) {
        quad[k] = make_rational(1, 2) * r[k];
    }
}

HeisPoint NilAuto::operator()(const HeisPoint& a) const
{
    const RatVector h = a.horizontal();
    RatVector z = q * a.central() + ell * h;
    for (std::size_t k = 0; k < 2; ++k) {
        z[k] += quad_eval(quad[k], h);
    }
    return HeisPoint::assemble(p * h, z);
}

RatMatrix NilAuto::derivative() const
{
    RatMatrix d(6, 6);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            d(kHorizontal[i], kHorizontal[j]) = p(i, j);
        }
    }
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
            d(kCentral[k], kCentral[l]) = q(k, l);
        }
        for (std::size_t j = 0; j < 4; ++j) {
            d(kCentral[k], kHorizontal[j]) = ell(k, j);
        }
    }
    return d;
}

bool NilAuto::is_homomorphism() const
{
    if (p.rows() != 4 || p.cols() != 4 || q.rows() != 2 || q.cols() != 2 || ell.rows() != 2 || ell.cols() != 4) {
        return false;
    }
    const auto r = defect_forms(structure, p, q);
    for (std::size_t k = 0; k < 2; ++k) {
        if (!(r[k] == r[k].transpose()) || !(quad[k] == quad[k].transpose())) {
            return false;
        }
        if (!(Rational(2) * quad[k] == r[k])) {
            return false;
        }
    }
    return true;
}

NilAuto compose(const NilAuto& a, const NilAuto& b)
{
    if (!(a.structure == b.structure)) {
        throw std::invalid_argument("compose: maps act on different groups");
    }
    NilAuto out;
    out.structure = a.structure;
    out.p = a.p * b.p;
    out.q = a.q * b.q;
    out.ell = a.q * b.ell + a.ell * b.p;
    const RatMatrix pt = b.p.transpose();
    for (std::size_t k = 0; k < 2; ++k) {
        out.quad[k] = a.q(k, 0) * b.quad[0] + a.q(k, 1) * b.quad[1] + pt * a.quad[k] * b.p;
    }
    return out;
}

NilAuto nil_identity(const NilStructure& s) { return NilAuto(s, RatMatrix::identity(4), RatMatrix::identity(2)); }

NilAuto nil_power(const NilAuto& a, unsigned exponent)
{
    NilAuto out = nil_identity(a.structure);
    for (unsigned i = 0; i < exponent; ++i) {
        out = compose(a, out);
    }
    return out;
}

NilAuto borel_smale_E1(const NilStructure& s) { return NilAuto(s, RatMatrix::scalar(4, 2), RatMatrix::scalar(2, 4)); }

NilAuto nil_auto_from_derivative(const NilStructure& s, const RatMatrix& d)
{
    if (d.rows() != 6 || d.cols() != 6) {
        throw std::invalid_argument("nil_auto_from_derivative: derivative must be 6 x 6");
    }
    RatMatrix p(4, 4);
    RatMatrix q(2, 2);
    RatMatrix ell(2, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            p(i, j) = d(kHorizontal[i], kHorizontal[j]);
        }
        for (std::size_t k = 0; k < 2; ++k) {
            if (d(kHorizontal[i], kCentral[k]) != 0) {
                throw std::invalid_argument("nil_auto_from_derivative: the center must be invariant");
            }
        }
    }
    for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t l = 0; l < 2; ++l) {
            q(k, l) = d(kCentral[k], kCentral[l]);
        }
        for (std::size_t j = 0; j < 4; ++j) {
            ell(k, j) = d(kCentral[k], kHorizontal[j]);
        }
    }
    NilAuto a(s, p, q);
    a.ell = ell;
    return a;
}

NilAuto borel_smale_L1()
{
    // Multiplication by a + b sqrt 3 on (1, sqrt 3) coordinates is [[a, 3b], [b, a]].
    // Horizontal order is (x1, y1, x2, y2): x = (x1, x2), y = (y1, y2).
    const RatMatrix p{
        {2, 0, 3, 0},
        {0, 7, 0, 12},
        {1, 0, 2, 0},
        {0, 4, 0, 7},
    };
    const RatMatrix q{{26, 45}, {15, 26}};
    return NilAuto(NilStructure::sqrt3(), p, q);
}

NilAuto factor_swap()
{
    const RatMatrix p{
        {0, 0, 1, 0},
        {0, 0, 0, 1},
        {1, 0, 0, 0},
        {0, 1, 0, 0},
    };
    return NilAuto(NilStructure::split(), p, RatMatrix{{0, 1}, {1, 0}});
}

bool check_commuting_nil(const NilAuto& l, const NilAuto& e) { return compose(l, e) == compose(e, l); }

std::vector<HeisPoint> standard_lattice()
{
    return {
        HeisPoint::from_ints({1, 0, 0, 0, 0, 0}), HeisPoint::from_ints({0, 1, 0, 0, 0, 0}),
        HeisPoint::from_ints({0, 0, 0, 1, 0, 0}), HeisPoint::from_ints({0, 0, 0, 0, 1, 0}),
        HeisPoint::from_ints({0, 0, 1, 0, 0, 0}), HeisPoint::from_ints({0, 0, 0, 0, 0, 1}),
    };
}

bool lattice_contains(const NilStructure& s, const std::vector<HeisPoint>& gens, const HeisPoint& a)
{
    const LatticeData data = lattice_data(s, gens);
    const RatVector h = a.horizontal();
    if (gens.empty()) {
        return a == HeisPoint::identity();
    }
    std::vector<RatVector> all = data.horizontal;
    all.push_back(h);
    const Rational d(denominator_lcm(all));
    auto exps = solve_integer(d * columns_to_matrix(data.horizontal, 4), d * h);
    if (!exps) {
        return false;
    }
    const HeisPoint w = word_product(s, gens, *exps);
    const HeisPoint residual = heis_mul(s, heis_inverse(s, w), a);
    if (!residual.horizontal().is_zero()) {
        throw std::logic_error("lattice_contains: residual is not central");
    }
    return in_span(data.central, residual.central());
}

bool check_lattice_preserved(const NilAuto& l, const std::vector<HeisPoint>& gens)
{
    for (const auto& g : gens) {
        if (!lattice_contains(l.structure, gens, l(g))) {
            return false;
        }
    }
    return true;
}

RescaledLattice rescale_lattice(const NilAuto& e, unsigned m, const std::vector<HeisPoint>& gens)
{
    RescaledLattice out;
    out.m = m;
    const NilAuto em = nil_power(e, m);
    out.shortest_generator = -1;
    for (const auto& g : gens) {
        const HeisPoint image = em(g);
        Rational n2 = 0;
        for (const auto& c : image.c) {
            n2 += c * c;
        }
        const Rational n = sqrt_lower(n2, 64);
        if (out.shortest_generator < 0 || n < out.shortest_generator) {
            out.shortest_generator = n;
        }
        out.generators.push_back(image);
    }
    const LatticeData data = lattice_data(e.structure, gens);
    const Rational dh2 = shortest_squared(data.horizontal, 4);
    const Rational dz2 = shortest_squared(data.central, 2);
    Rational bound = -1;
    if (dh2 > 0) {
        bound = sqrt_lower(dh2, 64) * sigma_min_lower(em.p);
    }
    if (dz2 > 0) {
        const Rational central = sqrt_lower(dz2, 64) * sigma_min_lower(em.q);
        if (bound < 0 || central < bound) {
            bound = central;
        }
    }
    out.radius = bound < 0 ? Rational(0) : bound / 2;
    return out;
}

} // namespace anosov
