#include "anosov/infratorus.hpp"

#include "anosov/errors.hpp"
#include "anosov/exotic.hpp"
#include "anosov/smith.hpp"

#include <stdexcept>

namespace anosov {

namespace {

std::vector<std::vector<std::size_t>> multiplication_table(const std::vector<RatMatrix>& group)
{
    const std::size_t q = group.size();
    std::vector<std::vector<std::size_t>> table(q, std::vector<std::size_t>(q));
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            const RatMatrix prod = group[i] * group[j];
            std::size_t k = 0;
            while (k < q && !(group[k] == prod)) {
                ++k;
            }
            if (k == q) {
                throw std::invalid_argument("group is not closed under multiplication");
            }
            table[i][j] = k;
        }
    }
    return table;
}

// Coboundary C^1 -> C^2: (dc)(g, h) = g c(h) - c(gh) + c(g).
RatMatrix coboundary1(const std::vector<std::vector<std::size_t>>& table, const std::vector<RatMatrix>& action)
{
    const std::size_t q = table.size();
    const std::size_t n = action.front().rows();
    RatMatrix d(q * q * n, q * n);
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            const std::size_t row = (i * q + j) * n;
            const std::size_t ij = table[i][j];
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    d(row + r, j * n + c) += action[i](r, c);
                }
                d(row + r, ij * n + r) -= 1;
                d(row + r, i * n + r) += 1;
            }
        }
    }
    return d;
}

// Coboundary C^2 -> C^3: (df)(g, h, k) = g f(h, k) - f(gh, k) + f(g, hk) - f(g, h).
RatMatrix coboundary2(const std::vector<std::vector<std::size_t>>& table, const std::vector<RatMatrix>& action)
{
    const std::size_t q = table.size();
    const std::size_t n = action.front().rows();
    RatMatrix d(q * q * q * n, q * q * n);
    auto col = [&](std::size_t a, std::size_t b) { return (a * q + b) * n; };
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            for (std::size_t k = 0; k < q; ++k) {
                const std::size_t row = ((i * q + j) * q + k) * n;
                for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t c = 0; c < n; ++c) {
                        d(row + r, col(j, k) + c) += action[i](r, c);
                    }
                    d(row + r, col(table[i][j], k) + r) -= 1;
                    d(row + r, col(i, table[j][k]) + r) += 1;
                    d(row + r, col(i, j) + r) -= 1;
                }
            }
        }
    }
    return d;
}

RatVector apply_pointwise(const RatMatrix& op, const RatVector& cochain)
{
    const std::size_t n = op.rows();
    RatVector out(cochain.size());
    for (std::size_t base = 0; base < cochain.size(); base += n) {
        for (std::size_t r = 0; r < n; ++r) {
            Rational acc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                acc += op(r, c) * cochain[base + c];
            }
            out[base + r] = acc;
        }
    }
    return out;
}

} // namespace

DiagonalPullback diagonal_pullback(const CrystalGroup& gamma, std::size_t s)
{
    if (s < 1) {
        throw std::invalid_argument("diagonal_pullback: needs at least one copy");
    }
    const ValidationReport base_report = validate_group(gamma);
    if (!base_report.valid) {
        throw VerificationError("diagonal_pullback", "seed group invalid: " + base_report.violation);
    }
    DiagonalPullback pb;
    pb.base = gamma;
    pb.copies = s;
    CrystalGroup& r = pb.result;
    r.dim = gamma.dim * s;
    r.lattice = kronecker(RatMatrix::identity(s), gamma.lattice);
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        r.holonomy.push_back(kronecker(RatMatrix::identity(s), gamma.holonomy[i]));
        std::vector<Rational> u;
        for (std::size_t c = 0; c < s; ++c) {
            u.insert(u.end(), gamma.section[i].begin(), gamma.section[i].end());
        }
        r.section.emplace_back(std::move(u));
    }
    const ValidationReport report = validate_group(r);
    if (!report.valid) {
        throw VerificationError("diagonal_pullback", report.violation);
    }
    return pb;
}

Integer H2Action::cardinality() const
{
    if (free_rank > 0) {
        return 0;
    }
    Integer card = 1;
    for (const auto& d : torsion) {
        card *= d;
    }
    return card;
}

H2Action h2_cohomology(const std::vector<RatMatrix>& group, const std::vector<RatMatrix>& action, const RatMatrix& op,
                       std::size_t order_cap)
{
    if (group.empty() || group.size() != action.size()) {
        throw std::invalid_argument("h2_cohomology: group and action sizes differ");
    }
    const std::size_t n = action.front().rows();
    if (!op.is_integral() || op.rows() != n || op.cols() != n) {
        throw std::invalid_argument("h2_cohomology: operator must be an integral n x n matrix");
    }
    for (const auto& a : action) {
        if (!a.is_integral() || a.rows() != n) {
            throw std::invalid_argument("h2_cohomology: action matrices must be integral");
        }
        if (!(a * op == op * a)) {
            throw std::invalid_argument("h2_cohomology: operator does not commute with the action");
        }
    }
    const auto table = multiplication_table(group);
    const RatMatrix d1 = coboundary1(table, action);
    const RatMatrix d2 = coboundary2(table, action);
    const RatMatrix cocycles = integer_kernel(d2);
    const std::size_t r = cocycles.cols();

    H2Action out;
    out.group_order = group.size();
    // Coordinates of the coboundaries in the cocycle basis.
    RatMatrix coords(r, d1.cols());
    for (std::size_t j = 0; j < d1.cols(); ++j) {
        auto y = solve_linear(cocycles, d1.column(j));
        if (!y || !y->is_integral()) {
            throw std::logic_error("h2_cohomology: coboundary outside the cocycle lattice");
        }
        for (std::size_t i = 0; i < r; ++i) {
            coords(i, j) = (*y)[i];
        }
    }
    const SmithForm snf = smith_normal_form(coords);
    for (std::size_t i = 0; i < snf.rank; ++i) {
        if (snf.diagonal(i, i) != 1) {
            out.torsion.push_back(snf.diagonal(i, i).get_num());
        }
    }
    out.free_rank = r - snf.rank;

    // The operator on cocycle coordinates.
    RatMatrix op_coords(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        auto y = solve_linear(cocycles, apply_pointwise(op, cocycles.column(j)));
        if (!y) {
            throw std::logic_error("h2_cohomology: operator does not preserve cocycles");
        }
        for (std::size_t i = 0; i < r; ++i) {
            op_coords(i, j) = (*y)[i];
        }
    }
    auto is_coboundary = [&](const RatVector& y) {
        const RatVector uy = snf.left * y;
        for (std::size_t i = 0; i < uy.size(); ++i) {
            if (i < snf.rank) {
                if (!is_integral(uy[i] / snf.diagonal(i, i))) {
                    return false;
                }
            } else if (uy[i] != 0) {
                return false;
            }
        }
        return true;
    };
    RatMatrix p = op_coords;
    const RatMatrix id = RatMatrix::identity(r);
    for (std::size_t k = 1; k <= order_cap; ++k) {
        const RatMatrix diff = p - id;
        bool trivial = true;
        for (std::size_t j = 0; j < r && trivial; ++j) {
            trivial = is_coboundary(diff.column(j));
        }
        if (trivial) {
            out.action_order = k;
            return out;
        }
        p = p * op_coords;
    }
    out.action_order = 0;
    return out;
}

H2Action h2_cohomology(const std::vector<RatMatrix>& group, const RatMatrix& op, std::size_t order_cap)
{
    return h2_cohomology(group, group, op, order_cap);
}

LiftResult lift_automorphism(const DiagonalPullback& pb, const RatMatrix& a_m)
{
    const CrystalGroup& g = pb.result;
    if (!g.has_standard_lattice()) {
        throw std::invalid_argument("lift_automorphism: expects the lattice Z^n");
    }
    const std::size_t n = g.dim;
    const std::size_t q = g.order();
    if (!a_m.is_integral() || a_m.rows() != n || a_m.cols() != n) {
        throw std::invalid_argument("lift_automorphism: A_m must be an integral n x n matrix");
    }
    for (const auto& h : g.holonomy) {
        if (!(a_m * h == h * a_m)) {
            throw std::invalid_argument("lift_automorphism: A_m does not commute with the holonomy");
        }
    }
    const auto table = multiplication_table(g.holonomy);
    // Extension cocycle f(g, h) = g u_h + u_g - u_gh, and the system
    // dz = (A - I) f over the integers.
    const RatMatrix a_minus = a_m - RatMatrix::identity(n);
    RatVector rhs(q * q * n);
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            const RatVector f = g.holonomy[i] * g.section[j] + g.section[i] - g.section[table[i][j]];
            if (!f.is_integral()) {
                throw std::logic_error("lift_automorphism: extension cocycle is not integral");
            }
            const RatVector value = a_minus * f;
            for (std::size_t r = 0; r < n; ++r) {
                rhs[(i * q + j) * n + r] = value[r];
            }
        }
    }
    auto z = solve_integer(coboundary1(table, g.holonomy), rhs);
    if (!z) {
        throw VerificationError("lift_automorphism", "A_m does not fix the extension class in H^2");
    }
    LiftResult out;
    const RatMatrix i_minus = RatMatrix::identity(n) - a_m;
    RatVector b(n);
    for (std::size_t i = 0; i < q; ++i) {
        RatVector c = i_minus * g.section[i];
        for (std::size_t r = 0; r < n; ++r) {
            c[r] += (*z)[i * n + r];
        }
        b += c;
        out.correction.push_back(std::move(c));
    }
    b = make_rational(Integer(1), Integer(static_cast<unsigned long>(q))) * b;
    for (std::size_t i = 0; i < q; ++i) {
        if (!(out.correction[i] == (RatMatrix::identity(n) - g.holonomy[i]) * b)) {
            throw VerificationError("lift_automorphism", "correction is not principal");
        }
    }
    out.affine_before_rebase = AffineMap(a_m, b);
    const AffineMap inv = out.affine_before_rebase.inverse();
    for (std::size_t i = 0; i < q; ++i) {
        const AffineMap image = out.affine_before_rebase * g.representative(i) * inv;
        if (!(image == AffineMap(g.holonomy[i], a_m * g.section[i] + out.correction[i]))) {
            throw VerificationError("lift_automorphism", "affine map does not realize the automorphism");
        }
    }
    if (!normalizes(out.affine_before_rebase, g)) {
        throw VerificationError("lift_automorphism", "lift does not normalize the group");
    }
    if (determinant(i_minus) == 0) {
        throw VerificationError("lift_automorphism", "A_m has eigenvalue 1; no isolated fixed point");
    }
    out.fixed_point = inverse(i_minus) * b;
    const AffineMap rebase = AffineMap::translation_by(-out.fixed_point);
    out.group = conjugate_group(g, rebase);
    out.map = rebase * out.affine_before_rebase * rebase.inverse();
    if (!out.map.translation.is_zero()) {
        throw VerificationError("lift_automorphism", "rebased lift does not fix the origin");
    }
    if (!normalizes(out.map, out.group)) {
        throw VerificationError("lift_automorphism", "rebased lift does not normalize the group");
    }
    return out;
}

bool orientability(const CrystalGroup& gamma)
{
    for (const auto& g : gamma.holonomy) {
        if (determinant(g) != 1) {
            return false;
        }
    }
    return true;
}

AssembledExample assemble_example(const CrystalGroup& seed, std::size_t k, std::size_t s)
{
    if (k < 2) {
        throw std::invalid_argument("assemble_example: codimension must be at least 2");
    }
    if (s < 2) {
        throw std::invalid_argument("assemble_example: needs s >= 2 copies");
    }
    const std::size_t m = k - 1;
    if (seed.dim > m) {
        throw std::invalid_argument("assemble_example: seed dimension exceeds k - 1");
    }
    AssembledExample out;
    AssemblyReport& rep = out.report;
    rep.seed_dim = seed.dim;
    rep.padded_seed_dim = m;
    rep.copies = s;
    const CrystalGroup padded = seed.dim < m ? direct_product(seed, CrystalGroup::torus(m - seed.dim)) : seed;
    const DiagonalPullback pb = diagonal_pullback(padded, s);

    RatMatrix a1 = codim_one_anosov(s);
    rep.h2 = h2_cohomology(pb.result.holonomy, kronecker(a1, RatMatrix::identity(m)));
    if (rep.h2.action_order == 0) {
        throw VerificationError("assemble_example", "order of the H^2 action exceeds the cap");
    }
    rep.a1_power = rep.h2.action_order;
    a1 = power(a1, rep.a1_power);
    rep.a1 = a1;
    const LiftResult lift = lift_automorphism(pb, kronecker(a1, RatMatrix::identity(m)));

    rep.sigma = dimension_congruence(k, s);
    rep.l1 = codim_one_anosov(rep.sigma);
    out.group = direct_product(lift.group, CrystalGroup::torus(rep.sigma));
    out.anosov = AffineMap::linear_map(block_diagonal(lift.map.linear, rep.l1));

    const ValidationReport v = validate_group(out.group);
    rep.valid = v.valid;
    rep.torsion_free = v.torsion_free;
    rep.orientable = orientability(out.group);
    rep.dimension = out.group.dim;
    rep.dimension_mod4 = rep.dimension % 4;
    rep.s_times_m = s * m;
    rep.spectrum = classify_spectrum(out.anosov.linear);
    rep.codimension = rep.spectrum.codimension;
    if (!v.valid) {
        throw VerificationError("assemble_example", v.violation);
    }
    if (!normalizes(out.anosov, out.group)) {
        throw VerificationError("assemble_example", "product map does not normalize the product group");
    }
    if (rep.spectrum.unit_dim != 0 || rep.codimension != k) {
        throw VerificationError("assemble_example", "product map does not have codimension k");
    }
    return out;
}

} // namespace anosov
