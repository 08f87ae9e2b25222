#include "anosov/crystal.hpp"

#include "anosov/errors.hpp"
#include "anosov/smith.hpp"

#include <stdexcept>

namespace anosov {

CrystalGroup::CrystalGroup(std::size_t n, std::vector<RatMatrix> f, std::vector<RatVector> u)
    : CrystalGroup(n, std::move(f), std::move(u), RatMatrix::identity(n))
{
}

CrystalGroup::CrystalGroup(std::size_t n, std::vector<RatMatrix> f, std::vector<RatVector> u, RatMatrix basis)
    : dim(n), holonomy(std::move(f)), section(std::move(u)), lattice(std::move(basis))
{
}

CrystalGroup CrystalGroup::torus(std::size_t n) { return {n, {RatMatrix::identity(n)}, {RatVector(n)}}; }

CrystalGroup CrystalGroup::klein_bottle()
{
    return {2,
            {RatMatrix::identity(2), RatMatrix{{1, 0}, {0, -1}}},
            {RatVector(2), RatVector{make_rational(1, 2), 0}}};
}

std::optional<std::size_t> CrystalGroup::find(const RatMatrix& g) const
{
    for (std::size_t i = 0; i < holonomy.size(); ++i) {
        if (holonomy[i] == g) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t CrystalGroup::identity_index() const
{
    auto idx = find(RatMatrix::identity(dim));
    if (!idx) {
        throw std::invalid_argument("holonomy does not contain the identity");
    }
    return *idx;
}

AffineMap CrystalGroup::representative(std::size_t i) const { return {holonomy.at(i), section.at(i)}; }

RatVector CrystalGroup::lattice_coords(const RatVector& v) const
{
    if (has_standard_lattice()) {
        return v;
    }
    return inverse(lattice) * v;
}

bool CrystalGroup::in_lattice(const RatVector& v) const { return lattice_coords(v).is_integral(); }

RatMatrix CrystalGroup::holonomy_in_lattice(std::size_t i) const
{
    if (has_standard_lattice()) {
        return holonomy.at(i);
    }
    return inverse(lattice) * holonomy.at(i) * lattice;
}

bool CrystalGroup::contains(const AffineMap& a) const
{
    auto idx = find(a.linear);
    return idx && in_lattice(a.translation - section[*idx]);
}

namespace {

std::size_t element_order(const RatMatrix& g, std::size_t cap)
{
    RatMatrix p = g;
    for (std::size_t r = 1; r <= cap; ++r) {
        if (p.is_identity()) {
            return r;
        }
        p = p * g;
    }
    return 0;
}

ValidationReport fail(ValidationReport r, std::string why)
{
    r.valid = false;
    r.violation = std::move(why);
    return r;
}

} // namespace

ValidationReport validate_group(const CrystalGroup& gamma)
{
    ValidationReport r;
    r.order = gamma.order();
    const std::size_t n = gamma.dim;
    if (gamma.holonomy.empty()) {
        return fail(r, "holonomy is empty");
    }
    if (gamma.section.size() != gamma.holonomy.size()) {
        return fail(r, "section size differs from holonomy size");
    }
    if (gamma.lattice.rows() != n || gamma.lattice.cols() != n || determinant(gamma.lattice) == 0) {
        return fail(r, "lattice basis is not an invertible n x n matrix");
    }
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        const auto& g = gamma.holonomy[i];
        if (g.rows() != n || g.cols() != n || gamma.section[i].size() != n) {
            return fail(r, "holonomy element " + std::to_string(i) + " has the wrong shape");
        }
        const RatMatrix gl = gamma.holonomy_in_lattice(i);
        const Rational det = determinant(gl);
        if (!gl.is_integral() || (det != 1 && det != -1)) {
            return fail(r, "holonomy element " + std::to_string(i) + " does not preserve the lattice");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (gamma.holonomy[j] == g) {
                return fail(r, "holonomy elements " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
            }
        }
    }
    const auto id = gamma.find(RatMatrix::identity(n));
    if (!id) {
        return fail(r, "holonomy does not contain the identity");
    }
    if (!gamma.in_lattice(gamma.section[*id])) {
        return fail(r, "translation part of the identity class is not a lattice vector");
    }
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        for (std::size_t j = 0; j < gamma.order(); ++j) {
            const AffineMap prod = gamma.representative(i) * gamma.representative(j);
            auto k = gamma.find(prod.linear);
            if (!k) {
                return fail(r, "holonomy not closed under product (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (!gamma.in_lattice(prod.translation - gamma.section[*k])) {
                return fail(r, "section not closed under composition (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
    r.closed = true;
    r.faithful = true;
    // (g, u + z)^r = (I, N_g (u + z)) with N_g = 1 + g + ... + g^(r-1); the
    // class of g carries torsion iff N_g u lies in N_g Z^n.
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        if (i == *id) {
            continue;
        }
        const RatMatrix g = gamma.holonomy_in_lattice(i);
        const std::size_t ord = element_order(g, gamma.order());
        RatMatrix norm = RatMatrix::zero(n, n);
        RatMatrix p = RatMatrix::identity(n);
        for (std::size_t t = 0; t < ord; ++t) {
            norm += p;
            p = p * g;
        }
        const RatVector target = -(norm * gamma.lattice_coords(gamma.section[i]));
        if (solve_integer(norm, target)) {
            return fail(r, "holonomy element " + std::to_string(i) + " lifts to an element of finite order");
        }
    }
    r.torsion_free = true;
    r.valid = true;
    return r;
}

std::size_t CrossedHom::index_of(const RatMatrix& g) const
{
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (group[i] == g) {
            return i;
        }
    }
    throw std::invalid_argument("element not in the crossed homomorphism's group");
}

bool CrossedHom::satisfies_cocycle_law() const
{
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (group[i].is_identity() && !values[i].in_scaled_lattice(modulus)) {
            return false;
        }
        for (std::size_t j = 0; j < group.size(); ++j) {
            const std::size_t k = index_of(group[i] * group[j]);
            const RatVector defect = values[k] - group[i] * values[j] - values[i];
            if (!defect.in_scaled_lattice(modulus)) {
                return false;
            }
        }
    }
    return true;
}

CrossedHom holonomy_cocycle(const CrystalGroup& gamma)
{
    CrossedHom c;
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        c.group.push_back(gamma.holonomy_in_lattice(i));
        RatVector u = gamma.lattice_coords(gamma.section[i]);
        for (std::size_t j = 0; j < u.size(); ++j) {
            u[j] = frac_of(u[j]);
        }
        c.values.push_back(std::move(u));
    }
    return c;
}

Claim1Result claim1_normalize(const CrystalGroup& gamma)
{
    const Integer q(static_cast<unsigned long>(gamma.order()));
    RatVector sum(gamma.dim);
    for (const auto& u : gamma.section) {
        sum += u;
    }
    Claim1Result out{make_rational(Integer(-1), q) * sum, {}};
    out.normalized = conjugate_group(gamma, AffineMap::translation_by(out.u0));
    for (std::size_t i = 0; i < out.normalized.order(); ++i) {
        if (!out.normalized.lattice_coords(out.normalized.section[i]).in_scaled_lattice(q)) {
            throw VerificationError("claim1", "translation part " + std::to_string(i) + " is not in (1/q) lattice");
        }
    }
    return out;
}

std::optional<RatVector> find_principal_vector(const CrossedHom& c, const Integer& q)
{
    if (c.values.empty()) {
        return std::nullopt;
    }
    RatVector sum(c.values.front().size());
    for (const auto& value : c.values) {
        sum += value;
    }
    RatVector v = make_rational(Integer(-1), q) * sum;
    for (std::size_t i = 0; i < c.group.size(); ++i) {
        const RatVector defect = c.values[i] - (c.group[i] * v - v);
        if (!defect.in_scaled_lattice(c.modulus)) {
            return std::nullopt;
        }
    }
    return v;
}

CrystalGroup conjugate_group(const CrystalGroup& gamma, const AffineMap& a)
{
    if (!a.is_invertible()) {
        throw std::invalid_argument("conjugate_group: map is not invertible");
    }
    const AffineMap a_inv = a.inverse();
    CrystalGroup out;
    out.dim = gamma.dim;
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        const AffineMap g = a * gamma.representative(i) * a_inv;
        out.holonomy.push_back(g.linear);
        out.section.push_back(g.translation);
    }
    out.lattice = a.linear * gamma.lattice;
    if (out.lattice.is_integral()) {
        const Rational det = determinant(out.lattice);
        if (det == 1 || det == -1) {
            out.lattice = RatMatrix::identity(gamma.dim);
        }
    }
    if (validate_group(gamma).valid) {
        const ValidationReport report = validate_group(out);
        if (!report.valid) {
            throw VerificationError("conjugate_group", report.violation);
        }
    }
    return out;
}

bool normalizes(const AffineMap& a, const CrystalGroup& gamma)
{
    const AffineMap a_inv = a.inverse();
    for (const AffineMap* m : {&a, &a_inv}) {
        const AffineMap& b = *m;
        const AffineMap b_inv = b.inverse();
        for (std::size_t j = 0; j < gamma.dim; ++j) {
            if (!gamma.in_lattice(b.linear * gamma.lattice.column(j))) {
                return false;
            }
        }
        for (std::size_t i = 0; i < gamma.order(); ++i) {
            if (!gamma.contains(b * gamma.representative(i) * b_inv)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::size_t> induced_holonomy_map(const AffineMap& a, const CrystalGroup& gamma)
{
    const RatMatrix inv = inverse(a.linear);
    std::vector<std::size_t> out;
    for (const auto& g : gamma.holonomy) {
        auto idx = gamma.find(a.linear * g * inv);
        if (!idx) {
            throw std::invalid_argument("map does not normalize the holonomy group");
        }
        out.push_back(*idx);
    }
    return out;
}

CrystalGroup reduce_section(const CrystalGroup& gamma)
{
    CrystalGroup out = gamma;
    for (auto& u : out.section) {
        RatVector c = gamma.lattice_coords(u);
        for (std::size_t j = 0; j < c.size(); ++j) {
            c[j] = frac_of(c[j]);
        }
        u = gamma.lattice * c;
    }
    return out;
}

CrystalGroup direct_product(const CrystalGroup& a, const CrystalGroup& b)
{
    CrystalGroup out;
    out.dim = a.dim + b.dim;
    out.lattice = block_diagonal(a.lattice, b.lattice);
    for (std::size_t i = 0; i < a.order(); ++i) {
        for (std::size_t j = 0; j < b.order(); ++j) {
            out.holonomy.push_back(block_diagonal(a.holonomy[i], b.holonomy[j]));
            std::vector<Rational> u(a.section[i].values());
            u.insert(u.end(), b.section[j].begin(), b.section[j].end());
            out.section.emplace_back(std::move(u));
        }
    }
    return out;
}

} // namespace anosov
