#include "anosov/commuting.hpp"

#include "anosov/errors.hpp"
#include "anosov/smith.hpp"

#include <numeric>

namespace anosov {

namespace {

Integer order_of(const CrystalGroup& gamma) { return Integer(static_cast<unsigned long>(gamma.order())); }

RatMatrix mod_q(const RatMatrix& m, const Integer& q) { return reduce_mod(m, q); }

void require_standard(const CrystalGroup& gamma, const char* stage)
{
    if (!gamma.has_standard_lattice()) {
        throw std::invalid_argument(std::string(stage) + ": expects the lattice Z^n");
    }
}

} // namespace

PowerReduction reduce_power(const CrystalGroup& gamma, const AffineMap& l, unsigned long cap)
{
    require_standard(gamma, "reduce_power");
    if (!normalizes(l, gamma)) {
        throw VerificationError("reduce_power", "the map does not normalize the group");
    }
    const Integer q = order_of(gamma);
    const std::vector<std::size_t> perm = induced_holonomy_map(l, gamma);
    const RatMatrix a_mod = mod_q(l.linear, q);
    const RatMatrix id_mod = mod_q(RatMatrix::identity(gamma.dim), q);
    std::vector<std::size_t> current = perm;
    RatMatrix power_mod = a_mod;
    for (unsigned long p = 1; p <= cap; ++p) {
        bool trivial_on_f = true;
        for (std::size_t i = 0; i < current.size(); ++i) {
            if (current[i] != i) {
                trivial_on_f = false;
                break;
            }
        }
        if (trivial_on_f && power_mod == id_mod) {
            PowerReduction out{p, power(l, p)};
            for (const auto& g : gamma.holonomy) {
                if (!(out.power.linear * g == g * out.power.linear)) {
                    throw VerificationError("reduce_power", "A^p does not commute with the holonomy");
                }
            }
            return out;
        }
        for (auto& idx : current) {
            idx = perm[idx];
        }
        power_mod = mod_q(power_mod * a_mod, q);
    }
    throw VerificationError("reduce_power", "no admissible exponent below the iteration cap");
}

CrossedHom build_theta(const CrystalGroup& gamma, const Integer& s)
{
    require_standard(gamma, "build_theta");
    const Integer q = order_of(gamma);
    if (s <= 1 || (s - 1) % q != 0) {
        throw std::invalid_argument("build_theta: s must satisfy s > 1 and s = 1 mod q");
    }
    CrossedHom theta;
    theta.group = gamma.holonomy;
    for (const auto& u : gamma.section) {
        RatVector value = Rational(s - 1) * u;
        if (!value.is_integral()) {
            throw VerificationError("build_theta", "theta takes a non-integral value; group not normalized");
        }
        theta.values.push_back(std::move(value));
    }
    return theta;
}

ExpandingResult find_expanding(const CrystalGroup& gamma, const Integer& s)
{
    const std::size_t n = gamma.dim;
    ExpandingResult out;
    out.theta = build_theta(gamma, s);
    const Integer q = order_of(gamma);
    auto conjugation_lands = [&](const AffineMap& e) {
        const AffineMap e_inv = e.inverse();
        for (std::size_t i = 0; i < gamma.order(); ++i) {
            if (!gamma.contains(e * gamma.representative(i) * e_inv)) {
                return false;
            }
        }
        return true;
    };
    RatVector sum(n);
    for (const auto& value : out.theta.values) {
        sum += value;
    }
    out.v = make_rational(Integer(-1), q) * sum;
    out.method = "averaging";
    out.map = AffineMap(RatMatrix::scalar(n, Rational(s)), out.v);
    if (conjugation_lands(out.map)) {
        return out;
    }
    // (I - g) v = (1 - s) u_g mod Z^n for every g, stacked.
    RatMatrix m(n * gamma.order(), n);
    RatVector b(n * gamma.order());
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        const RatMatrix block = RatMatrix::identity(n) - gamma.holonomy[i];
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                m(i * n + r, c) = block(r, c);
            }
            b[i * n + r] = Rational(1 - s) * gamma.section[i][r];
        }
    }
    auto v = smith_solve(m, b);
    if (!v) {
        throw VerificationError("find_expanding", "no translation makes s x + v normalize the group");
    }
    out.v = *v;
    out.method = "smith";
    out.map = AffineMap(RatMatrix::scalar(n, Rational(s)), out.v);
    if (!conjugation_lands(out.map)) {
        throw VerificationError("find_expanding", "conjugation by E leaves the group");
    }
    return out;
}

AnosovNormalForm build_omega_and_anosov(const CrystalGroup& gamma, const AffineMap& l)
{
    require_standard(gamma, "build_omega_and_anosov");
    const std::size_t n = gamma.dim;
    const Integer q = order_of(gamma);
    const RatMatrix& a = l.linear;
    for (const auto& g : gamma.holonomy) {
        if (!(a * g == g * a)) {
            throw VerificationError("build_omega_and_anosov", "A does not commute with the holonomy");
        }
    }
    if (!(reduce_mod(a, q) == reduce_mod(RatMatrix::identity(n), q))) {
        throw VerificationError("build_omega_and_anosov", "A is not the identity modulo q");
    }
    AnosovNormalForm out;
    out.omega.group = gamma.holonomy;
    const AffineMap l_inv = l.inverse();
    std::vector<AffineMap> psi;
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        const AffineMap image = l * gamma.representative(i) * l_inv;
        if (!(image.linear == gamma.holonomy[i]) || !gamma.contains(image)) {
            throw VerificationError("build_omega_and_anosov", "conjugation by L is not the identity on holonomy");
        }
        RatVector value = a * gamma.section[i] - image.translation;
        if (!value.is_integral()) {
            throw VerificationError("build_omega_and_anosov", "omega takes a non-integral value");
        }
        out.omega.values.push_back(std::move(value));
        psi.push_back(image);
    }
    RatVector sum(n);
    for (const auto& value : out.omega.values) {
        sum += value;
    }
    out.w = make_rational(Integer(-1), q) * sum;
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        if (!(out.omega.values[i] == gamma.holonomy[i] * out.w - out.w)) {
            throw VerificationError("build_omega_and_anosov", "omega is not principal");
        }
    }
    out.map = AffineMap(a, out.w);
    const AffineMap map_inv = out.map.inverse();
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        if (!(out.map * gamma.representative(i) * map_inv == psi[i])) {
            throw VerificationError("build_omega_and_anosov", "conjugation by Ax + w differs from psi");
        }
    }
    return out;
}

QFold qfold_and_fix(const AffineMap& e, const AffineMap& a, std::size_t q)
{
    const std::size_t n = e.dim();
    QFold out;
    out.expanding = power(e, q);
    out.anosov = power(a, q);
    const Rational s = e.linear(0, 0);
    Rational geometric = 0;
    Rational s_power = 1;
    RatVector w_sum(n);
    RatMatrix a_power = RatMatrix::identity(n);
    for (std::size_t i = 0; i < q; ++i) {
        geometric += s_power;
        s_power *= s;
        w_sum += a_power * a.translation;
        a_power = a_power * a.linear;
    }
    out.v_hat = geometric * e.translation;
    out.w_hat = w_sum;
    if (!(out.expanding.translation == out.v_hat) || !(out.expanding.linear == RatMatrix::scalar(n, s_power))) {
        throw VerificationError("qfold_and_fix", "E^q differs from s^q x + v_hat");
    }
    if (!(out.anosov.translation == out.w_hat)) {
        throw VerificationError("qfold_and_fix", "A^q differs from A^q x + w_hat");
    }
    if (!out.v_hat.is_integral()) {
        throw VerificationError("qfold_and_fix", "v_hat is not integral");
    }
    if (!out.w_hat.is_integral()) {
        throw VerificationError("qfold_and_fix", "w_hat is not integral");
    }
    out.fixed_point = RatVector(n);
    return out;
}

AffineMap claim4_conjugacy(const CrystalGroup& gamma, const AffineMap& l_q, const AffineMap& a_q)
{
    const std::size_t n = l_q.dim();
    if (!(l_q.linear == a_q.linear)) {
        throw std::invalid_argument("claim4_conjugacy: linear parts differ");
    }
    const RatMatrix i_minus = RatMatrix::identity(n) - a_q.linear;
    if (determinant(i_minus) == 0) {
        throw VerificationError("claim4_conjugacy", "A^q has eigenvalue 1");
    }
    const RatVector a = inverse(i_minus) * (l_q.translation - a_q.translation);
    const AffineMap t = AffineMap::translation_by(a);
    if (!(t * a_q * t.inverse() == l_q)) {
        throw VerificationError("claim4_conjugacy", "T A^q T^-1 differs from L^q");
    }
    for (std::size_t i = 0; i < gamma.order(); ++i) {
        if (!(gamma.holonomy[i] * a == a)) {
            throw VerificationError("claim4_conjugacy", "holonomy element " + std::to_string(i) + " moves a");
        }
    }
    return t;
}

Integer default_scale(std::size_t q) { return q == 1 ? Integer(2) : Integer(static_cast<unsigned long>(q + 1)); }

CommutingPair prop3_pipeline(const CrystalGroup& gamma, const AffineMap& l, std::optional<Integer> s)
{
    const ValidationReport report = validate_group(gamma);
    if (!report.valid) {
        throw VerificationError("validate", report.violation);
    }
    if (l.dim() != gamma.dim) {
        throw std::invalid_argument("prop3_pipeline: dimension mismatch");
    }
    CommutingPair pair;
    pair.q = gamma.order();
    pair.s = s ? *s : default_scale(pair.q);

    // Lattice basis -> Z^n, then average the translation parts.
    const AffineMap to_standard = AffineMap::linear_map(inverse(gamma.lattice));
    const CrystalGroup standard = conjugate_group(gamma, to_standard);
    const Claim1Result c1 = claim1_normalize(standard);
    pair.u0 = c1.u0;
    pair.normalized = c1.normalized;
    pair.frame = AffineMap::translation_by(c1.u0) * to_standard;
    const CrystalGroup& g = pair.normalized;
    const AffineMap l_norm = pair.frame * l * pair.frame.inverse();

    const PowerReduction reduced = reduce_power(g, l_norm);
    pair.reduction_exponent = reduced.exponent;
    pair.exponent = reduced.exponent * pair.q;

    const ExpandingResult e = find_expanding(g, pair.s);
    pair.v = e.v;
    pair.expanding_method = e.method;
    const AnosovNormalForm anf = build_omega_and_anosov(g, reduced.power);
    pair.w = anf.w;
    const QFold fold = qfold_and_fix(e.map, anf.map, pair.q);
    pair.v_hat = fold.v_hat;
    pair.w_hat = fold.w_hat;

    pair.anosov_power = power(reduced.power, pair.q);
    pair.u_hat = pair.anosov_power.translation;
    pair.conjugacy = claim4_conjugacy(g, pair.anosov_power, fold.anosov);
    pair.a = pair.conjugacy.translation;
    pair.expanding = pair.conjugacy * fold.expanding * pair.conjugacy.inverse();
    pair.fixed_point = pair.a;

    const AffineMap lhs = pair.expanding * pair.anosov_power;
    const AffineMap rhs = pair.anosov_power * pair.expanding;
    pair.commutator_translation = lhs.translation - rhs.translation;

    const AffineMap back = pair.frame.inverse();
    pair.anosov_power_original = back * pair.anosov_power * pair.frame;
    pair.expanding_original = back * pair.expanding * pair.frame;
    pair.fixed_point_original = back(pair.fixed_point);
    if (!(pair.anosov_power_original == power(l, pair.exponent))) {
        throw VerificationError("prop3_pipeline", "normalized power does not match L^(pq)");
    }

    const std::string problem = check_commuting_pair(pair);
    if (!problem.empty()) {
        throw VerificationError("prop3_pipeline", problem);
    }
    return pair;
}

std::string check_commuting_pair(const CommutingPair& pair)
{
    const CrystalGroup& g = pair.normalized;
    const std::size_t n = g.dim;
    const AffineMap& e = pair.expanding;
    const AffineMap& l = pair.anosov_power;
    if (!(e.linear == RatMatrix::scalar(n, e.linear(0, 0))) || e.linear(0, 0) <= 1) {
        return "expanding map is not conformal expanding";
    }
    const AffineMap lhs = e * l;
    const AffineMap rhs = l * e;
    if (!(lhs.linear == rhs.linear)) {
        return "linear parts do not commute";
    }
    const RatVector z = lhs.translation - rhs.translation;
    if (!(z == pair.commutator_translation) || !g.in_lattice(z)) {
        return "commutator is not a lattice translation";
    }
    if (!(lhs == AffineMap::translation_by(z) * rhs)) {
        return "E L differs from tau_z L E";
    }
    if (!normalizes(l, g)) {
        return "the Anosov power does not normalize the group";
    }
    const AffineMap tau = AffineMap::translation_by(z);
    const AffineMap e_inv = e.inverse();
    const AffineMap l_inv = l.inverse();
    for (std::size_t i = 0; i < g.order(); ++i) {
        const AffineMap r = g.representative(i);
        const AffineMap e_r = e * r * e_inv;
        if (!g.contains(e_r)) {
            return "conjugation by the expanding map leaves the group";
        }
        const AffineMap el = e * (l * r * l_inv) * e_inv;
        const AffineMap le = l * e_r * l_inv;
        if (!(el == tau * le * tau.inverse())) {
            return "conjugation actions do not commute up to the lattice translation";
        }
    }
    if (!g.in_lattice(e(pair.fixed_point) - pair.fixed_point) || !g.in_lattice(l(pair.fixed_point) - pair.fixed_point)) {
        return "fixed point is not shared";
    }
    // Moving the origin to a makes both translation parts lattice vectors and
    // leaves the group unchanged.
    const AffineMap rebase = AffineMap::translation_by(-pair.a);
    const AffineMap e_rebased = rebase * e * rebase.inverse();
    const AffineMap l_rebased = rebase * l * rebase.inverse();
    if (!g.in_lattice(e_rebased.translation) || !g.in_lattice(l_rebased.translation)) {
        return "rebased translation parts are not lattice vectors";
    }
    for (std::size_t i = 0; i < g.order(); ++i) {
        if (!(rebase * g.representative(i) * rebase.inverse() == g.representative(i))) {
            return "rebasing at the fixed point changes the group";
        }
    }
    return {};
}

} // namespace anosov
