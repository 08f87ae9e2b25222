#include "anosov/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace anosov {

namespace {

constexpr long long kSafeInteger = 9007199254740991LL; // 2^53 - 1

[[noreturn]] void fail(const std::string& what) { throw SchemaError(what); }

Integer integer_from_json(const json& j)
{
    if (j.is_number_integer())
        return Integer(std::to_string(j.get<long long>()));
    if (j.is_number_unsigned())
        return Integer(std::to_string(j.get<unsigned long long>()));
    if (j.is_string()) {
        Rational r = rational_from_json(j);
        if (!is_integral(r))
            fail("expected an integer, got " + j.get<std::string>());
        return r.get_num();
    }
    fail("expected an integer, got " + j.dump());
}

const json& field(const json& j, const char* name)
{
    if (!j.is_object())
        fail("expected an object");
    auto it = j.find(name);
    if (it == j.end())
        fail(std::string("missing field \"") + name + "\"");
    return *it;
}

double number_field(const json& j, const char* name, double fallback)
{
    auto it = j.find(name);
    if (it == j.end())
        return fallback;
    if (!it->is_number())
        fail(std::string("field \"") + name + "\" must be a number");
    double v = it->get<double>();
    if (!std::isfinite(v))
        fail(std::string("field \"") + name + "\" must be finite");
    return v;
}

unsigned unsigned_field(const json& j, const char* name, unsigned fallback)
{
    auto it = j.find(name);
    if (it == j.end())
        return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 0 || it->get<long long>() > 1000000)
        fail(std::string("field \"") + name + "\" must be a non-negative integer");
    return static_cast<unsigned>(it->get<long long>());
}

void reject_unknown(const json& j, std::initializer_list<const char*> known)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || it.key() == k;
        if (!ok)
            fail("unknown field \"" + it.key() + "\"");
    }
}

json long_or_inf(long v) { return v == kNoReturn ? json("inf") : json(v); }

json vec_to_json(const Vec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

json pair_to_json(const std::array<Rational, 2>& a) { return json::array({to_json(a[0]), to_json(a[1])}); }

} // namespace

Rational rational_from_json(const json& j)
{
    if (j.is_number_integer() || j.is_number_unsigned())
        return Rational(integer_from_json(j));
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception&) {
            fail("malformed rational \"" + j.get<std::string>() + "\"");
        }
    }
    if (j.is_array() && j.size() == 2) {
        Integer num = integer_from_json(j[0]);
        Integer den = integer_from_json(j[1]);
        if (den == 0)
            fail("zero denominator");
        return make_rational(num, den);
    }
    fail("expected a rational, got " + j.dump());
}

json to_json(const Integer& z)
{
    if (fits_int64(z)) {
        long long v = z.get_si();
        if (v >= -kSafeInteger && v <= kSafeInteger)
            return v;
    }
    return to_string(z);
}

json to_json(const Rational& r)
{
    if (is_integral(r))
        return to_json(Integer(r.get_num()));
    return json::array({to_json(Integer(r.get_num())), to_json(Integer(r.get_den()))});
}

RatVector vector_from_json(const json& j)
{
    if (!j.is_array())
        fail("expected a vector");
    RatVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[i] = rational_from_json(j[i]);
    return v;
}

json to_json(const RatVector& v)
{
    json out = json::array();
    for (const auto& x : v)
        out.push_back(to_json(x));
    return out;
}

RatMatrix matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
        fail("expected a non-empty matrix");
    std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        fail("matrix rows must be non-empty arrays");
    std::size_t cols = j[0].size();
    RatMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail("matrix rows have unequal lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rational_from_json(j[r][c]);
    }
    return m;
}

json to_json(const RatMatrix& m)
{
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        out.push_back(to_json(m.row(r)));
    return out;
}

RatPoly poly_from_json(const json& j) { return RatPoly(vector_from_json(j).values()); }

json to_json(const RatPoly& p)
{
    json out = json::array();
    for (const auto& c : p.coeffs())
        out.push_back(to_json(c));
    return out;
}

AffineMap affine_from_json(const json& j)
{
    RatMatrix a = matrix_from_json(field(j, "linear"));
    reject_unknown(j, {"linear", "translation"});
    if (!a.is_square())
        fail("affine linear part must be square");
    RatVector t = j.contains("translation") ? vector_from_json(j["translation"]) : RatVector(a.rows());
    if (t.size() != a.rows())
        fail("translation has the wrong length");
    return AffineMap(a, t);
}

json to_json(const AffineMap& a) { return {{"linear", to_json(a.linear)}, {"translation", to_json(a.translation)}}; }

CrystalGroup group_from_json(const json& j)
{
    const json& jd = field(j, "dim");
    reject_unknown(j, {"dim", "holonomy", "section", "lattice"});
    if (!jd.is_number_integer() || jd.get<long long>() <= 0 || jd.get<long long>() > 64)
        fail("\"dim\" must be a positive integer");
    auto n = static_cast<std::size_t>(jd.get<long long>());

    const json& jh = field(j, "holonomy");
    if (!jh.is_array() || jh.empty())
        fail("\"holonomy\" must be a non-empty list of matrices");
    std::vector<RatMatrix> hol;
    for (const auto& m : jh) {
        RatMatrix g = matrix_from_json(m);
        if (g.rows() != n || g.cols() != n)
            fail("holonomy matrices must be dim x dim");
        hol.push_back(g);
    }

    std::vector<RatVector> section(hol.size(), RatVector(n));
    std::vector<bool> seen(hol.size(), false);
    if (j.contains("section")) {
        const json& js = j["section"];
        if (!js.is_array())
            fail("\"section\" must be a list");
        for (const auto& e : js) {
            const json& ji = field(e, "g_index");
            reject_unknown(e, {"g_index", "u"});
            if (!ji.is_number_integer() || ji.get<long long>() < 0 ||
                static_cast<std::size_t>(ji.get<long long>()) >= hol.size())
                fail("section \"g_index\" out of range");
            auto i = static_cast<std::size_t>(ji.get<long long>());
            if (seen[i])
                fail("duplicate section entry for g_index " + std::to_string(i));
            seen[i] = true;
            section[i] = vector_from_json(field(e, "u"));
            if (section[i].size() != n)
                fail("section vector has the wrong length");
        }
    }

    if (j.contains("lattice")) {
        RatMatrix basis = matrix_from_json(j["lattice"]);
        if (basis.rows() != n || basis.cols() != n)
            fail("\"lattice\" must be dim x dim");
        if (determinant(basis) == 0)
            fail("\"lattice\" basis is singular");
        return CrystalGroup(n, hol, section, basis);
    }
    return CrystalGroup(n, hol, section);
}

json to_json(const CrystalGroup& g)
{
    json hol = json::array();
    json section = json::array();
    for (std::size_t i = 0; i < g.order(); ++i) {
        hol.push_back(to_json(g.holonomy[i]));
        section.push_back({{"g_index", i}, {"u", to_json(g.section[i])}});
    }
    json out = {{"dim", g.dim}, {"holonomy", hol}, {"section", section}};
    if (!g.has_standard_lattice())
        out["lattice"] = to_json(g.lattice);
    return out;
}

json to_json(const SpectralClass& s)
{
    return {{"unstable_dim", s.unstable_dim}, {"stable_dim", s.stable_dim},   {"unit_dim", s.unit_dim},
            {"codimension", s.codimension},   {"certified_exact", s.certified_exact}};
}

json to_json(const ValidationReport& r)
{
    json out = {{"valid", r.valid},     {"closed", r.closed}, {"torsion_free", r.torsion_free},
                {"faithful", r.faithful}, {"order", r.order}};
    if (!r.violation.empty())
        out["violation"] = r.violation;
    return out;
}

json to_json(const CommutingPair& p)
{
    return {
        {"s", to_json(p.s)},
        {"q", p.q},
        {"reduction_exponent", p.reduction_exponent},
        {"exponent", p.exponent},
        {"frame", to_json(p.frame)},
        {"u0", to_json(p.u0)},
        {"v", to_json(p.v)},
        {"w", to_json(p.w)},
        {"v_hat", to_json(p.v_hat)},
        {"w_hat", to_json(p.w_hat)},
        {"u_hat", to_json(p.u_hat)},
        {"a", to_json(p.a)},
        {"expanding_method", p.expanding_method},
        {"normalized", {{"anosov_power", to_json(p.anosov_power)},
                        {"expanding", to_json(p.expanding)},
                        {"conjugacy", to_json(p.conjugacy)},
                        {"fixed_point", to_json(p.fixed_point)},
                        {"commutator_translation", to_json(p.commutator_translation)}}},
        {"original", {{"anosov_power", to_json(p.anosov_power_original)},
                      {"expanding", to_json(p.expanding_original)},
                      {"fixed_point", to_json(p.fixed_point_original)}}},
    };
}

json to_json(const H2Action& h)
{
    json torsion = json::array();
    for (const auto& t : h.torsion)
        torsion.push_back(to_json(t));
    return {{"torsion", torsion},
            {"free_rank", h.free_rank},
            {"action_order", h.action_order},
            {"group_order", h.group_order},
            {"trivial", h.is_trivial()}};
}

json to_json(const AssemblyReport& r)
{
    return {{"seed_dim", r.seed_dim},
            {"padded_seed_dim", r.padded_seed_dim},
            {"copies", r.copies},
            {"sigma", r.sigma},
            {"dimension", r.dimension},
            {"dimension_mod4", r.dimension_mod4},
            {"codimension", r.codimension},
            {"s_times_m", r.s_times_m},
            {"orientable", r.orientable},
            {"valid", r.valid},
            {"torsion_free", r.torsion_free},
            {"spectrum", to_json(r.spectrum)},
            {"a1", to_json(r.a1)},
            {"a1_power", r.a1_power},
            {"l1", to_json(r.l1)},
            {"h2", to_json(r.h2)}};
}

json to_json(const GromollFact& f)
{
    json out = {{"family", f.family},
                {"dimension", f.dimension},
                {"index", f.index},
                {"condition", f.condition},
                {"statement", to_string(f.statement)},
                {"source", f.source}};
    if (f.bound)
        out["bound"] = *f.bound;
    return out;
}

json to_json(const NilAuto& a)
{
    json t = json::array();
    for (const auto& tk : a.structure.t)
        t.push_back(json::array({pair_to_json(tk[0]), pair_to_json(tk[1])}));
    return {{"structure", t},
            {"p", to_json(a.p)},
            {"q", to_json(a.q)},
            {"ell", to_json(a.ell)},
            {"quad", json::array({to_json(a.quad[0]), to_json(a.quad[1])})},
            {"derivative", to_json(a.derivative())}};
}

json to_json(const HeisPoint& p)
{
    json out = json::array();
    for (const auto& c : p.c)
        out.push_back(to_json(c));
    return out;
}

PerturbationSpec perturbation_spec_from_json(const json& j)
{
    if (!j.is_object())
        fail("perturbation spec must be an object");
    reject_unknown(j, {"L", "k", "scale", "strength", "s", "m_cap", "epsilon", "grid"});
    PerturbationSpec spec;
    spec.l = matrix_from_json(field(j, "L"));
    if (!spec.l.is_square())
        fail("\"L\" must be square");
    if (!spec.l.is_integral())
        fail("\"L\" must be an integer matrix");
    if (spec.l.rows() < 2 || spec.l.rows() > 8)
        fail("\"L\" must have size between 2 and 8");
    const json& jk = field(j, "k");
    if (!jk.is_number_integer() || jk.get<long long>() < 1 ||
        static_cast<std::size_t>(jk.get<long long>()) >= spec.l.rows())
        fail("\"k\" must satisfy 1 <= k < n");
    spec.k = static_cast<std::size_t>(jk.get<long long>());
    if (j.contains("scale") && (j["scale"].is_string() || j["scale"].is_array()))
        spec.scale = rational_from_json(j["scale"]).get_d();
    else
        spec.scale = number_field(j, "scale", spec.scale);
    if (spec.scale <= 0 || spec.scale >= 0.5)
        fail("\"scale\" must lie in (0, 0.5)");
    spec.strength = number_field(j, "strength", spec.strength);
    spec.s = unsigned_field(j, "s", spec.s);
    if (spec.s < 2)
        fail("\"s\" must be at least 2");
    spec.m_cap = unsigned_field(j, "m_cap", spec.m_cap);
    if (spec.m_cap < 1 || spec.m_cap > 30)
        fail("\"m_cap\" must lie in [1, 30]");
    spec.epsilon = number_field(j, "epsilon", spec.epsilon);
    if (spec.epsilon <= 0)
        fail("\"epsilon\" must be positive");
    spec.grid = unsigned_field(j, "grid", spec.grid);
    if (spec.grid < 1)
        fail("\"grid\" must be positive");
    return spec;
}

json to_json(const ConeCertificate& c)
{
    return {{"epsilon", c.epsilon},
            {"alpha", c.alpha},
            {"N1", long_or_inf(c.n1)},
            {"N2", long_or_inf(c.n2)},
            {"N", c.n},
            {"lambda", c.lambda},
            {"mu", c.mu},
            {"stable_rate", c.stable_rate},
            {"unstable_rate", c.unstable_rate},
            {"m", c.m},
            {"grid", c.grid},
            {"margins",
             {{"no_return", c.margins.no_return},
              {"invariance", c.margins.invariance},
              {"expansion", c.margins.expansion},
              {"unstable", c.margins.unstable}}}};
}

json to_json(const CertifyResult& r)
{
    json out = {{"valid", r.valid}, {"certificate", to_json(r.certificate)}, {"violations", r.violations}};
    if (r.witness.size() > 0)
        out["witness"] = vec_to_json(r.witness);
    return out;
}

json to_json(const MinimalMResult& r)
{
    json table = json::array();
    for (const auto& row : r.table)
        table.push_back({{"m", row.m}, {"N1", long_or_inf(row.n1)}, {"N2", long_or_inf(row.n2)}, {"valid", row.valid}});
    json out = {{"found", r.found},
                {"table", table},
                {"grids", r.grids},
                {"grid_stable", r.grid_stable},
                {"result", to_json(r.certificate)}};
    out["m0"] = r.found ? json(r.m0) : json(nullptr);
    json runs = json::array();
    for (const auto& run : r.runs)
        runs.push_back(to_json(run));
    out["runs"] = runs;
    return out;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        fail(path + ": " + e.what());
    }
}

} // namespace anosov
