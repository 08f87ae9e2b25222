#include "anosov/polynomial.hpp"

#include <stdexcept>

namespace anosov {

RatPoly::RatPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void RatPoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

RatPoly RatPoly::monomial(const Rational& c, std::size_t degree)
{
    std::vector<Rational> coeffs(degree + 1, Rational(0));
    coeffs[degree] = c;
    return RatPoly(std::move(coeffs));
}

bool RatPoly::is_integral() const
{
    for (const auto& c : coeffs_) {
        if (!anosov::is_integral(c)) {
            return false;
        }
    }
    return true;
}

RatPoly RatPoly::monic() const
{
    if (is_zero()) {
        return *this;
    }
    RatPoly out = *this;
    const Rational lc = leading();
    for (auto& c : out.coeffs_) {
        c /= lc;
    }
    return out;
}

RatPoly RatPoly::derivative() const
{
    if (coeffs_.size() <= 1) {
        return {};
    }
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        d[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
    }
    return RatPoly(std::move(d));
}

RatPoly RatPoly::reverse() const
{
    std::vector<Rational> r(coeffs_.rbegin(), coeffs_.rend());
    return RatPoly(std::move(r));
}

Rational RatPoly::operator()(const Rational& x) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double RatPoly::eval_double(double x) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + it->get_d();
    }
    return acc;
}

RatPoly operator+(const RatPoly& a, const RatPoly& b)
{
    std::vector<Rational> c(std::max(a.coeffs().size(), b.coeffs().size()), Rational(0));
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        c[i] += a.coeffs()[i];
    }
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) {
        c[i] += b.coeffs()[i];
    }
    return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + Rational(-1) * b; }

RatPoly operator*(const RatPoly& a, const RatPoly& b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<Rational> c(a.coeffs().size() + b.coeffs().size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
            c[i + j] += a.coeffs()[i] * b.coeffs()[j];
        }
    }
    return RatPoly(std::move(c));
}

RatPoly operator*(const Rational& s, const RatPoly& p)
{
    std::vector<Rational> c = p.coeffs();
    for (auto& x : c) {
        x *= s;
    }
    return RatPoly(std::move(c));
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b)
{
    if (b.is_zero()) {
        throw std::domain_error("polynomial division by zero");
    }
    if (a.degree() < b.degree()) {
        return {RatPoly{}, a};
    }
    std::vector<Rational> rem = a.coeffs();
    std::vector<Rational> quot(a.coeffs().size() - b.coeffs().size() + 1, Rational(0));
    const std::size_t db = b.coeffs().size() - 1;
    const Rational lb = b.leading();
    for (std::size_t k = quot.size(); k-- > 0;) {
        const Rational factor = rem[k + db] / lb;
        quot[k] = factor;
        if (factor == 0) {
            continue;
        }
        for (std::size_t j = 0; j <= db; ++j) {
            rem[k + j] -= factor * b.coeffs()[j];
        }
    }
    rem.resize(db);
    return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

RatPoly exact_quotient(const RatPoly& a, const RatPoly& b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) {
        throw std::logic_error("polynomial division is not exact");
    }
    return q;
}

RatPoly gcd(RatPoly a, RatPoly b)
{
    while (!b.is_zero()) {
        RatPoly r = divmod(a, b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

std::vector<SquarefreeFactor> squarefree_decomposition(const RatPoly& p)
{
    std::vector<SquarefreeFactor> out;
    if (p.degree() < 1) {
        return out;
    }
    const RatPoly f = p.monic();
    const RatPoly fp = f.derivative();
    RatPoly a = gcd(f, fp);
    RatPoly b = exact_quotient(f, a);
    RatPoly c = exact_quotient(fp, a);
    RatPoly d = c - b.derivative();
    unsigned i = 1;
    while (b.degree() > 0) {
        RatPoly g = gcd(b, d);
        b = exact_quotient(b, g);
        c = exact_quotient(d, g);
        d = c - b.derivative();
        if (g.degree() > 0) {
            out.push_back({g, i});
        }
        ++i;
    }
    return out;
}

namespace {

int sign_of(const Rational& x) { return sgn(x); }

std::size_t sign_changes(const std::vector<RatPoly>& seq, const Rational& x)
{
    std::size_t changes = 0;
    int last = 0;
    for (const auto& p : seq) {
        const int s = sign_of(p(x));
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++changes;
        }
        last = s;
    }
    return changes;
}

} // namespace

std::size_t count_real_roots(const RatPoly& p, const Rational& lo, const Rational& hi)
{
    if (p.degree() < 1) {
        return 0;
    }
    if (p(lo) == 0 || p(hi) == 0) {
        throw std::invalid_argument("Sturm count endpoints must not be roots");
    }
    std::vector<RatPoly> seq{p, p.derivative()};
    while (seq.back().degree() > 0) {
        RatPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.is_zero()) {
            break;
        }
        seq.push_back(Rational(-1) * r);
    }
    const std::size_t at_lo = sign_changes(seq, lo);
    const std::size_t at_hi = sign_changes(seq, hi);
    return at_lo - at_hi;
}

RatPoly reciprocal_trace_polynomial(const RatPoly& g)
{
    if (g.degree() < 0 || g.degree() % 2 != 0) {
        throw std::invalid_argument("reciprocal polynomial must have even degree");
    }
    if (!(g.reverse() == g)) {
        throw std::invalid_argument("polynomial is not reciprocal");
    }
    const std::size_t e = static_cast<std::size_t>(g.degree() / 2);
    // D_j(y) = x^j + x^-j expressed in y = x + 1/x.
    std::vector<RatPoly> dickson;
    dickson.push_back(RatPoly::constant(2));
    dickson.push_back(RatPoly({0, 1}));
    const RatPoly y({0, 1});
    for (std::size_t j = 2; j <= e; ++j) {
        dickson.push_back(y * dickson[j - 1] - dickson[j - 2]);
    }
    RatPoly h = RatPoly::constant(g.coeff(e));
    for (std::size_t j = 1; j <= e; ++j) {
        h = h + g.coeff(e + j) * dickson[j];
    }
    return h;
}

RatPoly monic_from_integers(const std::vector<long>& lower_coeffs)
{
    std::vector<Rational> c;
    c.reserve(lower_coeffs.size() + 1);
    for (long v : lower_coeffs) {
        c.emplace_back(v);
    }
    c.emplace_back(1);
    return RatPoly(std::move(c));
}

} // namespace anosov
