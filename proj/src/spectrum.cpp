#include "anosov/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <numeric>
#include <stdexcept>

namespace anosov {

RatPoly char_poly(const RatMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("char_poly: matrix is not square");
    }
    const std::size_t n = m.rows();
    RatMatrix h = m;
    // Similarity reduction to upper Hessenberg form.
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t pivot = j + 1;
        while (pivot < n && h(pivot, j) == 0) {
            ++pivot;
        }
        if (pivot == n) {
            continue;
        }
        if (pivot != j + 1) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(h(pivot, c), h(j + 1, c));
            }
            for (std::size_t r = 0; r < n; ++r) {
                std::swap(h(r, pivot), h(r, j + 1));
            }
        }
        const Rational p = h(j + 1, j);
        for (std::size_t k = j + 2; k < n; ++k) {
            if (h(k, j) == 0) {
                continue;
            }
            const Rational t = h(k, j) / p;
            for (std::size_t c = 0; c < n; ++c) {
                h(k, c) -= t * h(j + 1, c);
            }
            for (std::size_t r = 0; r < n; ++r) {
                h(r, j + 1) += t * h(r, k);
            }
        }
    }
    std::vector<RatPoly> chain;
    chain.push_back(RatPoly::constant(1));
    for (std::size_t k = 0; k < n; ++k) {
        RatPoly next = RatPoly({-h(k, k), 1}) * chain[k];
        Rational sub = 1;
        for (std::size_t i = k; i-- > 0;) {
            sub *= h(i + 1, i);
            if (sub == 0) {
                break;
            }
            next = next - (h(i, k) * sub) * chain[i];
        }
        chain.push_back(next);
    }
    return chain.back();
}

RatMatrix companion(const RatPoly& monic_poly)
{
    if (monic_poly.degree() < 1 || monic_poly.leading() != 1) {
        throw std::invalid_argument("companion: polynomial must be monic of degree >= 1");
    }
    const std::size_t d = static_cast<std::size_t>(monic_poly.degree());
    RatMatrix c(d, d);
    for (std::size_t i = 1; i < d; ++i) {
        c(i, i - 1) = 1;
    }
    for (std::size_t i = 0; i < d; ++i) {
        c(i, d - 1) = -monic_poly.coeff(i);
    }
    return c;
}

std::vector<std::complex<double>> approximate_roots(const RatPoly& p)
{
    using C = std::complex<double>;
    const long d = p.degree();
    std::vector<C> roots;
    if (d < 1) {
        return roots;
    }
    std::vector<double> c(static_cast<std::size_t>(d) + 1);
    const double lc = p.leading().get_d();
    for (long i = 0; i <= d; ++i) {
        c[static_cast<std::size_t>(i)] = p.coeff(static_cast<std::size_t>(i)).get_d() / lc;
    }
    // Cauchy bound for the initial circle.
    double bound = 0.0;
    for (long i = 0; i < d; ++i) {
        bound = std::max(bound, std::abs(c[static_cast<std::size_t>(i)]));
    }
    bound = 1.0 + bound;
    const double radius = std::min(bound, 1.0 + std::pow(std::abs(c[0]) + 1e-300, 1.0 / double(d)));
    for (long k = 0; k < d; ++k) {
        const double angle = 2.0 * M_PI * (double(k) + 0.25) / double(d) + 0.4;
        roots.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
    }
    auto eval = [&](C z, C& value, C& deriv) {
        value = C(1.0);
        deriv = C(0.0);
        for (long i = d - 1; i >= 0; --i) {
            deriv = deriv * z + value;
            value = value * z + c[static_cast<std::size_t>(i)];
        }
    };
    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (long i = 0; i < d; ++i) {
            C value;
            C deriv;
            eval(roots[static_cast<std::size_t>(i)], value, deriv);
            if (std::abs(value) == 0.0) {
                continue;
            }
            const C ratio = value / deriv;
            C sum(0.0);
            for (long j = 0; j < d; ++j) {
                if (j != i) {
                    C diff = roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
                    if (std::abs(diff) == 0.0) {
                        diff = C(1e-12, 1e-12);
                    }
                    sum += 1.0 / diff;
                }
            }
            C step = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                step = ratio;
            }
            roots[static_cast<std::size_t>(i)] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(roots[static_cast<std::size_t>(i)])));
        }
        if (max_step < 1e-15) {
            break;
        }
    }
    return roots;
}

namespace {

struct ComplexQ {
    Rational re;
    Rational im;
};

ComplexQ mul(const ComplexQ& a, const ComplexQ& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexQ sub(const ComplexQ& a, const ComplexQ& b) { return {a.re - b.re, a.im - b.im}; }

Rational norm2(const ComplexQ& a) { return a.re * a.re + a.im * a.im; }

ComplexQ divide(const ComplexQ& a, const ComplexQ& b)
{
    const Rational n = norm2(b);
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

ComplexQ eval_complex(const RatPoly& p, const ComplexQ& z)
{
    ComplexQ acc{0, 0};
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
        acc = mul(acc, z);
        acc.re += *it;
    }
    return acc;
}

// Simultaneous Weierstrass refinement of all roots of a squarefree polynomial
// on a dyadic grid, with exact inclusion radii d * |W_i|.
class RootRefiner {
public:
    RootRefiner(const RatPoly& p, unsigned bits) : poly_(p), bits_(bits)
    {
        for (const auto& z : approximate_roots(p)) {
            approx_.push_back({round_dyadic(Rational(z.real()), bits_), round_dyadic(Rational(z.imag()), bits_)});
        }
        separate();
        compute_corrections();
    }

    unsigned bits() const { return bits_; }

    // One Weierstrass step. The grid is refined once the corrections have
    // shrunk below half of the current precision. False once the step budget
    // is spent.
    bool advance(unsigned max_bits)
    {
        if (++steps_ > 400) {
            return false;
        }
        Rational largest = 0;
        for (const auto& w : corrections_) {
            largest = std::max(largest, norm2(w));
        }
        Integer threshold = 1;
        threshold <<= bits_;
        if (largest * Rational(threshold) < 1) {
            if (bits_ >= max_bits) {
                return false;
            }
            bits_ = std::min(max_bits, bits_ * 2);
        }
        for (std::size_t i = 0; i < approx_.size(); ++i) {
            approx_[i].re = round_dyadic(approx_[i].re - corrections_[i].re, bits_);
            approx_[i].im = round_dyadic(approx_[i].im - corrections_[i].im, bits_);
        }
        separate();
        compute_corrections();
        return true;
    }

    std::vector<RootDisk> disks() const
    {
        std::vector<RootDisk> out;
        const Rational d(static_cast<long>(approx_.size()));
        for (std::size_t i = 0; i < approx_.size(); ++i) {
            const Rational r = d * sqrt_upper(norm2(corrections_[i]), bits_ + 8);
            out.push_back({approx_[i].re, approx_[i].im, r});
        }
        return out;
    }

private:
    void separate()
    {
        Integer den = 1;
        den <<= bits_;
        for (std::size_t i = 1; i < approx_.size(); ++i) {
            bool clash = true;
            while (clash) {
                clash = false;
                for (std::size_t j = 0; j < i; ++j) {
                    if (approx_[i].re == approx_[j].re && approx_[i].im == approx_[j].im) {
                        approx_[i].re += make_rational(Integer(static_cast<long>(i + 1)), den);
                        approx_[i].im += make_rational(Integer(static_cast<long>(2 * i + 1)), den);
                        clash = true;
                    }
                }
            }
        }
    }

    void compute_corrections()
    {
        corrections_.assign(approx_.size(), ComplexQ{0, 0});
        const Rational lc = poly_.leading();
        for (std::size_t i = 0; i < approx_.size(); ++i) {
            ComplexQ denom{lc, 0};
            for (std::size_t j = 0; j < approx_.size(); ++j) {
                if (j != i) {
                    denom = mul(denom, sub(approx_[i], approx_[j]));
                }
            }
            corrections_[i] = divide(eval_complex(poly_, approx_[i]), denom);
        }
    }

    RatPoly poly_;
    unsigned bits_;
    unsigned steps_ = 0;
    std::vector<ComplexQ> approx_;
    std::vector<ComplexQ> corrections_;
};

bool disks_disjoint(const std::vector<RootDisk>& disks, unsigned bits)
{
    for (std::size_t i = 0; i < disks.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const Rational dre = disks[i].re - disks[j].re;
            const Rational dim = disks[i].im - disks[j].im;
            const Rational dist = sqrt_lower(dre * dre + dim * dim, bits);
            if (!(dist > disks[i].radius + disks[j].radius)) {
                return false;
            }
        }
    }
    return true;
}

enum class Side { Inside, Outside, Touching };

Side side_of_unit_circle(const RootDisk& disk, unsigned bits)
{
    const Rational mod2 = disk.re * disk.re + disk.im * disk.im;
    if (sqrt_upper(mod2, bits) + disk.radius < 1) {
        return Side::Inside;
    }
    if (sqrt_lower(mod2, bits) - disk.radius > 1) {
        return Side::Outside;
    }
    return Side::Touching;
}

std::size_t unit_roots_squarefree(const RatPoly& f)
{
    RatPoly g = gcd(f, f.reverse());
    if (g.degree() < 1) {
        return 0;
    }
    std::size_t count = 0;
    for (const Rational& root : {Rational(1), Rational(-1)}) {
        if (g(root) == 0) {
            ++count;
            g = exact_quotient(g, RatPoly::x_minus(root));
        }
    }
    if (g.degree() < 1) {
        return count;
    }
    const RatPoly h = reciprocal_trace_polynomial(g.monic());
    return count + 2 * count_real_roots(h, Rational(-2), Rational(2));
}

} // namespace

std::vector<RootDisk> isolate_roots(const RatPoly& squarefree, unsigned precision_bits, unsigned max_precision_bits)
{
    if (squarefree.degree() < 1) {
        return {};
    }
    RootRefiner refiner(squarefree, precision_bits);
    for (;;) {
        auto disks = refiner.disks();
        if (disks_disjoint(disks, refiner.bits() + 8)) {
            return disks;
        }
        if (!refiner.advance(max_precision_bits)) {
            throw std::runtime_error("isolate_roots: precision cap reached");
        }
    }
}

std::size_t unit_circle_root_count(const RatPoly& p)
{
    std::size_t total = 0;
    for (const auto& [factor, mult] : squarefree_decomposition(p)) {
        total += mult * unit_roots_squarefree(factor);
    }
    return total;
}

SpectralClass classify_polynomial(const RatPoly& p, const SpectrumOptions& opts)
{
    SpectralClass out;
    for (const auto& [factor, mult] : squarefree_decomposition(p)) {
        const std::size_t unit = unit_roots_squarefree(factor);
        const auto degree = static_cast<std::size_t>(factor.degree());
        out.unit_dim += mult * unit;
        if (unit == degree) {
            continue;
        }
        RootRefiner refiner(factor, opts.precision_bits);
        for (;;) {
            auto disks = refiner.disks();
            const unsigned bits = refiner.bits() + 8;
            if (disks_disjoint(disks, bits)) {
                std::size_t inside = 0;
                std::size_t outside = 0;
                std::size_t touching = 0;
                for (const auto& disk : disks) {
                    switch (side_of_unit_circle(disk, bits)) {
                    case Side::Inside: ++inside; break;
                    case Side::Outside: ++outside; break;
                    case Side::Touching: ++touching; break;
                    }
                }
                // Each isolated disk holds one root; the `unit` circle roots can
                // only sit in touching disks, so equality pins the split.
                if (touching == unit) {
                    out.stable_dim += mult * inside;
                    out.unstable_dim += mult * outside;
                    break;
                }
            }
            if (!refiner.advance(opts.max_precision_bits)) {
                throw std::runtime_error("classify_spectrum: precision cap reached before separation");
            }
        }
    }
    out.codimension = std::min(out.stable_dim, out.unstable_dim);
    out.certified_exact = true;
    return out;
}

SpectralClass classify_spectrum(const RatMatrix& m, const SpectrumOptions& opts)
{
    return classify_polynomial(char_poly(m), opts);
}

bool is_anosov_matrix(const RatMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("is_anosov_matrix: matrix is not square");
    }
    if (!m.is_integral()) {
        throw std::invalid_argument("is_anosov_matrix: matrix has non-integer entries");
    }
    const Rational det = determinant(m);
    if (det != 1 && det != -1) {
        return false;
    }
    return unit_circle_root_count(char_poly(m)) == 0;
}

bool is_expanding_matrix(const RatMatrix& m)
{
    const SpectralClass sc = classify_spectrum(m);
    return sc.stable_dim == 0 && sc.unit_dim == 0;
}

namespace {

bool is_pisot_unit(const RatPoly& p)
{
    const SpectralClass sc = classify_polynomial(p);
    return sc.unit_dim == 0 && sc.unstable_dim == 1;
}

} // namespace

RatMatrix codim_one_anosov(std::size_t s)
{
    if (s < 2) {
        throw std::invalid_argument("codim_one_anosov: dimension must be at least 2");
    }
    if (s == 2) {
        return companion(monic_from_integers({1, -3}));
    }
    if (s == 3) {
        return companion(monic_from_integers({-1, -1, 0}));
    }
    // Monic, constant term +-1, middle coefficients in [-3, 3], scanned by
    // increasing l1 norm. A unimodular polynomial with a single root outside
    // the closed disk is irreducible over Z. Perron's criterion guarantees a
    // hit at norm 3 (x^s - 3x^(s-1) - 1).
    const std::size_t free = s - 1;
    std::vector<long> mid(free, 0);
    std::optional<RatMatrix> found;
    std::function<void(std::size_t, long)> visit = [&](std::size_t pos, long remaining) {
        if (found) {
            return;
        }
        if (pos == free) {
            if (remaining != 0) {
                return;
            }
            for (long c0 : {-1L, 1L}) {
                std::vector<long> coeffs{c0};
                coeffs.insert(coeffs.end(), mid.begin(), mid.end());
                const RatPoly p = monic_from_integers(coeffs);
                if (is_pisot_unit(p)) {
                    found = companion(p);
                    return;
                }
            }
            return;
        }
        for (long v = -std::min(3L, remaining); v <= std::min(3L, remaining); ++v) {
            mid[pos] = v;
            visit(pos + 1, remaining - std::labs(v));
            if (found) {
                return;
            }
        }
        mid[pos] = 0;
    };
    for (long budget = 1; budget <= 3 * static_cast<long>(free) && !found; ++budget) {
        visit(0, budget);
    }
    if (found) {
        return *found;
    }
    throw std::runtime_error("codim_one_anosov: no candidate found in the search window");
}

RatMatrix tensor_with_identity(const RatMatrix& a1, std::size_t m)
{
    if (!a1.is_square()) {
        throw std::invalid_argument("tensor_with_identity: matrix is not square");
    }
    return kronecker(RatMatrix::identity(m), a1);
}

} // namespace anosov
