#pragma once

#include "anosov/affine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace anosov {

/// A crystallographic group stored as holonomy plus one translation part per
/// holonomy element. Elements are (g, section[g] + z) for z in the lattice
/// spanned by the columns of `lattice`.
struct CrystalGroup {
    std::size_t dim = 0;
    std::vector<RatMatrix> holonomy;
    std::vector<RatVector> section;
    RatMatrix lattice; ///< basis of the translation lattice, as columns

    CrystalGroup() = default;
    CrystalGroup(std::size_t n, std::vector<RatMatrix> f, std::vector<RatVector> u);
    CrystalGroup(std::size_t n, std::vector<RatMatrix> f, std::vector<RatVector> u, RatMatrix basis);

    static CrystalGroup torus(std::size_t n);
    static CrystalGroup klein_bottle();

    std::size_t order() const { return holonomy.size(); }
    bool has_standard_lattice() const { return lattice.is_identity(); }

    /// Index of g in the holonomy list, or nullopt.
    std::optional<std::size_t> find(const RatMatrix& g) const;
    std::size_t identity_index() const;
    AffineMap representative(std::size_t i) const;

    /// Coordinates of v in the lattice basis.
    RatVector lattice_coords(const RatVector& v) const;
    bool in_lattice(const RatVector& v) const;
    /// Holonomy element i written in the lattice basis.
    RatMatrix holonomy_in_lattice(std::size_t i) const;
    bool contains(const AffineMap& a) const;

    /// Same presentation (not the same group up to reordering).
    friend bool operator==(const CrystalGroup&, const CrystalGroup&) = default;
};

struct ValidationReport {
    bool valid = false;
    bool closed = false;
    bool torsion_free = false;
    bool faithful = false;
    std::size_t order = 0;
    std::string violation; ///< first violated axiom, empty when valid
};

ValidationReport validate_group(const CrystalGroup& gamma);

/// A map F -> Q^n satisfying c(gh) = g c(h) + c(g) modulo (1/modulus) Z^n.
struct CrossedHom {
    std::vector<RatMatrix> group;
    std::vector<RatVector> values;
    Integer modulus = 1;

    std::size_t index_of(const RatMatrix& g) const;
    bool satisfies_cocycle_law() const;
};

/// Translation parts reduced mod the lattice; values in lattice coordinates.
CrossedHom holonomy_cocycle(const CrystalGroup& gamma);

struct Claim1Result {
    RatVector u0;
    CrystalGroup normalized;
};

/// u0 = -(1/q) sum u_g; conjugation by x -> x + u0 moves every translation
/// part into (1/q) times the lattice.
Claim1Result claim1_normalize(const CrystalGroup& gamma);

/// v = -(1/q) sum c(g), returned only if c(g) = g v - v holds modulo the
/// cocycle's modulus for every g.
std::optional<RatVector> find_principal_vector(const CrossedHom& c, const Integer& q);

/// a Gamma a^-1, with the lattice basis transported by the linear part.
CrystalGroup conjugate_group(const CrystalGroup& gamma, const AffineMap& a);

/// True when a Gamma a^-1 = Gamma.
bool normalizes(const AffineMap& a, const CrystalGroup& gamma);

/// For each holonomy index i, the index of the holonomy part of a r_i a^-1.
std::vector<std::size_t> induced_holonomy_map(const AffineMap& a, const CrystalGroup& gamma);

/// Replaces each section value by a representative in [0, 1) lattice coordinates.
CrystalGroup reduce_section(const CrystalGroup& gamma);

/// Direct product of two groups (block holonomy, concatenated translations).
CrystalGroup direct_product(const CrystalGroup& a, const CrystalGroup& b);

} // namespace anosov
