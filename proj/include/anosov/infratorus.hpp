#pragma once

#include "anosov/crystal.hpp"
#include "anosov/spectrum.hpp"

#include <string>
#include <vector>

namespace anosov {

/// Gamma^(s): s copies of the seed over the diagonal holonomy. Coordinates
/// are copy-major, so g acts as diag(g, ..., g) = Id_s (x) g.
struct DiagonalPullback {
    CrystalGroup base;
    std::size_t copies = 1;
    CrystalGroup result;
};

DiagonalPullback diagonal_pullback(const CrystalGroup& gamma, std::size_t s);

/// H^2(F, M) through the inhomogeneous bar complex together with the order of
/// the automorphism induced by `op`.
struct H2Action {
    std::vector<Integer> torsion; ///< invariant factors > 1
    std::size_t free_rank = 0;
    std::size_t action_order = 0; ///< 0 when the cap was reached
    std::size_t group_order = 0;

    bool is_trivial() const { return torsion.empty() && free_rank == 0; }
    Integer cardinality() const;
};

/// `group` gives the multiplication table, `action[i]` the integral module
/// matrix of group[i], `op` an integral matrix commuting with the action.
H2Action h2_cohomology(const std::vector<RatMatrix>& group, const std::vector<RatMatrix>& action, const RatMatrix& op,
                       std::size_t order_cap = 10000);
/// Module = the defining representation of the group.
H2Action h2_cohomology(const std::vector<RatMatrix>& group, const RatMatrix& op, std::size_t order_cap = 10000);

struct LiftResult {
    CrystalGroup group;          ///< rebased so the lift fixes the origin
    AffineMap map;               ///< x -> A x after rebasing
    std::vector<RatVector> correction; ///< c(g) with c(g) = (I - A) u_g mod lattice
    RatVector fixed_point;       ///< in the coordinates of the input group
    AffineMap affine_before_rebase;
};

/// Extends A_m from the lattice to an automorphism of the pullback group, as
/// an affine map normalizing it, then rebases at a fixed point.
LiftResult lift_automorphism(const DiagonalPullback& pb, const RatMatrix& a_m);

bool orientability(const CrystalGroup& gamma);

struct AssemblyReport {
    std::size_t seed_dim = 0;
    std::size_t padded_seed_dim = 0; ///< m = k - 1
    std::size_t copies = 0;          ///< s
    std::size_t sigma = 0;
    std::size_t dimension = 0;
    std::size_t dimension_mod4 = 0;
    std::size_t codimension = 0;
    std::size_t s_times_m = 0; ///< recorded for comparison with external bounds
    bool orientable = false;
    bool valid = false;
    bool torsion_free = false;
    SpectralClass spectrum;
    RatMatrix a1;     ///< the codimension-one block after power replacement
    RatMatrix l1;     ///< the toral factor
    unsigned long a1_power = 1;
    H2Action h2;
};

struct AssembledExample {
    CrystalGroup group;
    AffineMap anosov;
    AssemblyReport report;
};

/// M = M_F x T^sigma with L = A x L1, codimension exactly k.
AssembledExample assemble_example(const CrystalGroup& seed, std::size_t k, std::size_t s);

} // namespace anosov
