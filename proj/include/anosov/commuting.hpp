#pragma once

#include "anosov/crystal.hpp"

#include <optional>
#include <string>

namespace anosov {

struct PowerReduction {
    unsigned long exponent = 1;
    AffineMap power; ///< L^exponent
};

/// Smallest p such that conjugation by L^p is the identity on the holonomy
/// and the linear part of L^p is the identity modulo q (in lattice
/// coordinates). Throws if L does not normalize gamma.
PowerReduction reduce_power(const CrystalGroup& gamma, const AffineMap& l, unsigned long cap = 1000000);

/// theta(g) = (s - 1) u_g, integral when gamma is normalized and s = 1 mod q.
CrossedHom build_theta(const CrystalGroup& gamma, const Integer& s);

struct ExpandingResult {
    AffineMap map; ///< x -> s x + v
    RatVector v;
    CrossedHom theta;
    std::string method; ///< "averaging" or "smith"
};

/// E(x) = s x + v with E gamma E^-1 contained in gamma, verified exactly.
ExpandingResult find_expanding(const CrystalGroup& gamma, const Integer& s);

struct AnosovNormalForm {
    AffineMap map; ///< x -> A x + w
    RatVector w;
    CrossedHom omega;
};

/// Requires A g = g A on the holonomy and A = I mod q. Builds omega from the
/// conjugation action of L, averages it to w, and checks that conjugation by
/// Ax + w agrees with conjugation by L on every representative.
AnosovNormalForm build_omega_and_anosov(const CrystalGroup& gamma, const AffineMap& l);

struct QFold {
    AffineMap expanding; ///< E^q = s^q x + v_hat
    AffineMap anosov;    ///< (Ax + w)^q = A^q x + w_hat
    RatVector v_hat;
    RatVector w_hat;
    RatVector fixed_point; ///< the origin, fixed modulo the lattice by both
};

QFold qfold_and_fix(const AffineMap& e, const AffineMap& a, std::size_t q);

/// T(x) = x + a with a = (I - A^q)^-1 (u_hat - w_hat); checks T A^q T^-1 = L^q
/// and that T commutes with every element of gamma.
AffineMap claim4_conjugacy(const CrystalGroup& gamma, const AffineMap& l_q, const AffineMap& a_q);

struct CommutingPair {
    Integer s;
    std::size_t q = 1;
    unsigned long reduction_exponent = 1; ///< p
    unsigned long exponent = 1;           ///< p * q, the power of L that commutes

    AffineMap frame;    ///< original coordinates -> normalized coordinates
    RatVector u0;
    CrystalGroup normalized;

    RatVector v;
    RatVector w;
    RatVector v_hat;
    RatVector w_hat;
    RatVector u_hat;
    RatVector a;
    std::string expanding_method;

    AffineMap anosov_power; ///< L^(pq) in normalized coordinates
    AffineMap expanding;    ///< T E^q T^-1 in normalized coordinates
    AffineMap conjugacy;    ///< T
    RatVector fixed_point;  ///< T(0) = a
    /// expanding * anosov_power = (translation by this) * anosov_power * expanding
    RatVector commutator_translation;

    AffineMap anosov_power_original;
    AffineMap expanding_original;
    RatVector fixed_point_original;
};

/// Smallest integer s > 1 with s = 1 mod q.
Integer default_scale(std::size_t q);

/// Averaging normalization, power reduction, E, the normalized Anosov map, the
/// q-fold powers and the final conjugacy, each verified exactly. Failures
/// raise VerificationError labelled with the stage.
CommutingPair prop3_pipeline(const CrystalGroup& gamma, const AffineMap& l, std::optional<Integer> s = std::nullopt);

/// Re-checks every identity of a pair against its normalized group. Returns
/// an empty string on success, otherwise a description of the first failure.
std::string check_commuting_pair(const CommutingPair& pair);

} // namespace anosov
