#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anosov {

enum class GromollStatement { EqualNext, Nonvanishing, OrderLowerBound };

/// A statement about the Gromoll group Gamma^n_{k+1}. Families whose indices
/// depend on a parameter keep the dependence as text.
struct GromollFact {
    std::string family;    ///< short identifier of the fact family
    std::string dimension; ///< n, possibly symbolic ("4m-1")
    std::string index;     ///< k+1, possibly symbolic ("2m-2")
    std::string condition; ///< range of validity
    GromollStatement statement = GromollStatement::Nonvanishing;
    std::optional<std::uint64_t> bound; ///< for OrderLowerBound
    std::string source;
};

std::vector<GromollFact> gromoll_facts();

/// The fact that applies to Gamma^n_{index}, if any. Only families whose
/// indices are explicit in n are matched; the v(m) family is never matched
/// because v(m) is not tabulated here.
std::optional<GromollFact> query_gromoll(std::uint64_t n, std::uint64_t index);

std::string to_string(GromollStatement s);

/// True when d does not divide q, the sufficient condition for M # Sigma not
/// being diffeomorphic to an infranilmanifold.
bool prop1_distinct(std::uint64_t d, std::uint64_t q);

/// The unique sigma in {2, 3, 4, 5} with s (k - 1) + sigma = 3 mod 4.
std::size_t dimension_congruence(std::size_t k, std::size_t s);

} // namespace anosov
