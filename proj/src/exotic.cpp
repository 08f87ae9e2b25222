#include "anosov/exotic.hpp"

#include <stdexcept>

namespace anosov {

std::vector<GromollFact> gromoll_facts()
{
    return {
        {"cerf", "n", "1,2", "n >= 6", GromollStatement::EqualNext, std::nullopt,
         "Gamma^n_1 = Gamma^n_2 for n >= 6"},
        {"abk-4m-1", "4m-1", "2m-2", "m >= 4", GromollStatement::Nonvanishing, std::nullopt,
         "Gamma^{4m-1}_{2m-2} != 0 for m >= 4"},
        {"abk-4m+1", "4m+1", "2v(m)", "m not of the form 2^l - 1", GromollStatement::Nonvanishing, std::nullopt,
         "Gamma^{4m+1}_{2v(m)} != 0, v(m) = maximal number of independent vector fields on S^{2m+1}"},
        {"order-21-6", "21", "6", "", GromollStatement::OrderLowerBound, std::uint64_t{508},
         "|Gamma^21_6| >= 508"},
    };
}

std::optional<GromollFact> query_gromoll(std::uint64_t n, std::uint64_t index)
{
    const auto facts = gromoll_facts();
    if (n == 21 && index == 6) {
        return facts[3];
    }
    if (n >= 6 && (index == 1 || index == 2)) {
        return facts[0];
    }
    if (n % 4 == 3) {
        const std::uint64_t m = (n + 1) / 4;
        if (m >= 4 && index == 2 * m - 2) {
            return facts[1];
        }
    }
    return std::nullopt;
}

std::string to_string(GromollStatement s)
{
    switch (s) {
    case GromollStatement::EqualNext: return "EQUAL_NEXT";
    case GromollStatement::Nonvanishing: return "NONVANISHING";
    case GromollStatement::OrderLowerBound: return "ORDER_LOWER_BOUND";
    }
    return "UNKNOWN";
}

bool prop1_distinct(std::uint64_t d, std::uint64_t q)
{
    if (d == 0 || q == 0) {
        throw std::invalid_argument("prop1_distinct: d and q must be positive");
    }
    return q % d != 0;
}

std::size_t dimension_congruence(std::size_t k, std::size_t s)
{
    if (k < 2 || s < 1) {
        throw std::invalid_argument("dimension_congruence: needs k >= 2 and s >= 1");
    }
    const std::size_t base = s * (k - 1);
    for (std::size_t sigma = 2; sigma <= 5; ++sigma) {
        if ((base + sigma) % 4 == 3) {
            return sigma;
        }
    }
    throw std::logic_error("dimension_congruence: no residue found");
}

} // namespace anosov
