#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

/// Raised when an identity that the construction guarantees fails to hold.
/// The stage names the step of the pipeline that produced it.
class VerificationError : public std::runtime_error {
public:
    VerificationError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage))
    {
    }

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace anosov
