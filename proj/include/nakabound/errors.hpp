#pragma once

#include <stdexcept>
#include <string>

namespace nakabound {

// Parameters fall outside the region where a chain or walk is positive recurrent.
class RegimeViolation : public std::domain_error {
public:
    explicit RegimeViolation(const std::string& what) : std::domain_error(what) {}
};

class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Too many simulated races hit the step cap before resolving.
class HorizonTooSmall : public std::runtime_error {
public:
    explicit HorizonTooSmall(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nakabound
