#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

// Precondition violated by caller-supplied data.
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure ran out of budget before meeting its tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double partial, double achieved)
        : std::runtime_error(what), partial_value(partial), achieved_error(achieved) {}
    double partial_value;
    double achieved_error;
};

namespace detail {
inline void require(bool ok, const char* msg) {
    if (!ok) throw domain_error(msg);
}
inline void require(bool ok, const std::string& msg) {
    if (!ok) throw domain_error(msg);
}
}  // namespace detail

}  // namespace sobolev
