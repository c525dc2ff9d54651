#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

// Structural misuse: mismatched shapes, unknown ids, malformed input.
struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mathematical precondition violated by the data itself (MC equation fails,
// morphism not closed where required, and so on).
struct contract_error : std::runtime_error {
    explicit contract_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require_shape(bool ok, const std::string& msg) {
    if (!ok) throw shape_error(msg);
}

inline void require_contract(bool ok, const std::string& msg) {
    if (!ok) throw contract_error(msg);
}

// Internal consistency check: a constructed answer failed its own exact
// verification. Always a bug in this library, never in user data.
inline void internal_check(bool ok, const std::string& msg) {
    if (!ok) throw std::logic_error("internal check failed: " + msg);
}

} // namespace twistlab
