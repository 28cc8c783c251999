#pragma once

#include <optional>
#include <string>
#include <vector>

#include "endoscope/cyclo.hpp"

namespace endoscope {

// One verified identity: a name, its outcome, and the two sides when they are values.
struct IdentityCheck {
    std::string name;
    bool pass = false;
    std::optional<CycElem> lhs;
    std::optional<CycElem> rhs;
    std::string note;
};

inline IdentityCheck compare_values(std::string name, const CycElem& lhs, const CycElem& rhs) {
    IdentityCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.pass = (lhs == rhs);
    return c;
}

inline IdentityCheck boolean_check(std::string name, bool ok, std::string note = {}) {
    IdentityCheck c;
    c.name = std::move(name);
    c.pass = ok;
    c.note = std::move(note);
    return c;
}

inline bool all_pass(const std::vector<IdentityCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace endoscope
