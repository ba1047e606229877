#pragma once

#include <string>
#include <vector>

#include "lepage/error.hpp"

namespace lepage {

// Variable roles in order of the global variable ordering:
// t < x^1..x^m < x'^1..x'^m < x''... < jet3 < jet4 < dummies < parameters.
// Jet4 never appears in user input; it exists so that intermediate
// total derivatives of third-order expressions are representable.
enum class Role : int {
    Time = 0,
    Position = 1,
    Velocity = 2,
    Acceleration = 3,
    Jet3 = 4,
    Jet4 = 5,
    Dummy = 6,
    Parameter = 7,
};

struct VarId {
    Role role = Role::Time;
    int index = 0;  // coordinate index (0-based); serial for Dummy/Parameter

    friend bool operator==(const VarId&, const VarId&) = default;
    friend auto operator<=>(const VarId&, const VarId&) = default;
};

inline bool is_jet(Role r) {
    return r == Role::Position || r == Role::Velocity || r == Role::Acceleration ||
           r == Role::Jet3 || r == Role::Jet4;
}

// Derivative order of a jet variable: x -> 0, x' -> 1, ...
inline int jet_role_order(Role r) {
    switch (r) {
        case Role::Position: return 0;
        case Role::Velocity: return 1;
        case Role::Acceleration: return 2;
        case Role::Jet3: return 3;
        case Role::Jet4: return 4;
        default: return -1;
    }
}

inline Role jet_role_of_order(int order) {
    switch (order) {
        case 0: return Role::Position;
        case 1: return Role::Velocity;
        case 2: return Role::Acceleration;
        case 3: return Role::Jet3;
        case 4: return Role::Jet4;
        default: throw OrderOverflow("jet order " + std::to_string(order) + " not representable");
    }
}

struct JetSpace {
    int m = 1;
    std::vector<std::string> coord_names;
    int max_order = 2;  // 1, 2 or 3

    JetSpace() : coord_names{"x"} {}

    JetSpace(std::vector<std::string> names, int order)
        : m(static_cast<int>(names.size())), coord_names(std::move(names)), max_order(order) {
        if (m < 1) throw ValidationError("JetSpace needs at least one coordinate");
        if (max_order < 1 || max_order > 3)
            throw ValidationError("JetSpace max_order must be 1, 2 or 3");
        for (int i = 0; i < m; ++i) {
            if (coord_names[i] == "t")
                throw ValidationError("coordinate name 't' is reserved for time");
            for (int j = i + 1; j < m; ++j)
                if (coord_names[i] == coord_names[j])
                    throw ValidationError("duplicate coordinate name '" + coord_names[i] + "'");
        }
    }

    VarId time() const { return {Role::Time, 0}; }
    VarId pos(int i) const { return jet_var(0, i); }
    VarId vel(int i) const { return jet_var(1, i); }
    VarId acc(int i) const { return jet_var(2, i); }

    VarId jet_var(int order, int i) const {
        if (i < 0 || i >= m) throw ValidationError("coordinate index out of range");
        return {jet_role_of_order(order), i};
    }

    std::string var_name(VarId v) const {
        switch (v.role) {
            case Role::Time: return "t";
            case Role::Dummy: return "#nu" + std::to_string(v.index);
            case Role::Parameter: return "#s" + std::to_string(v.index);
            default: break;
        }
        std::string base =
            (v.index >= 0 && v.index < m) ? coord_names[v.index] : "?" + std::to_string(v.index);
        return base + std::string(static_cast<std::size_t>(jet_role_order(v.role)), '\'');
    }
};

}  // namespace lepage
