#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "crlab/rational.hpp"

namespace crlab {

// One shared ring holds holomorphic source coordinates z_j, their conjugates,
// target coordinates w_j and conjugates, and the real coordinates u, s_l, t.
// The kind V is the dependent imaginary part of a graph coordinate; it is
// introduced only transiently while solving a graph relation and never appears
// in user-facing polynomials.
enum class VarKind : std::uint8_t { Z, ZBar, W, WBar, U, V, S, T };

struct Variable {
    VarKind kind{VarKind::Z};
    std::uint16_t index{0};  // 1-based for Z/ZBar/W/WBar/S, 0 for U/V/T

    friend auto operator<=>(const Variable&, const Variable&) = default;
};

inline Variable var_z(int j) { return {VarKind::Z, static_cast<std::uint16_t>(j)}; }
inline Variable var_zbar(int j) { return {VarKind::ZBar, static_cast<std::uint16_t>(j)}; }
inline Variable var_w(int j) { return {VarKind::W, static_cast<std::uint16_t>(j)}; }
inline Variable var_wbar(int j) { return {VarKind::WBar, static_cast<std::uint16_t>(j)}; }
inline Variable var_u() { return {VarKind::U, 0}; }
inline Variable var_v() { return {VarKind::V, 0}; }
inline Variable var_s(int l) { return {VarKind::S, static_cast<std::uint16_t>(l)}; }
inline Variable var_t() { return {VarKind::T, 0}; }

inline bool is_real_kind(VarKind k) {
    return k == VarKind::U || k == VarKind::V || k == VarKind::S || k == VarKind::T;
}

inline bool is_antiholomorphic(VarKind k) { return k == VarKind::ZBar || k == VarKind::WBar; }

inline Variable conjugate(Variable v) {
    switch (v.kind) {
        case VarKind::Z: return {VarKind::ZBar, v.index};
        case VarKind::ZBar: return {VarKind::Z, v.index};
        case VarKind::W: return {VarKind::WBar, v.index};
        case VarKind::WBar: return {VarKind::W, v.index};
        default: return v;
    }
}

std::string var_name(Variable v);

}  // namespace crlab
