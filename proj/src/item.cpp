#include "antids/item.hpp"

#include <string>

#include "antids/errors.hpp"

namespace antids {

ClassLabel class_from_int(int value) {
    if (value < 1 || value > kClassCount) throw ConfigError("class label must be in 1..5, got " + std::to_string(value));
    return static_cast<ClassLabel>(value);
}

std::string_view class_name(ClassLabel c) noexcept {
    switch (c) {
        case ClassLabel::normal: return "Normal";
        case ClassLabel::probe: return "Probe";
        case ClassLabel::dos: return "DoS";
        case ClassLabel::u2r: return "U2R";
        case ClassLabel::r2l: return "R2L";
    }
    return "?";
}

std::string_view role_name(Role r) noexcept { return r == Role::marker ? "marker" : "test"; }

Role role_from_string(std::string_view s) {
    if (s == "marker") return Role::marker;
    if (s == "test") return Role::test;
    throw ConfigError("unknown role '" + std::string(s) + "'");
}

}  // namespace antids
