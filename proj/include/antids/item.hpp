#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "antids/habitat.hpp"

namespace antids {

inline constexpr int kClassCount = 5;

// 1 Normal, 2 Probe, 3 DoS, 4 U2R, 5 R2L. Synthetic runs reuse the same
// five labels generically.
enum class ClassLabel : std::uint8_t { normal = 1, probe = 2, dos = 3, u2r = 4, r2l = 5 };

constexpr int to_int(ClassLabel c) noexcept { return static_cast<int>(c); }
// Throws ConfigError outside 1..5.
ClassLabel class_from_int(int value);
std::string_view class_name(ClassLabel c) noexcept;

// Markers carry the labels the k-NN vote uses; test items are classified.
enum class Role : std::uint8_t { marker, test };

std::string_view role_name(Role r) noexcept;
// Throws ConfigError for anything other than "marker" or "test".
Role role_from_string(std::string_view s);

struct Item {
    ItemId id{};
    std::vector<double> features;
    Role role = Role::test;
    std::optional<ClassLabel> true_class;
};

}  // namespace antids
