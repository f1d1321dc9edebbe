#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace linkinfer {

/// Opaque user identifier as it appears in the input files.
enum class UserId : std::uint64_t {};

constexpr std::uint64_t raw(UserId u) noexcept { return static_cast<std::uint64_t>(u); }

/// Unordered pair of distinct users, stored with first < second.
struct UserPair {
  UserId first{};
  UserId second{};

  /// Canonicalizes the order; throws std::invalid_argument on a self pair.
  static UserPair of(UserId a, UserId b);

  friend auto operator<=>(const UserPair&, const UserPair&) = default;
};

/// The five post components an adversary can draw on.
enum class Modality : std::uint8_t { Hashtag = 0, Text = 1, Image = 2, Location = 3, Network = 4 };

inline constexpr std::size_t kModalityCount = 5;
inline constexpr std::array<Modality, kModalityCount> kAllModalities{
    Modality::Hashtag, Modality::Text, Modality::Image, Modality::Location, Modality::Network};

constexpr std::size_t index_of(Modality m) noexcept { return static_cast<std::size_t>(m); }
char modality_letter(Modality m) noexcept;
std::string_view modality_name(Modality m) noexcept;
/// Accepts H, T, I, L, E (case-insensitive); throws std::invalid_argument otherwise.
Modality modality_from_letter(char c);

/// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace linkinfer
