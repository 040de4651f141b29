#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sq::grassmann {

/// Largest generator-pair count representable: 2k slots must fit a 32-bit mask.
inline constexpr int kMaxPairs = 16;

/// A monomial in the 2k odd generators. Slots 1..k hold zeta (or xi), slots
/// k+1..2k hold zbar (or eta). Stored as a bit mask so the index sequence is
/// ascending by construction.
class Blade {
 public:
  Blade(int k, std::uint32_t mask);

  static Blade unit(int k) { return Blade(k, 0); }
  static Blade top(int k);
  /// Generator slot `slot` (1-based, 1..2k).
  static Blade generator(int k, int slot);
  /// Throws unless `indices` is strictly ascending within 1..2k.
  static Blade from_indices(int k, const std::vector<int>& indices);

  int k() const noexcept { return k_; }
  std::uint32_t mask() const noexcept { return mask_; }
  int degree() const noexcept;
  bool contains(int slot) const noexcept { return (mask_ >> (slot - 1)) & 1u; }
  std::vector<int> indices() const;

  /// Only zeta slots occupied (no zbar factor).
  bool is_holomorphic() const noexcept;
  /// Number of zeta slots and zbar slots present, |P| and |Q|.
  int holomorphic_count() const noexcept;
  int antiholomorphic_count() const noexcept;

  Blade complement() const { return Blade(k_, full_mask(k_) & ~mask_); }

  static std::uint32_t full_mask(int k) {
    return k == kMaxPairs ? 0xffffffffu : ((1u << (2 * k)) - 1u);
  }

  friend bool operator==(const Blade& a, const Blade& b) { return a.k_ == b.k_ && a.mask_ == b.mask_; }
  friend bool operator<(const Blade& a, const Blade& b) {
    return a.k_ != b.k_ ? a.k_ < b.k_ : a.mask_ < b.mask_;
  }

 private:
  int k_;
  std::uint32_t mask_;
};

struct SignedBlade {
  int sign;  // +1 or -1
  Blade blade;
};

/// Product of two blades. Empty when they share a generator; otherwise the
/// sorted union with sign (-1)^(inversions of the concatenation).
/// Throws a dimension error when the blades live over different k.
std::optional<SignedBlade> blade_product(const Blade& a, const Blade& b);

}  // namespace sq::grassmann
