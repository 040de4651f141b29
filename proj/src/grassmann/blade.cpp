#include "grassmann/blade.hpp"

#include "common/error.hpp"

#include <bit>
#include <string>

namespace sq::grassmann {

namespace {

void check_k(int k) {
  if (k < 0 || k > kMaxPairs)
    throw Error(ErrorKind::Resource, "generator-pair count " + std::to_string(k) + " outside [0, 16]");
}

}  // namespace

Blade::Blade(int k, std::uint32_t mask) : k_(k), mask_(mask) {
  check_k(k);
  if ((mask & ~full_mask(k)) != 0)
    throw Error(ErrorKind::Dimension, "blade mask uses slots beyond 2k");
}

Blade Blade::top(int k) {
  check_k(k);
  return Blade(k, full_mask(k));
}

Blade Blade::generator(int k, int slot) {
  if (slot < 1 || slot > 2 * k)
    throw Error(ErrorKind::Dimension, "generator slot " + std::to_string(slot) + " outside [1, 2k]");
  return Blade(k, 1u << (slot - 1));
}

Blade Blade::from_indices(int k, const std::vector<int>& indices) {
  std::uint32_t mask = 0;
  int prev = 0;
  for (int idx : indices) {
    if (idx <= prev)
      throw Error(ErrorKind::InvalidArgument, "blade indices must be strictly ascending");
    if (idx > 2 * k)
      throw Error(ErrorKind::Dimension, "blade index " + std::to_string(idx) + " outside [1, 2k]");
    mask |= 1u << (idx - 1);
    prev = idx;
  }
  return Blade(k, mask);
}

int Blade::degree() const noexcept { return std::popcount(mask_); }

std::vector<int> Blade::indices() const {
  std::vector<int> out;
  for (int s = 1; s <= 2 * k_; ++s)
    if (contains(s)) out.push_back(s);
  return out;
}

bool Blade::is_holomorphic() const noexcept { return antiholomorphic_count() == 0; }

int Blade::holomorphic_count() const noexcept {
  std::uint32_t low = k_ == kMaxPairs ? 0xffffu : ((1u << k_) - 1u);
  return std::popcount(mask_ & low);
}

int Blade::antiholomorphic_count() const noexcept { return degree() - holomorphic_count(); }

std::optional<SignedBlade> blade_product(const Blade& a, const Blade& b) {
  if (a.k() != b.k())
    throw Error(ErrorKind::Dimension, "blade product over different generator counts");
  if ((a.mask() & b.mask()) != 0) return std::nullopt;
  // Each generator of b must move left past every generator of a with a
  // larger slot index.
  int inversions = 0;
  std::uint32_t rest = b.mask();
  while (rest != 0) {
    int j = std::countr_zero(rest);
    rest &= rest - 1;
    std::uint32_t above = j == 31 ? 0u : (a.mask() >> (j + 1));
    inversions += std::popcount(above);
  }
  return SignedBlade{(inversions % 2 == 0) ? 1 : -1, Blade(a.k(), a.mask() | b.mask())};
}

}  // namespace sq::grassmann
