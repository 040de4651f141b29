#pragma once

#include <cstdint>
#include <vector>

namespace sq {

/// Character label of Z^n x R^m: exact integers on the torus, reals on the
/// flat factor.
struct Weight {
  std::vector<std::int64_t> torus;
  std::vector<double> flat;

  int n() const { return static_cast<int>(torus.size()); }
  int m() const { return static_cast<int>(flat.size()); }

  /// Torus entries followed by flat entries, matching x = (x_torus, x_flat).
  std::vector<double> as_vector() const {
    std::vector<double> v(torus.begin(), torus.end());
    v.insert(v.end(), flat.begin(), flat.end());
    return v;
  }

  friend bool operator==(const Weight&, const Weight&) = default;
};

}  // namespace sq
