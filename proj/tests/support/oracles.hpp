#pragma once

// Slow, independent reference computations used only by tests.

#include "qr/bitset.hpp"
#include "qr/grp.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

/// Normal subgroups as unions of conjugacy classes, by checking every union
/// that contains the identity class. Classes computed naively here too.
inline std::vector<qr::Bitset> normal_subgroups_by_class_unions(const qr::grp::Group& g) {
  const std::size_t n = g.order();
  std::vector<std::vector<qr::grp::Id>> classes;
  std::vector<int> seen(n, 0);
  std::size_t identity_class = 0;
  for (qr::grp::Id x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::vector<qr::grp::Id> cls;
    for (qr::grp::Id y = 0; y < n; ++y) {
      qr::grp::Id c = g.mul(g.mul(y, x), g.inv(y));
      if (!seen[c]) {
        seen[c] = 1;
        cls.push_back(c);
      }
    }
    if (x == g.identity()) identity_class = classes.size();
    classes.push_back(cls);
  }
  std::vector<qr::Bitset> out;
  const std::size_t k = classes.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    if (!((mask >> identity_class) & 1)) continue;
    qr::Bitset m(n);
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1)
        for (auto x : classes[i]) m.set(x);
    if (n % m.count()) continue;
    bool closed = true;
    for (qr::grp::Id a = 0; a < n && closed; ++a) {
      if (!m.test(a)) continue;
      for (qr::grp::Id b = 0; b < n; ++b)
        if (m.test(b) && !m.test(g.mul(a, b))) {
          closed = false;
          break;
        }
    }
    if (closed) out.push_back(m);
  }
  return out;
}

/// 2×2 matrices over Z/p with determinant one, counted directly.
inline std::uint64_t sl2_count_prime(std::uint64_t p) {
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t c = 0; c < p; ++c)
        for (std::uint64_t d = 0; d < p; ++d)
          if ((a * d + p * p - b * c) % p == 1) ++count;
  return count;
}

}  // namespace oracle
