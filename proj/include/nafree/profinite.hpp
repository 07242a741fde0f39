#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nafree/boolean_free.hpp"
#include "nafree/finite_group.hpp"
#include "nafree/free_group.hpp"
#include "nafree/partition.hpp"

namespace nafree {

using Mask = std::uint64_t;

/// All subsets of a finite ground set (every subset is clopen), as bitmasks under symmetric difference.
class ClopenAlgebra {
public:
  static constexpr std::size_t kDefaultCap = 12;

  explicit ClopenAlgebra(std::size_t ground, std::size_t cap = kDefaultCap) : ground_(ground) {
    if (ground > cap) throw InputError("clopen algebra over " + std::to_string(ground) + " points exceeds cap " + std::to_string(cap));
  }

  std::size_t ground_size() const { return ground_; }
  std::size_t order() const { return std::size_t{1} << ground_; }
  static Mask add(Mask a, Mask b) { return a ^ b; }

private:
  std::size_t ground_;
};

/// chi_S(f) = sum over x in S of f(x) mod 2.
struct Character {
  Mask set = 0;

  int operator()(Mask f) const { return std::popcount(set & f) & 1; }
  friend Character operator+(Character a, Character b) { return {a.set ^ b.set}; }
  friend bool operator==(const Character&, const Character&) = default;
};

/*
 * Every homomorphism V -> Z2, listed as chi_S in mask order. Each chi_S is
 * checked to be additive, pairwise distinct as functions, and the family
 * closed under pointwise addition with chi_S + chi_T = chi_{S xor T}.
 */
inline std::vector<Character> dual_group(const ClopenAlgebra& v) {
  const std::size_t n = v.order();
  std::vector<Character> out;
  out.reserve(n);
  for (Mask s = 0; s < n; ++s) out.push_back({s});
  if (v.ground_size() <= 6) {
    for (const auto& c : out)
      for (Mask f = 0; f < n; ++f)
        for (Mask g = 0; g < n; ++g)
          if (c(f ^ g) != (c(f) ^ c(g))) throw std::logic_error("character is not additive");
    for (Mask s = 0; s < n; ++s)
      for (Mask t = 0; t < n; ++t)
        for (Mask f = 0; f < n; ++f)
          if ((out[s] + out[t])(f) != (out[s](f) ^ out[t](f)) || (out[s] + out[t]) != out[s ^ t])
            throw std::logic_error("character sum mismatch");
  }
  return out;
}

/// delta_x(f) = f(x), i.e. chi_{x}.
inline Character evaluation_delta(const ClopenAlgebra& v, PointId x) {
  if (x < 0 || static_cast<std::size_t>(x) >= v.ground_size()) throw InputError("point not in ground set");
  return {Mask{1} << x};
}

/// A map V* -> G tabulated on characters chi_S, indexed by S.
using DualHomomorphism = std::vector<Element>;

/// nu(chi_S) = sum over x in S of f(x); the unique extension with nu(delta_x) = f(x).
inline DualHomomorphism universal_extension(const ClopenAlgebra& v, const std::vector<Element>& f, const FiniteGroupTable& g) {
  if (!g.is_boolean()) throw InputError("target group is not Boolean");
  if (f.size() != v.ground_size()) throw InputError("map must assign an element to every point");
  for (Element x : f)
    if (x < 0 || static_cast<std::size_t>(x) >= g.order()) throw InputError("map value outside the group");
  DualHomomorphism nu(v.order(), g.identity());
  for (Mask s = 1; s < v.order(); ++s) {
    const int low = std::countr_zero(s);
    nu[s] = g.mul(nu[s & (s - 1)], f[low]);
  }
  return nu;
}

inline bool is_dual_homomorphism(const DualHomomorphism& nu, const FiniteGroupTable& g) {
  for (Mask s = 0; s < nu.size(); ++s)
    for (Mask t = 0; t < nu.size(); ++t)
      if (nu[s ^ t] != g.mul(nu[s], nu[t])) return false;
  return true;
}

/*
 * Every homomorphism V* -> G, found by assigning values character by
 * character and discarding any partial table that already breaks
 * nu(S xor T) = nu(S) nu(T).
 */
inline std::vector<DualHomomorphism> dual_homomorphisms(const ClopenAlgebra& v, const FiniteGroupTable& g) {
  const std::size_t n = v.order();
  std::vector<DualHomomorphism> out;
  DualHomomorphism nu(n, -1);
  auto rec = [&](auto&& self, Mask s) -> void {
    if (s == n) {
      if (is_dual_homomorphism(nu, g)) out.push_back(nu);
      return;
    }
    for (std::size_t val = 0; val < g.order(); ++val) {
      nu[s] = static_cast<Element>(val);
      bool ok = true;
      for (Mask t = 0; t <= s && ok; ++t) {
        const Mask u = s ^ t;
        if (u <= s) ok = nu[s] == g.mul(nu[t], nu[u]);
      }
      if (ok) self(self, s + 1);
    }
    nu[s] = -1;
  };
  rec(rec, 0);
  return out;
}

/*
 * Homomorphism F(X/eps) -> Q determined by generator images; pulled back
 * along the quotient map it gives a finite-index normal subgroup of F(X)
 * containing the kernel of F(X) -> F(X/eps).
 */
struct QuotientHom {
  std::vector<Element> images;  // one per block
  std::size_t index = 1;         // [F(X) : kernel] = size of the image subgroup

  Element evaluate(const FreeWord& block_word, const FiniteGroupTable& q) const {
    Element acc = q.identity();
    for (const auto& l : block_word.letters()) acc = q.mul(acc, l.exp > 0 ? images.at(l.gen) : q.inv(images.at(l.gen)));
    return acc;
  }
};

struct LocalBase {
  Partition eps;
  FiniteGroupTable target;
  std::vector<QuotientHom> homs;

  /// w lies in the kernel of the pulled-back homomorphism `h`.
  bool in_kernel(std::size_t h, const FreeWord& w) const {
    return homs.at(h).evaluate(quotient_hom(w, eps), target) == target.identity();
  }
};

inline constexpr std::uint64_t kMaxLocalBaseHoms = 1U << 16;

inline LocalBase local_base_spro(const Partition& eps, const FiniteGroupTable& q, std::uint64_t cap = kMaxLocalBaseHoms) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < eps.block_count(); ++i) {
    count *= q.order();
    if (count > cap) throw InputError("|Q|^|X/eps| exceeds the enumeration cap");
  }
  LocalBase out{eps, q, {}};
  std::vector<Element> img(eps.block_count(), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t c = k;
    for (auto& e : img) {
      e = static_cast<Element>(c % q.order());
      c /= q.order();
    }
    auto sub = q.generated_subgroup(img);
    std::size_t index = 0;
    for (bool b : sub) index += b ? 1 : 0;
    out.homs.push_back({img, index});
  }
  return out;
}

/*
 * Boolean groups B(X/eps_i) along a refining chain with bonds
 * B(X/eps_{i+1}) -> B(X/eps_i) sending each finer block to the coarser
 * block containing it.
 */
class InverseSystem {
public:
  explicit InverseSystem(PartitionChain chain) : chain_(std::move(chain)) {
    for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
      const auto& coarse = chain_.level(i).partition;
      const auto& fine = chain_.level(i + 1).partition;
      if (!fine.refines(coarse)) throw InputError("chain does not refine at level " + std::to_string(i + 1));
      std::vector<int> map(fine.block_count());
      for (std::size_t b = 0; b < fine.block_count(); ++b) map[b] = coarse.block_of(fine.block(b).front());
      bonds_.push_back(std::move(map));
    }
  }

  std::size_t depth() const { return chain_.size(); }
  const PartitionChain& chain() const { return chain_; }
  /// Generators of level i are its block indices.
  std::size_t generators(std::size_t level) const { return chain_.level(level).partition.block_count(); }

  /// Bond from level `level + 1` to level `level`.
  BooleanWord bond(std::size_t level, const BooleanWord& u) const {
    const auto& map = bonds_.at(level);
    std::vector<PointId> img;
    for (PointId b : u.points()) {
      if (b < 0 || static_cast<std::size_t>(b) >= map.size()) throw InputError("element outside the level's generators");
      img.push_back(map[b]);
    }
    return BooleanWord::sum_of(std::move(img));
  }

  /// Direct map from level `from` to a coarser level `to`, via the block containment.
  BooleanWord skip_bond(std::size_t from, std::size_t to, const BooleanWord& u) const {
    if (to > from) throw InputError("skip bond must go to a coarser level");
    const auto& fine = chain_.level(from).partition;
    const auto& coarse = chain_.level(to).partition;
    std::vector<PointId> img;
    for (PointId b : u.points()) img.push_back(coarse.block_of(fine.block(b).front()));
    return BooleanWord::sum_of(std::move(img));
  }

  /// thread[i] lives at level i and bond(thread[i+1]) = thread[i].
  bool thread_check(const std::vector<BooleanWord>& thread) const {
    if (thread.size() != depth()) return false;
    for (std::size_t i = 0; i < thread.size(); ++i)
      for (PointId b : thread[i].points())
        if (b < 0 || static_cast<std::size_t>(b) >= generators(i)) return false;
    for (std::size_t i = 0; i + 1 < thread.size(); ++i)
      if (bond(i, thread[i + 1]) != thread[i]) return false;
    return true;
  }

private:
  PartitionChain chain_;
  std::vector<std::vector<int>> bonds_;
};

inline InverseSystem inverse_system_build(const PartitionChain& chain) { return InverseSystem(chain); }

}  // namespace nafree
