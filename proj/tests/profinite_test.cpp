#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nafree/profinite.hpp"
#include "support/oracles.hpp"

using namespace nafree;

TEST(DualGroup, SizesAndZero) {
  EXPECT_EQ(dual_group(ClopenAlgebra(1)).size(), 2u);
  auto d3 = dual_group(ClopenAlgebra(3));
  EXPECT_EQ(d3.size(), 8u);
  for (Mask f = 0; f < 8; ++f) EXPECT_EQ(d3[0](f), 0);
  EXPECT_THROW(ClopenAlgebra(13), InputError);
  EXPECT_EQ(dual_group(ClopenAlgebra(12)).size(), 4096u);
}

TEST(DualGroup, EveryAdditiveMapIsACharacter) {
  // all functions V -> Z2 for |X| = 3, filtered by additivity
  const ClopenAlgebra v(3);
  auto chars = dual_group(v);
  std::size_t found = 0;
  for (unsigned table = 0; table < (1U << 8); ++table) {
    auto f = [&](Mask m) { return static_cast<int>((table >> m) & 1U); };
    bool additive = true;
    for (Mask a = 0; a < 8; ++a)
      for (Mask b = 0; b < 8; ++b) additive = additive && f(a ^ b) == (f(a) ^ f(b));
    if (!additive) continue;
    ++found;
    bool matched = false;
    for (const auto& c : chars) {
      bool same = true;
      for (Mask m = 0; m < 8; ++m) same = same && c(m) == f(m);
      matched = matched || same;
    }
    EXPECT_TRUE(matched);
  }
  EXPECT_EQ(found, chars.size());
}

TEST(EvaluationDelta, Examples) {
  const ClopenAlgebra v(3);
  auto da = evaluation_delta(v, 0);
  EXPECT_EQ(da(Mask{1}), 1);
  EXPECT_EQ(da(Mask{2}), 0);
  EXPECT_NE(evaluation_delta(v, 0), evaluation_delta(v, 1));
  EXPECT_EQ(evaluation_delta(v, 0) + evaluation_delta(v, 2), Character{0b101});
  EXPECT_THROW(evaluation_delta(v, 3), InputError);

  // sums of deltas reach every character
  std::vector<bool> reached(8, false);
  for (Mask s = 0; s < 8; ++s) {
    Character c{0};
    for (PointId x = 0; x < 3; ++x)
      if ((s >> x) & 1U) c = c + evaluation_delta(v, x);
    reached[c.set] = true;
  }
  for (bool b : reached) EXPECT_TRUE(b);
}

TEST(UniversalExtension, Examples) {
  auto z2 = FiniteGroupTable::cyclic(2);
  const ClopenAlgebra v(2);
  auto trivial = universal_extension(v, {0, 0}, z2);
  for (auto e : trivial) EXPECT_EQ(e, 0);
  auto both = universal_extension(v, {1, 1}, z2);
  EXPECT_EQ(both[0b11], 0);
  EXPECT_EQ(both[0b01], 1);
  EXPECT_THROW(universal_extension(v, {1, 1}, FiniteGroupTable::cyclic(4)), InputError);
  EXPECT_THROW(universal_extension(v, {1}, z2), InputError);

  // f = delta into V* itself (V* of two points is Z2^2 in mask order)
  auto vstar = FiniteGroupTable::elementary_abelian_2(2);
  auto id = universal_extension(v, {0b01, 0b10}, vstar);
  for (Mask s = 0; s < 4; ++s) EXPECT_EQ(id[s], static_cast<Element>(s));
}

TEST(UniversalExtension, UniqueHomomorphismExtendingF) {
  for (std::size_t k : {1, 2}) {
    auto g = FiniteGroupTable::elementary_abelian_2(k);
    for (std::size_t n = 1; n <= 3; ++n) {
      const ClopenAlgebra v(n);
      auto homs = dual_homomorphisms(v, g);
      EXPECT_EQ(homs.size(), std::size_t{1} << (n * k));
      std::size_t maps = 1;
      for (std::size_t i = 0; i < n; ++i) maps *= g.order();
      for (std::size_t code = 0; code < maps; ++code) {
        std::vector<Element> f(n);
        std::size_t c = code;
        for (auto& e : f) {
          e = static_cast<Element>(c % g.order());
          c /= g.order();
        }
        auto nu = universal_extension(v, f, g);
        EXPECT_TRUE(is_dual_homomorphism(nu, g));
        for (std::size_t x = 0; x < n; ++x) EXPECT_EQ(nu[evaluation_delta(v, static_cast<PointId>(x)).set], f[x]);
        std::size_t agreeing = 0;
        for (const auto& h : homs) {
          bool same = true;
          for (std::size_t x = 0; x < n; ++x) same = same && h[Mask{1} << x] == f[x];
          if (same) {
            ++agreeing;
            EXPECT_EQ(h, nu);
          }
        }
        EXPECT_EQ(agreeing, 1u);
      }
    }
  }
}

TEST(DualHomomorphisms, NonBooleanTargetOnlyHitsTheTwoTorsion) {
  // Z4 has a single element of order 2, so V* -> Z4 lands in {0, 2}
  auto homs = dual_homomorphisms(ClopenAlgebra(2), FiniteGroupTable::cyclic(4));
  EXPECT_EQ(homs.size(), 4u);
  for (const auto& h : homs)
    for (auto e : h) EXPECT_TRUE(e == 0 || e == 2);
}

TEST(LocalBase, Examples) {
  Partition eps(3, {{0, 1}, {2}});
  auto base = local_base_spro(eps, FiniteGroupTable::cyclic(2));
  EXPECT_EQ(base.homs.size(), 4u);
  EXPECT_EQ(base.homs[0].index, 1u);
  const FreeWord in{Letter{0, 1}, Letter{1, -1}};
  const FreeWord conj{Letter{2, 1}, Letter{0, 1}, Letter{1, -1}, Letter{2, -1}};
  const FreeWord out{Letter{0, 1}, Letter{2, -1}};
  for (std::size_t h = 0; h < base.homs.size(); ++h) {
    EXPECT_TRUE(base.in_kernel(h, in));
    EXPECT_TRUE(base.in_kernel(h, conj));
    EXPECT_TRUE(base.in_kernel(h, FreeWord{}));
  }
  EXPECT_FALSE(base.in_kernel(1, out));
  EXPECT_THROW(local_base_spro(Partition::singletons(5), FiniteGroupTable::symmetric(3), 1000), InputError);
}

TEST(LocalBase, KernelsContainEpsTildeAndHaveFiniteIndex) {
  auto s3 = FiniteGroupTable::symmetric(3);
  for (const auto& eps : oracle::all_partitions(3)) {
    auto base = local_base_spro(eps, s3);
    std::size_t bound = 1;
    for (std::size_t i = 0; i < eps.block_count(); ++i) bound *= s3.order();
    EXPECT_EQ(base.homs.size(), bound);
    for (std::size_t h = 0; h < base.homs.size(); ++h) {
      EXPECT_EQ(s3.order() % base.homs[h].index, 0u);
      for (const auto& w : all_reduced_words(3, 3))
        if (eps_tilde_membership(w, eps)) EXPECT_TRUE(base.in_kernel(h, w));
    }
  }
}

TEST(LocalBase, KernelIndexMatchesCosetCount) {
  auto z3 = FiniteGroupTable::cyclic(3);
  Partition eps = Partition::singletons(2);
  auto base = local_base_spro(eps, z3);
  for (std::size_t h = 0; h < base.homs.size(); ++h) {
    std::set<Element> images;
    for (const auto& w : all_reduced_words(2, 3)) images.insert(base.homs[h].evaluate(quotient_hom(w, eps), z3));
    EXPECT_EQ(images.size(), base.homs[h].index);
  }
}

TEST(InverseSystem, ConstantChainHasIdentityBonds) {
  PartitionChain chain({{Rational(2), Partition(3, {{0, 1}, {2}})}, {Rational(1), Partition(3, {{0, 1}, {2}})}});
  InverseSystem sys(chain);
  for (const auto& u : all_boolean_words(2)) {
    EXPECT_EQ(sys.bond(0, u), u);
    EXPECT_TRUE(sys.thread_check({u, u}));
  }
}

TEST(InverseSystem, MergingBlocks) {
  // level 0: {a,b,c}; level 1: {a,b},{c}
  PartitionChain chain({{Rational(2), Partition::whole(3)}, {Rational(1), Partition(3, {{0, 1}, {2}})}});
  auto sys = inverse_system_build(chain);
  EXPECT_EQ(sys.bond(0, BooleanWord::of({0})), BooleanWord::of({0}));
  EXPECT_EQ(sys.bond(0, BooleanWord::of({0, 1})), BooleanWord{});
  EXPECT_TRUE(sys.thread_check({BooleanWord::of({0}), BooleanWord::of({0})}));
  EXPECT_TRUE(sys.thread_check({BooleanWord{}, BooleanWord::of({0, 1})}));
  EXPECT_FALSE(sys.thread_check({BooleanWord{}, BooleanWord::of({1})}));
  EXPECT_FALSE(sys.thread_check({BooleanWord::of({0})}));
  EXPECT_FALSE(sys.thread_check({BooleanWord::of({1}), BooleanWord::of({0})}));
}

TEST(InverseSystem, SkipBondsComposeAndBondsAreHomomorphisms) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + t % 5;
    auto chain = ball_chain(UltraMetricSpace(oracle::random_ultrametric(rng, n, oracle::standard_values())));
    InverseSystem sys(chain);
    if (sys.depth() > 5) continue;
    for (std::size_t from = 0; from < sys.depth(); ++from) {
      auto words = all_boolean_words(sys.generators(from));
      for (const auto& u : words) {
        auto step = u;
        for (std::size_t to = from; to-- > 0;) {
          step = sys.bond(to, step);
          EXPECT_EQ(sys.skip_bond(from, to, u), step);
        }
        if (from > 0)
          for (const auto& v : words) EXPECT_EQ(sys.bond(from - 1, u + v), sys.bond(from - 1, u) + sys.bond(from - 1, v));
      }
      if (from > 0) {
        // surjective: every coarse generator is hit
        std::set<BooleanWord> img;
        for (const auto& u : words) img.insert(sys.bond(from - 1, u));
        EXPECT_EQ(img.size(), std::size_t{1} << sys.generators(from - 1));
      }
    }
  }
  std::vector<ChainLevel> crossing{{Rational(2), Partition(3, {{0, 1}, {2}})}, {Rational(1), Partition(3, {{0}, {1, 2}})}};
  EXPECT_THROW(PartitionChain{crossing}, InputError);
}
