#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nafree/graev_delta.hpp"
#include "support/oracles.hpp"

using namespace nafree;

namespace {

constexpr PointId X = 0, Y = 1, Z = 2;

FreeWord w(std::initializer_list<std::pair<PointId, int>> letters) {
  std::vector<Letter> v;
  for (auto [g, e] : letters) v.push_back({g, e});
  return FreeWord(v);
}

FreeWord random_word(std::mt19937_64& rng, std::size_t gens, std::size_t len) {
  std::vector<Letter> v;
  for (std::size_t i = 0; i < len; ++i) v.push_back({static_cast<PointId>(rng() % gens), rng() % 2 ? 1 : -1});
  return FreeWord(v);
}

// x, x^-1, y, y^-1, e with d(x,y) = d(x',y') = 1/2 and everything else 1
SymmetrizedAlphabet half_alphabet() {
  const Rational h(1, 2);
  return SymmetrizedAlphabet(DistanceMatrix{
      {0, 1, h, 1, 1}, {1, 0, 1, h, 1}, {h, 1, 0, 1, 1}, {1, h, 1, 0, 1}, {1, 1, 1, 1, 0}});
}

}  // namespace

TEST(FreeWord, ReductionAndProducts) {
  EXPECT_EQ(w({{X, 1}, {Y, 1}}) * w({{Y, -1}, {Z, 1}}), w({{X, 1}, {Z, 1}}));
  auto u = w({{X, 1}, {Y, -1}, {Z, 1}});
  EXPECT_TRUE((u * u.inverse()).is_identity());
  EXPECT_EQ(FreeWord{} * u, u);
  EXPECT_EQ(fg_multiply(u, fg_invert(u)), FreeWord{});
  EXPECT_EQ(w({{X, 1}, {X, -1}, {Y, 1}}), w({{Y, 1}}));
  EXPECT_EQ(w({{X, 1}, {Y, 1}, {Y, -1}, {X, -1}}).length(), 0u);
  EXPECT_THROW((FreeWord{Letter{X, 2}}), InputError);
}

TEST(FreeWord, AssociationOrderDoesNotMatter) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 2000; ++t) {
    auto a = random_word(rng, 2, rng() % 6);
    auto b = random_word(rng, 2, rng() % 6);
    auto c = random_word(rng, 2, rng() % 6);
    EXPECT_EQ((a * b) * c, a * (b * c));
    std::vector<Letter> concat = a.letters();
    concat.insert(concat.end(), b.letters().begin(), b.letters().end());
    EXPECT_EQ(FreeWord(concat), a * b);
  }
}

TEST(AllReducedWords, Counts) {
  // 1 + 2n * sum (2n-1)^(k-1)
  EXPECT_EQ(all_reduced_words(2, 3).size(), 1u + 4 + 12 + 36);
  EXPECT_EQ(all_reduced_words(1, 4).size(), 9u);
  for (const auto& u : all_reduced_words(2, 4)) EXPECT_EQ(FreeWord(u.letters()), u);
}

TEST(QuotientHom, Examples) {
  Partition one(2, {{X, Y}});
  EXPECT_TRUE(quotient_hom(w({{X, 1}, {Y, -1}}), one).is_identity());
  Partition sep = Partition::singletons(2);
  EXPECT_EQ(quotient_hom(w({{X, 1}, {Y, 1}}), sep), w({{0, 1}, {1, 1}}));
  Partition xz(3, {{X, Z}, {Y}});
  auto img = quotient_hom(w({{X, 1}, {Y, 1}, {X, -1}}), xz);
  EXPECT_EQ(img.length(), 3u);
  EXPECT_EQ(img, w({{0, 1}, {1, 1}, {0, -1}}));
  EXPECT_THROW(quotient_hom(w({{Z, 1}}), one), InputError);
}

TEST(QuotientHom, IsAHomomorphismAndMonotone) {
  std::mt19937_64 rng(61);
  auto parts = oracle::all_partitions(3);
  for (int t = 0; t < 1000; ++t) {
    const auto& eps = parts[t % parts.size()];
    auto u = random_word(rng, 3, rng() % 7);
    auto v = random_word(rng, 3, rng() % 7);
    EXPECT_EQ(quotient_hom(u * v, eps), quotient_hom(u, eps) * quotient_hom(v, eps));
    EXPECT_EQ(quotient_hom(u.inverse(), eps), quotient_hom(u, eps).inverse());
    for (const auto& coarse : parts)
      if (eps.refines(coarse) && eps_tilde_membership(u, eps)) EXPECT_TRUE(eps_tilde_membership(u, coarse));
  }
}

TEST(EpsTilde, Examples) {
  Partition eps(3, {{X, Y}, {Z}});
  EXPECT_TRUE(eps_tilde_membership(w({{X, 1}, {Y, -1}}), eps));
  EXPECT_TRUE(eps_tilde_membership(w({{Z, 1}, {X, 1}, {Y, -1}, {Z, -1}}), eps));
  EXPECT_FALSE(eps_tilde_membership(w({{X, 1}, {Z, -1}}), eps));
  EXPECT_FALSE(eps_tilde_membership(w({{X, 1}}), eps));
}

TEST(VPsiBall, ConstantPsiMatchesKernel) {
  for (std::size_t n = 1; n <= 2; ++n)
    for (const auto& eps : oracle::all_partitions(n)) {
      const std::size_t cap = 4;
      auto ball = v_psi_ball(PsiAssignment(eps), cap);
      std::vector<FreeWord> kernel;
      for (const auto& u : all_reduced_words(n, cap))
        if (eps_tilde_membership(u, eps)) kernel.push_back(u);
      std::sort(ball.begin(), ball.end());
      std::sort(kernel.begin(), kernel.end());
      EXPECT_EQ(ball, kernel);
    }
}

TEST(VPsiBall, DegenerateCases) {
  auto singles = v_psi_ball(PsiAssignment(Partition::singletons(3)), 4);
  ASSERT_EQ(singles.size(), 1u);
  EXPECT_TRUE(singles.front().is_identity());
  auto zero_cap = v_psi_ball(PsiAssignment(Partition::whole(3)), 0);
  ASSERT_EQ(zero_cap.size(), 1u);
  EXPECT_THROW(v_psi_ball(PsiAssignment(Partition::whole(2)), kMaxClosureCap + 1), InputError);
}

TEST(VPsiBall, OverridesOnlyAddTheirConjugates) {
  // psi is discrete except at the word x, where it merges x and y
  std::map<FreeWord, Partition> over{{w({{X, 1}}), Partition::whole(2)}};
  PsiAssignment psi(Partition::singletons(2), over);
  auto ball = v_psi_ball(psi, 4);
  const auto g = w({{X, 1}, {X, -1}, {Y, 1}, {X, -1}});  // x (x^-1 y) x^-1 = y x^-1
  EXPECT_NE(std::find(ball.begin(), ball.end(), g), ball.end());
  EXPECT_EQ(std::find(ball.begin(), ball.end(), w({{X, -1}, {Y, 1}})), ball.end());
  for (const auto& u : ball) EXPECT_TRUE(eps_tilde_membership(u, Partition::whole(2)));

  PartitionChain chain({{Rational(1), Partition::whole(2)}});
  EXPECT_THROW(PsiAssignment(Partition::singletons(2), {}, &chain), InputError);
}

TEST(Projections, Examples) {
  auto u = w({{X, 1}, {Y, 1}, {X, -1}});
  EXPECT_EQ(project_to_abelian(u), (AbelianWord{{Y, 1}}));
  EXPECT_EQ(project_to_boolean(u), BooleanWord::of({Y}));
  auto sq = FreeWord{Letter{X, 1}, Letter{X, 1}};
  EXPECT_EQ(project_to_abelian(sq), (AbelianWord{{X, 2}}));
  EXPECT_TRUE(project_to_boolean(sq).is_zero());
  EXPECT_TRUE(project_to_abelian(FreeWord{}).is_zero());
}

TEST(Projections, CommuteWithQuotients) {
  std::mt19937_64 rng(67);
  auto parts = oracle::all_partitions(3);
  for (int t = 0; t < 500; ++t) {
    const auto& eps = parts[t % parts.size()];
    auto u = random_word(rng, 3, rng() % 8);
    // kernel of F(X) -> F(X/eps) maps into the kernels of the abelian and Boolean quotients
    if (eps_tilde_membership(u, eps)) {
      EXPECT_TRUE(ab_eps_membership(project_to_abelian(u), eps));
      EXPECT_TRUE(eps_subgroup_membership(project_to_boolean(u), eps));
    }
    auto ab = class_sums(project_to_abelian(u), eps);
    auto via_quotient = project_to_abelian(quotient_hom(u, eps));
    for (std::size_t b = 0; b < ab.size(); ++b) EXPECT_EQ(ab[b], via_quotient.coeff(static_cast<PointId>(b)));
  }
}

TEST(GrauConditions, Examples) {
  DistanceMatrix disc(5, std::vector<Rational>(5, Rational(1)));
  for (int i = 0; i < 5; ++i) disc[i][i] = 0;
  auto ok = check_grau_conditions(SymmetrizedAlphabet(disc));
  EXPECT_TRUE(ok.ok);
  EXPECT_TRUE(ok.strong_hypothesis);

  auto half = check_grau_conditions(half_alphabet());
  EXPECT_TRUE(half.ok);
  EXPECT_TRUE(half.strong_hypothesis);

  // d(x, x^-1) = 1/2 is below d(x, e) = 1
  auto close = check_grau_conditions(SymmetrizedAlphabet(DistanceMatrix{{0, Rational(1, 2), 1}, {Rational(1, 2), 0, 1}, {1, 1, 0}}));
  EXPECT_TRUE(close.ok);
  EXPECT_FALSE(close.strong_hypothesis);

  // d(x^-1, y) = 1/2 but d(x, y^-1) = 1
  const Rational h(1, 2);
  DistanceMatrix bad{{0, 1, 1, 1, 1}, {1, 0, h, 1, 1}, {1, h, 0, 1, 1}, {1, 1, 1, 0, 1}, {1, 1, 1, 1, 0}};
  auto v = check_grau_conditions(SymmetrizedAlphabet(bad));
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.violation.find("x0'"), std::string::npos);
  EXPECT_THROW(SymmetrizedAlphabet(DistanceMatrix{{0, 1}, {1, 0}}), InputError);
}

TEST(GraevDelta, Examples) {
  auto a = half_alphabet();
  const auto x = FreeWord::gen(X), y = FreeWord::gen(Y);
  EXPECT_EQ(graev_delta_bruteforce(x, y, a), Rational(1, 2));
  EXPECT_EQ(graev_delta_bruteforce(x, FreeWord{}, a), Rational(1));
  EXPECT_EQ(graev_delta_bruteforce(x * y, x * y, a), Rational(0));
  // trivial words t1 t2: t1 = y gives max(d(x,y), d(y,y^-1)) = 1, and nothing does better
  EXPECT_EQ(graev_delta_bruteforce(x * y, FreeWord{}, a), Rational(1));
  EXPECT_EQ(graev_delta_norm(x * y.inverse(), a), Rational(1, 2));
  EXPECT_THROW(graev_delta_norm(x * y * x * y, a, {.cap = 3}), InputError);
}

TEST(GraevDelta, ExtendsAlphabetMetricAndIsInvariant) {
  auto a = half_alphabet();
  auto pool = all_reduced_words(2, 2);
  std::vector<FreeWord> letters{FreeWord::gen(X), FreeWord::gen(X, -1), FreeWord::gen(Y), FreeWord::gen(Y, -1), FreeWord{}};
  for (std::size_t i = 0; i < letters.size(); ++i)
    for (std::size_t j = 0; j < letters.size(); ++j) {
      auto expect = a.d(i == 4 ? a.identity() : i, j == 4 ? a.identity() : j);
      EXPECT_EQ(graev_delta_bruteforce(letters[i], letters[j], a), expect);
    }
  for (const auto& u : pool)
    for (const auto& v : pool) {
      const auto d = graev_delta_bruteforce(u, v, a);
      EXPECT_EQ(d, graev_delta_bruteforce(v, u, a));
      for (const auto& s : letters) EXPECT_EQ(graev_delta_bruteforce(u * s, v * s, a), d);
      for (const auto& m : pool) EXPECT_LE(d, max(graev_delta_bruteforce(u, m, a), graev_delta_bruteforce(m, v, a)));
    }
}

TEST(GraevDelta, ExtendedAlphabetAgreesOnTwoLetters) {
  auto a = half_alphabet();
  for (const auto& u : all_reduced_words(2, 3)) EXPECT_TRUE(alphabet_extension_gaps(u, a, 6).empty());
}
