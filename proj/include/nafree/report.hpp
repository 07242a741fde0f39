#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nafree/abelian_free.hpp"
#include "nafree/boolean_free.hpp"
#include "nafree/free_group.hpp"
#include "nafree/graev_delta.hpp"
#include "nafree/io.hpp"
#include "nafree/profinite.hpp"
#include "nafree/ultrametric.hpp"

namespace nafree::report {

struct Row {
  std::string name;
  std::string property;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const { return failures == 0; }

  void check(bool ok, const std::function<std::string()>& detail) {
    ++checked;
    if (!ok) {
      if (failures == 0) first_failure = detail();
      ++failures;
    }
  }
};

struct Options {
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t kernel_length = 4;
  std::size_t bn_max = 2;
  std::optional<std::string> only;
};

struct Suite {
  std::vector<Row> rows;
  bool all_passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.passed(); });
  }
};

inline const std::vector<std::pair<std::string, std::string>>& row_catalog() {
  static const std::vector<std::pair<std::string, std::string>> catalog = {
      {"norm_oracle", "fast norm equals the minimum over all normal configurations"},
      {"ultra_norm_axioms", "||u+v|| <= max(||u||,||v||) and ||u|| = 0 iff u = 0"},
      {"isometric_embedding", "||x+y|| = d(x,y) and ||x|| = d(x,0)"},
      {"norm_lower_bound", "||u|| >= least distance between distinct support points"},
      {"norm_maximality", "||u|| <= phi(w) for every normal configuration w of u"},
      {"ball_equals_subgroup", "{||u|| < eps} equals <d < eps> for eps between distance values in (0,1)"},
      {"closedness", "every u with |u| != 1 has a ball level with (u + <eps>) missing X"},
      {"kernel_identity", "quotient-kernel membership equals conjugate-generator closure"},
      {"bn_closed", "w + <eps> avoids B_n when lh(w) > n, by full enumeration"},
      {"bn_empty_interior", "w + <eps> leaves B_n through a length-raising generator"},
      {"duality", "the linear extension is the unique homomorphism V* -> G extending f"},
      {"action_lifting", "isometries lift to additive maps of B(X) keeping the norm of words that avoid moved zero distances"},
      {"graev_delta", "delta extends the alphabet metric, is bi-invariant and ultra"},
  };
  return catalog;
}

namespace detail {

inline std::string word_str(const BooleanWord& u, const UltraMetricSpace& s) {
  return io::boolean_word_to_json(u, s.names()).dump();
}

inline void norm_rows(Suite& suite, const io::Workspace& ws, const Options& opt,
                      const std::function<bool(const std::string&)>& wanted) {
  const auto aug = extend_with_zero(ws.space);
  const auto words = all_boolean_words(ws.space.size());
  std::vector<Rational> norm;
  for (const auto& u : words) norm.push_back(graev_norm_fast(u, aug).value);
  const auto& names = ws.space;

  if (wanted("norm_oracle")) {
    Row r;
    r.name = "norm_oracle";
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!words[i].is_zero() && support(words[i], aug).size() > opt.enumeration_cap) continue;
      auto brute = graev_norm_bruteforce(words[i], aug, opt.enumeration_cap).value;
      r.check(brute == norm[i], [&] { return word_str(words[i], names) + ": fast " + norm[i].str() + " vs brute " + brute.str(); });
    }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("ultra_norm_axioms")) {
    Row r;
    r.name = "ultra_norm_axioms";
    for (std::size_t i = 0; i < words.size(); ++i) {
      r.check(norm[i].is_zero() == words[i].is_zero(), [&] { return word_str(words[i], names) + " has norm " + norm[i].str(); });
      for (std::size_t j = 0; j < words.size(); ++j) {
        const std::size_t k = i ^ j;  // mask of the symmetric difference
        r.check(!(max(norm[i], norm[j]) < norm[k]),
                [&] { return "||u+v|| > max for u=" + word_str(words[i], names) + ", v=" + word_str(words[j], names); });
      }
    }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("isometric_embedding")) {
    Row r;
    r.name = "isometric_embedding";
    for (std::size_t x = 0; x < ws.space.size(); ++x) {
      const auto ux = BooleanWord::of({static_cast<PointId>(x)});
      r.check(graev_norm_fast(ux, aug).value == aug.d(x, aug.zero()), [&] { return "||x|| != d(x,0) at " + ws.space.name(x); });
      for (std::size_t y = x + 1; y < ws.space.size(); ++y) {
        const auto uy = BooleanWord::of({static_cast<PointId>(y)});
        r.check(graev_metric(ux, uy, aug) == ws.space.d(x, y),
                [&] { return "||x+y|| != d(x,y) at " + ws.space.name(x) + "," + ws.space.name(y); });
      }
    }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("norm_lower_bound")) {
    Row r;
    r.name = "norm_lower_bound";
    for (std::size_t i = 1; i < words.size(); ++i) {
      auto supp = support(words[i], aug);
      std::optional<Rational> least;
      for (std::size_t a = 0; a < supp.size(); ++a)
        for (std::size_t b = a + 1; b < supp.size(); ++b)
          least = least ? min(*least, aug.d(supp[a], supp[b])) : aug.d(supp[a], supp[b]);
      r.check(!(norm[i] < *least), [&] { return word_str(words[i], names) + " below least support distance"; });
    }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("norm_maximality")) {
    Row r;
    r.name = "norm_maximality";
    for (std::size_t i = 1; i < words.size(); ++i) {
      if (support(words[i], aug).size() > opt.enumeration_cap) continue;
      for (const auto& c : enumerate_normal_configurations(words[i], aug, opt.enumeration_cap))
        r.check(!(phi(c, aug) < norm[i]), [&] { return word_str(words[i], names) + " has a configuration shorter than its norm"; });
    }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("ball_equals_subgroup")) {
    Row r;
    r.name = "ball_equals_subgroup";
    auto vals = distance_values(ws.space);
    vals.push_back(Rational(1));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      if (!(vals[k + 1] <= Rational(1))) break;
      const Rational eps = (vals[k] + vals[k + 1]) * Rational(1, 2);
      auto rep = ball_equals_subgroup(aug, eps, words);
      for (const auto& row : rep.rows)
        r.check(row.agrees(), [&] { return "eps=" + eps.str() + " disagrees at " + word_str(row.word, names); });
    }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("closedness")) {
    Row r;
    r.name = "closedness";
    const auto& chain = ws.chains.at("ball");
    for (const auto& u : words) {
      if (u.size() == 1) continue;
      auto w = closedness_witness(u, chain);
      r.check(w.has_value() && w->memberships.size() == ws.space.size(),
              [&] { return "no closedness witness for " + word_str(u, names); });
    }
    suite.rows.push_back(std::move(r));
  }
}

inline void kernel_row(Suite& suite, const io::Workspace& ws, const Options& opt) {
  Row r;
  r.name = "kernel_identity";
  const auto pool = all_reduced_words(ws.space.size(), opt.kernel_length);
  std::set<std::vector<std::vector<PointId>>> seen;
  for (const auto& level : ws.chains.at("ball").levels()) {
    if (!seen.insert(level.partition.blocks()).second) continue;
    auto ball = v_psi_ball(PsiAssignment(level.partition), opt.kernel_length);
    std::unordered_set<FreeWord, FreeWordHash> in_ball(ball.begin(), ball.end());
    for (const auto& w : pool)
      r.check(eps_tilde_membership(w, level.partition) == in_ball.contains(w),
              [&] { return "mismatch at " + io::free_word_to_json(w, ws.space.names()).dump(); });
  }
  suite.rows.push_back(std::move(r));
}

inline void bn_rows(Suite& suite, const io::Workspace& ws, const Options& opt,
                    const std::function<bool(const std::string&)>& wanted) {
  const std::size_t n_pts = ws.space.size();
  const BnLimits limits{std::max<std::size_t>(opt.bn_max + 1, 6), std::max<std::size_t>(n_pts, 5)};
  const auto& chain = ws.chains.at("ball");
  if (wanted("bn_closed")) {
    Row r;
    r.name = "bn_closed";
    for (std::size_t n = 0; n <= opt.bn_max; ++n)
      for (const auto& w : enumerate_Bn(n + 1, n_pts, limits)) {
        if (lh(w) != static_cast<std::int64_t>(n + 1)) continue;
        auto rep = bn_avoidance_check(w, n, chain, limits);
        r.check(rep.verified() && rep.checked == bn_size(n_pts, n),
                [&] { return io::abelian_word_to_json(w, ws.space.names()).dump() + " meets B_" + std::to_string(n); });
      }
    suite.rows.push_back(std::move(r));
  }
  if (wanted("bn_empty_interior")) {
    Row r;
    r.name = "bn_empty_interior";
    for (std::size_t n = 0; n <= opt.bn_max; ++n)
      for (const auto& w : enumerate_Bn(n, n_pts, limits))
        for (const auto& level : chain.levels()) {
          const auto& eps = level.partition;
          bool usable = false;
          for (const auto& b : eps.blocks())
            for (PointId x : b)
              if (b.size() >= 2 && w.coeff(x) == 0) usable = true;
          if (!usable) continue;
          auto v = bn_interior_witness(w, n, eps);
          r.check(ab_eps_membership(v, eps) && lh(w + v) == lh(w) + 2,
                  [&] { return "bad witness for " + io::abelian_word_to_json(w, ws.space.names()).dump(); });
        }
    suite.rows.push_back(std::move(r));
  }
}

inline void duality_row(Suite& suite, const io::Workspace& ws) {
  Row r;
  r.name = "duality";
  const std::size_t n = std::min<std::size_t>(ws.space.size(), 5);
  ClopenAlgebra v(n);
  for (std::size_t k : {1U, 2U}) {
    auto g = FiniteGroupTable::elementary_abelian_2(k);
    auto homs = dual_homomorphisms(v, g);
    std::vector<Element> f(n, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= g.order();
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (auto& e : f) {
        e = static_cast<Element>(c % g.order());
        c /= g.order();
      }
      auto nu = universal_extension(v, f, g);
      bool extends = true;
      for (std::size_t x = 0; x < n; ++x) extends = extends && nu[evaluation_delta(v, static_cast<PointId>(x)).set] == f[x];
      std::size_t matching = 0;
      for (const auto& h : homs) {
        bool m = true;
        for (std::size_t x = 0; x < n && m; ++x) m = h[Mask{1} << x] == f[x];
        if (m) ++matching;
      }
      r.check(extends && is_dual_homomorphism(nu, g) && matching == 1,
              [&] { return "extension not unique for map code " + std::to_string(code); });
    }
  }
  suite.rows.push_back(std::move(r));
}

inline void action_row(Suite& suite, const io::Workspace& ws) {
  Row r;
  r.name = "action_lifting";
  const auto aug = extend_with_zero(ws.space);
  const auto words = all_boolean_words(ws.space.size());
  std::vector<GroupAction> actions;
  for (const auto& [name, a] : ws.actions) actions.push_back(a);
  if (ws.space.size() <= 6) actions.push_back(isometry_group(ws.space));
  for (const auto& a : actions) {
    LiftedAction lifted(a, ws.space);
    for (std::size_t g = 0; g < a.group().order(); ++g)
      for (std::size_t i = 0; i < words.size(); ++i) {
        const auto gu = lifted.apply(g, words[i]);
        // odd words see the zero element, so they keep their norm only when g does
        if (words[i].size() % 2 == 0 || fixes_zero_distances(lifted, aug, static_cast<Element>(g)))
          r.check(graev_norm_fast(gu, aug).value == graev_norm_fast(words[i], aug).value,
                  [&] { return "norm changed by element " + std::to_string(g); });
        for (std::size_t j = i; j < words.size(); ++j)
          r.check(lifted.apply(g, words[i] + words[j]) == gu + lifted.apply(g, words[j]),
                  [&] { return "lift is not additive for element " + std::to_string(g); });
      }
  }
  suite.rows.push_back(std::move(r));
}

}  // namespace detail

/// Graev delta checks over all word pairs of reduced length <= max_len.
inline Row graev_delta_row(const SymmetrizedAlphabet& alphabet, std::size_t max_len = 3) {
  Row r;
  r.name = "graev_delta";
  const std::size_t gens = alphabet.generators();
  const std::size_t cap = 2 * max_len + 2;
  std::map<FreeWord, Rational> memo;
  auto norm = [&](const FreeWord& w) {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    auto v = graev_delta_norm(w, alphabet, {cap, {}});
    memo.emplace(w, v);
    return v;
  };
  auto delta = [&](const FreeWord& u, const FreeWord& v) { return norm(u.inverse() * v); };

  // extends the alphabet metric
  std::vector<std::pair<FreeWord, std::size_t>> letters;
  for (std::size_t g = 0; g < gens; ++g) {
    letters.push_back({FreeWord::gen(static_cast<PointId>(g), 1), 2 * g});
    letters.push_back({FreeWord::gen(static_cast<PointId>(g), -1), 2 * g + 1});
  }
  letters.push_back({FreeWord{}, alphabet.identity()});
  for (const auto& [a, ia] : letters)
    for (const auto& [b, ib] : letters)
      r.check(delta(a, b) == alphabet.d(ia, ib), [&] { return "delta does not extend d at (" + std::to_string(ia) + "," + std::to_string(ib) + ")"; });

  const auto pool = all_reduced_words(gens, max_len);
  const auto shifts = all_reduced_words(gens, 1);
  for (const auto& u : pool)
    for (const auto& v : pool) {
      const auto duv = delta(u, v);
      for (const auto& w : shifts) {
        r.check(delta(w * u, w * v) == duv, [&] { return "left invariance fails"; });
        r.check(delta(u * w, v * w) == duv, [&] { return "right invariance fails"; });
      }
    }
  for (const auto& u : pool)
    for (const auto& v : pool) {
      const auto duv = delta(u, v);
      for (const auto& w : pool)
        r.check(!(max(duv, delta(v, w)) < delta(u, w)), [&] { return "strong triangle inequality fails"; });
    }
  for (const auto& u : pool)
    for (const auto& v : pool) {
      const auto w = u.inverse() * v;
      if (w.length() > 6) continue;
      auto gaps = alphabet_extension_gaps(w, alphabet, 6);
      r.check(gaps.empty(), [&] { return "extended alphabet lowers delta"; });
    }
  return r;
}

inline Suite run(const io::Workspace& ws, const Options& opt = {}) {
  if (opt.only) {
    const auto& cat = row_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const auto& c) { return c.first == *opt.only; }))
      throw InputError("unknown report row '" + *opt.only + "'");
  }
  auto wanted = [&](const std::string& name) { return !opt.only || *opt.only == name; };
  Suite suite;
  detail::norm_rows(suite, ws, opt, wanted);
  if (wanted("kernel_identity")) detail::kernel_row(suite, ws, opt);
  detail::bn_rows(suite, ws, opt, wanted);
  if (wanted("duality")) detail::duality_row(suite, ws);
  if (wanted("action_lifting")) detail::action_row(suite, ws);
  if (ws.alphabet && wanted("graev_delta")) suite.rows.push_back(graev_delta_row(*ws.alphabet));
  for (auto& row : suite.rows)
    for (const auto& [name, prop] : row_catalog())
      if (name == row.name) row.property = prop;
  return suite;
}

inline nlohmann::json to_json(const Suite& suite) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : suite.rows)
    rows.push_back({{"name", r.name},
                    {"property", r.property},
                    {"checked", r.checked},
                    {"failures", r.failures},
                    {"passed", r.passed()},
                    {"first_failure", r.first_failure}});
  return {{"rows", rows}, {"all_passed", suite.all_passed()}};
}

}  // namespace nafree::report
