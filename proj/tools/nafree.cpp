// nafree: command-line front end for the free non-archimedean group toolkit.
//
// Exit codes: 0 success, 1 mathematical failure (violation / false verdict),
// 2 input error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nafree/abelian_free.hpp"
#include "nafree/boolean_free.hpp"
#include "nafree/free_group.hpp"
#include "nafree/io.hpp"
#include "nafree/report.hpp"
#include "nafree/ultrametric.hpp"

namespace {

using nafree::io::json;

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kInputError = 2;

struct CommonFlags {
  std::string file;
  bool json_out = false;
  std::optional<std::string> basepoint;
  std::size_t cap = nafree::kDefaultEnumerationCap;
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string names_list(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out;
}

// ---------------------------------------------------------------- validate

struct ObjectReport {
  std::string object;
  bool ok = true;
  std::string message;
};

int cmd_validate(const CommonFlags& f) {
  const json doc = nafree::io::read_json_file(f.file);
  std::vector<ObjectReport> reports;

  auto names = nafree::io::parse_names(nafree::io::require(doc, "points"));
  auto matrix = nafree::io::parse_matrix(nafree::io::require(doc, "dist"));
  if (matrix.size() != names.size()) throw nafree::io::SchemaError("\"dist\" row count differs from \"points\"");
  auto v = nafree::validate_ultrametric(matrix);
  std::optional<nafree::UltraMetricSpace> space;
  if (!v) {
    std::string msg = v.message;
    if (v.kind == nafree::MetricViolation::Kind::strong_triangle)
      msg = "triple (" + names[v.p] + "," + names[v.q] + "," + names[v.r] + "): " + v.message;
    else
      msg = "pair (" + names[v.p] + "," + names[v.q] + "): " + v.message;
    reports.push_back({"space", false, msg});
  } else {
    try {
      space = nafree::io::parse_space(doc, f.basepoint);
      reports.push_back({"space", true, "ok"});
    } catch (const nafree::io::SchemaError&) {
      throw;
    } catch (const nafree::InputError& e) {
      reports.push_back({"space", false, e.what()});
    }
  }

  auto check = [&](const std::string& object, auto&& body) {
    if (!space) {
      reports.push_back({object, false, "not checked: space is invalid"});
      return;
    }
    try {
      body();
      reports.push_back({object, true, "ok"});
    } catch (const nafree::io::SchemaError&) {
      throw;
    } catch (const nafree::PartitionError& e) {
      std::string where = e.point() >= 0 && static_cast<std::size_t>(e.point()) < names.size()
                              ? "collision at point '" + names[e.point()] + "': "
                              : "";
      reports.push_back({object, false, where + e.what()});
    } catch (const nafree::InputError& e) {
      reports.push_back({object, false, e.what()});
    }
  };

  if (doc.contains("partitions") && doc["partitions"].is_object())
    for (auto it = doc["partitions"].begin(); it != doc["partitions"].end(); ++it)
      check("partition:" + it.key(), [&] { nafree::io::parse_partition(it.value(), *space); });
  if (doc.contains("chains") && doc["chains"].is_object())
    for (auto it = doc["chains"].begin(); it != doc["chains"].end(); ++it)
      check("chain:" + it.key(), [&] { nafree::io::parse_chain(it.value(), *space); });
  if (doc.contains("actions") && doc["actions"].is_object())
    for (auto it = doc["actions"].begin(); it != doc["actions"].end(); ++it)
      check("action:" + it.key(), [&] {
        auto a = nafree::io::parse_action(it.value(), *space);
        if (auto bad = a.isometry_violation(*space))
          throw nafree::InputError("not isometric: element " + std::to_string(bad->g) + " moves d(" + names[bad->p] + "," +
                                   names[bad->q] + ")");
      });
  if (doc.contains("alphabet"))
    check("alphabet", [&] {
      auto a = nafree::io::parse_alphabet(doc["alphabet"]);
      auto g = nafree::check_grau_conditions(a);
      if (!g.ok) throw nafree::InputError(g.violation);
    });

  bool all_ok = true;
  for (const auto& r : reports) all_ok = all_ok && r.ok;
  if (f.json_out) {
    json objs = json::array();
    for (const auto& r : reports) objs.push_back({{"object", r.object}, {"ok", r.ok}, {"message", r.message}});
    emit({{"valid", all_ok}, {"objects", objs}});
  } else {
    for (const auto& r : reports) std::cout << r.object << ": " << (r.ok ? "ok" : r.message) << "\n";
  }
  return all_ok ? kOk : kFalse;
}

// -------------------------------------------------------------------- norm

int cmd_norm(const CommonFlags& f, const std::string& word_text, const std::string& algorithm, bool check) {
  auto ws = nafree::io::load_workspace(nafree::io::read_json_file(f.file), f.basepoint);
  const auto aug = nafree::extend_with_zero(ws.space);
  const auto u = nafree::io::parse_boolean_word(nafree::io::parse_json_text(word_text), ws.space);

  nafree::NormCertificate cert;
  if (algorithm == "brute") {
    if (!u.is_zero() && nafree::support(u, aug).size() > f.cap)
      throw nafree::InputError("support exceeds the enumeration cap " + std::to_string(f.cap) +
                               "; use --algorithm fast (no cap)");
    cert = nafree::graev_norm_bruteforce(u, aug, f.cap);
  } else {
    cert = nafree::graev_norm_fast(u, aug);
  }

  json out = nafree::io::certificate_to_json(cert, aug);
  out["word"] = nafree::io::boolean_word_to_json(u, ws.space.names());
  out["algorithm"] = algorithm;
  std::optional<bool> agrees;
  if (check) {
    if (!u.is_zero() && nafree::support(u, aug).size() > f.cap) {
      out["check"] = "skipped: support exceeds enumeration cap";
    } else {
      auto other = algorithm == "brute" ? nafree::graev_norm_fast(u, aug) : nafree::graev_norm_bruteforce(u, aug, f.cap);
      agrees = other.value == cert.value;
      out["check"] = *agrees ? "agree" : "DISAGREE: other algorithm gives " + other.value.str();
    }
  }

  if (f.json_out) {
    emit(out);
  } else {
    std::cout << "word       " << out["word"].dump() << "\n";
    std::cout << "norm       " << cert.value.str() << "\n";
    std::cout << "algorithm  " << algorithm << "\n";
    std::cout << "basepoint  " << aug.name(cert.basepoint) << "\n";
    std::cout << "witness   ";
    if (cert.witness.pairs.empty()) std::cout << " (empty)";
    for (auto [a, b] : cert.witness.pairs)
      std::cout << " (" << aug.name(a) << "," << aug.name(b) << ")=" << aug.d(a, b).str();
    std::cout << "\n";
    if (out.contains("check")) std::cout << "check      " << out["check"].get<std::string>() << "\n";
  }
  return agrees.value_or(true) ? kOk : kFalse;
}

// ------------------------------------------------------------------ member

int cmd_member(const CommonFlags& f, const std::string& group, const std::string& word_text, const std::string& chain_name,
               std::size_t level) {
  auto ws = nafree::io::load_workspace(nafree::io::read_json_file(f.file), f.basepoint);
  auto chain_it = ws.chains.find(chain_name);
  if (chain_it == ws.chains.end()) throw nafree::InputError("unknown chain '" + chain_name + "'");
  if (level >= chain_it->second.size())
    throw nafree::InputError("chain '" + chain_name + "' has only " + std::to_string(chain_it->second.size()) + " levels");
  const auto& lvl = chain_it->second.level(level);
  const auto& eps = lvl.partition;
  const auto& names = ws.space.names();
  const json word_json = nafree::io::parse_json_text(word_text);

  json out{{"group", group},
           {"chain", chain_name},
           {"level", level},
           {"threshold", lvl.threshold.str()},
           {"partition", nafree::io::partition_to_json(eps, names)["blocks"]}};
  bool verdict = false;
  std::vector<std::string> evidence_lines;

  auto block_name = [&](std::size_t b) { return "{" + names_list([&] {
                                                   std::vector<std::string> v;
                                                   for (auto p : eps.block(b)) v.push_back(names[p]);
                                                   return v;
                                                 }()) + "}"; };

  if (group == "B") {
    auto u = nafree::io::parse_boolean_word(word_json, ws.space);
    auto counts = nafree::parity_table(u, eps);
    verdict = nafree::eps_subgroup_membership(u, eps);
    out["word"] = nafree::io::boolean_word_to_json(u, names);
    out["parity_table"] = counts;
    for (std::size_t b = 0; b < counts.size(); ++b)
      evidence_lines.push_back(block_name(b) + ": " + std::to_string(counts[b]) + (counts[b] % 2 ? " (odd)" : " (even)"));
  } else if (group == "A") {
    auto w = nafree::io::parse_abelian_word(word_json, ws.space);
    auto sums = nafree::class_sums(w, eps);
    verdict = nafree::ab_eps_membership(w, eps);
    out["word"] = nafree::io::abelian_word_to_json(w, names);
    out["class_sums"] = sums;
    for (std::size_t b = 0; b < sums.size(); ++b) evidence_lines.push_back(block_name(b) + ": " + std::to_string(sums[b]));
  } else if (group == "Fb") {
    auto w = nafree::io::parse_free_word(word_json, names);
    auto img = nafree::quotient_hom(w, eps);
    verdict = img.is_identity();
    out["word"] = nafree::io::free_word_to_json(w, names);
    std::vector<std::string> block_names;
    for (std::size_t b = 0; b < eps.block_count(); ++b) block_names.push_back(block_name(b));
    out["quotient_image"] = nafree::io::free_word_to_json(img, block_names);
    evidence_lines.push_back("quotient image: " + (img.is_identity() ? std::string("e") : out["quotient_image"].dump()));
  } else {
    throw nafree::InputError("--group must be B, A or Fb");
  }
  out["member"] = verdict;

  if (f.json_out) {
    emit(out);
  } else {
    std::cout << "member     " << (verdict ? "true" : "false") << "\n";
    std::cout << "level      " << level << " (threshold " << lvl.threshold.str() << ")\n";
    for (const auto& line : evidence_lines) std::cout << "  " << line << "\n";
  }
  return verdict ? kOk : kFalse;
}

// ------------------------------------------------------------------ report

int cmd_report(const CommonFlags& f, const std::optional<std::string>& only) {
  auto ws = nafree::io::load_workspace(nafree::io::read_json_file(f.file), f.basepoint);
  nafree::report::Options opt;
  opt.enumeration_cap = f.cap;
  opt.only = only;
  auto suite = nafree::report::run(ws, opt);
  if (f.json_out) {
    emit(nafree::report::to_json(suite));
  } else {
    for (const auto& r : suite.rows) {
      std::printf("%-22s %-4s %8zu checks", r.name.c_str(), r.passed() ? "PASS" : "FAIL", r.checked);
      if (!r.passed()) std::printf("  %zu failures, first: %s", r.failures, r.first_failure.c_str());
      std::printf("\n");
    }
  }
  return suite.all_passed() ? kOk : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graev ultra-norms, subgroup membership and finite duality for free non-archimedean groups"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", flags.file, "workspace JSON file")->required();
    sub->add_flag("--json", flags.json_out, "machine-readable output with sorted keys");
    sub->add_option("--basepoint", flags.basepoint, "basepoint x0 for the zero extension (default: file value, else first point)");
    sub->add_option("--cap", flags.cap, "enumeration cap on |supp(u)| for brute force");
  };

  auto* validate = app.add_subcommand("validate", "check the space, partitions, chains and actions of a workspace");
  add_common(validate);

  std::string word, algorithm = "fast";
  bool check = false;
  auto* norm = app.add_subcommand("norm", "Graev ultra-norm of a Boolean word with a minimizing configuration");
  add_common(norm);
  norm->add_option("word", word, "Boolean word as a JSON array of point names, e.g. '[\"x\",\"y\"]'")->required();
  norm->add_option("--algorithm", algorithm, "fast or brute")->check(CLI::IsMember({"fast", "brute"}));
  norm->add_flag("--check", check, "cross-check against the other algorithm");

  std::string group, chain = "ball";
  std::size_t level = 0;
  auto* member = app.add_subcommand("member", "membership of a word in the subgroup of a chain level");
  add_common(member);
  member->add_option("--group", group, "B (Boolean), A (abelian) or Fb (free, balanced)")->required()->check(CLI::IsMember({"B", "A", "Fb"}));
  member->add_option("--word", word, "word JSON: [\"a\",\"b\"] for B, {\"a\":2} for A, [\"x\",\"y'\"] for Fb")->required();
  member->add_option("--chain", chain, "chain name; \"ball\" is the full ball chain of the space");
  member->add_option("--level", level, "level index, 0 = coarsest");

  std::optional<std::string> only;
  auto* rep = app.add_subcommand("report", "run the property suite on a workspace");
  add_common(rep);
  rep->add_option("--only", only, "run a single row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*validate) return cmd_validate(flags);
    if (*norm) return cmd_norm(flags, word, algorithm, check);
    if (*member) return cmd_member(flags, group, word, chain, level);
    if (*rep) return cmd_report(flags, only);
  } catch (const nafree::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nafree::OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
