#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nafree/abelian_free.hpp"
#include "nafree/boolean_free.hpp"
#include "nafree/finite_group.hpp"
#include "nafree/free_group.hpp"
#include "nafree/graev_delta.hpp"
#include "nafree/partition.hpp"
#include "nafree/ultrametric.hpp"

namespace nafree::io {

using json = nlohmann::json;

/// Malformed input text or a document that does not follow the schema.
class SchemaError : public InputError {
public:
  using InputError::InputError;
};

inline Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const InputError& e) {
      throw SchemaError(e.what());
    }
  }
  throw SchemaError("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

inline DistanceMatrix parse_matrix(const json& j) {
  if (!j.is_array()) throw SchemaError("\"dist\" must be an array of rows");
  DistanceMatrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw SchemaError("\"dist\" rows must be arrays");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(parse_rational(v));
    m.push_back(std::move(r));
  }
  return m;
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::vector<std::string> parse_names(const json& j) {
  if (!j.is_array()) throw SchemaError("\"points\" must be an array of names");
  std::vector<std::string> names;
  for (const auto& n : j) {
    if (!n.is_string()) throw SchemaError("point names must be strings");
    names.push_back(n.get<std::string>());
  }
  return names;
}

inline PointId point_index(const UltraMetricSpace& space, const json& name) {
  if (!name.is_string()) throw SchemaError("point references must be names");
  const auto s = name.get<std::string>();
  if (s == kZeroName) throw SchemaError("\"0\" names the adjoined zero element and is not a point of X");
  try {
    return space.index_of(s);
  } catch (const InputError& e) {
    throw SchemaError(e.what());
  }
}

/// {"points": [...], "dist": [[...]], "basepoint": name?}
inline UltraMetricSpace parse_space(const json& j, std::optional<std::string> basepoint_override = {}) {
  auto names = parse_names(require(j, "points"));
  auto dist = parse_matrix(require(j, "dist"));
  std::optional<PointId> bp;
  std::optional<std::string> bp_name = basepoint_override;
  if (!bp_name && j.contains("basepoint")) {
    if (!j["basepoint"].is_string()) throw SchemaError("\"basepoint\" must be a point name");
    bp_name = j["basepoint"].get<std::string>();
  }
  if (bp_name) {
    auto it = std::find(names.begin(), names.end(), *bp_name);
    if (it == names.end()) throw SchemaError("basepoint '" + *bp_name + "' is not a point");
    bp = static_cast<PointId>(it - names.begin());
  }
  if (dist.size() != names.size()) throw SchemaError("\"dist\" has " + std::to_string(dist.size()) + " rows for " + std::to_string(names.size()) + " points");
  for (const auto& row : dist)
    if (row.size() != names.size()) throw SchemaError("\"dist\" is not square");
  return UltraMetricSpace(std::move(names), std::move(dist), bp);
}

/// {"blocks": [["a","b"],["c"]]} or the bare block array.
inline Partition parse_partition(const json& j, const UltraMetricSpace& space) {
  const json& blocks = j.is_object() ? require(j, "blocks") : j;
  if (!blocks.is_array()) throw SchemaError("partition blocks must be an array");
  std::vector<std::vector<PointId>> out;
  for (const auto& b : blocks) {
    if (!b.is_array()) throw SchemaError("each block must be an array of names");
    std::vector<PointId> ids;
    for (const auto& n : b) ids.push_back(point_index(space, n));
    out.push_back(std::move(ids));
  }
  return Partition(space.size(), std::move(out));
}

inline json partition_to_json(const Partition& p, const std::vector<std::string>& names) {
  json blocks = json::array();
  for (const auto& b : p.blocks()) {
    json jb = json::array();
    for (PointId x : b) jb.push_back(names.at(x));
    blocks.push_back(jb);
  }
  return json{{"blocks", blocks}};
}

/// [{"threshold": "1", "blocks": [...]}, ...], coarsest first.
inline PartitionChain parse_chain(const json& j, const UltraMetricSpace& space) {
  if (!j.is_array()) throw SchemaError("a chain must be an array of levels");
  std::vector<ChainLevel> levels;
  for (const auto& l : j) levels.push_back({parse_rational(require(l, "threshold")), parse_partition(l, space)});
  return PartitionChain(std::move(levels));
}

/// {"group": [[mul table]], "table": [[image names per point], ...]} with one row per group element.
inline GroupAction parse_action(const json& j, const UltraMetricSpace& space) {
  const auto& g = require(j, "group");
  if (!g.is_array()) throw SchemaError("\"group\" must be a multiplication table");
  std::vector<std::vector<Element>> mul;
  for (const auto& row : g) {
    if (!row.is_array()) throw SchemaError("group table rows must be arrays");
    std::vector<Element> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw SchemaError("group table entries must be integers");
      r.push_back(v.get<Element>());
    }
    mul.push_back(std::move(r));
  }
  FiniteGroupTable group(std::move(mul));
  const auto& t = require(j, "table");
  if (!t.is_array()) throw SchemaError("\"table\" must be an array");
  std::vector<std::vector<PointId>> table;
  for (const auto& row : t) {
    if (!row.is_array() || row.size() != space.size()) throw SchemaError("each action row must list one image per point");
    std::vector<PointId> r;
    for (const auto& n : row) r.push_back(point_index(space, n));
    table.push_back(std::move(r));
  }
  return GroupAction(std::move(group), std::move(table));
}

/// ["a","c"]; [] is the zero word.
inline BooleanWord parse_boolean_word(const json& j, const UltraMetricSpace& space) {
  if (!j.is_array()) throw SchemaError("a Boolean word is an array of point names");
  std::vector<PointId> ids;
  for (const auto& n : j) ids.push_back(point_index(space, n));
  return BooleanWord::sum_of(std::move(ids));
}

inline json boolean_word_to_json(const BooleanWord& u, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (PointId p : u.points()) out.push_back(names.at(p));
  std::sort(out.begin(), out.end());
  return out;
}

/// {"a": 2, "b": -3}; {} is zero.
inline AbelianWord parse_abelian_word(const json& j, const UltraMetricSpace& space) {
  if (!j.is_object()) throw SchemaError("an abelian word is an object name -> integer");
  AbelianWord w;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_integer()) throw SchemaError("abelian coefficients must be integers");
    w.add_term(point_index(space, json(it.key())), it.value().get<std::int64_t>());
  }
  return w;
}

inline json abelian_word_to_json(const AbelianWord& w, const std::vector<std::string>& names) {
  json j = json::object();
  for (auto& [p, k] : w.coeffs()) j[names.at(p)] = k;
  return j;
}

/// ["x","y'","x"]; a trailing apostrophe marks an inverse letter.
inline FreeWord parse_free_word(const json& j, const std::vector<std::string>& names) {
  if (!j.is_array()) throw SchemaError("a free-group word is an array of letters");
  std::vector<Letter> letters;
  for (const auto& l : j) {
    if (!l.is_string()) throw SchemaError("letters must be strings");
    auto s = l.get<std::string>();
    int exp = 1;
    if (!s.empty() && s.back() == '\'') {
      exp = -1;
      s.pop_back();
    }
    auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end()) throw SchemaError("unknown letter '" + s + "'");
    letters.push_back({static_cast<PointId>(it - names.begin()), exp});
  }
  return FreeWord(letters);
}

inline json free_word_to_json(const FreeWord& w, const std::vector<std::string>& names) {
  json out = json::array();
  for (const auto& l : w.letters()) out.push_back(names.at(l.gen) + (l.exp < 0 ? "'" : ""));
  return out;
}

inline json certificate_to_json(const NormCertificate& c, const AugmentedSpace& space) {
  json witness = json::array();
  for (auto [a, b] : c.witness.pairs) witness.push_back({space.name(a), space.name(b)});
  return json{{"value", c.value.str()}, {"witness", witness}, {"basepoint", space.name(c.basepoint)}};
}

/// {"letters": ["x","x'",...,"e"], "dist": [[...]]}; letters must follow the x, x', ..., e layout.
inline SymmetrizedAlphabet parse_alphabet(const json& j, std::vector<std::string>* generator_names = nullptr) {
  auto letters = parse_names(require(j, "letters"));
  if (letters.size() % 2 == 0 || letters.back() != "e") throw SchemaError("alphabet must list x, x', ... and end with e");
  for (std::size_t i = 0; i + 1 < letters.size(); i += 2)
    if (letters[i + 1] != letters[i] + "'") throw SchemaError("letter '" + letters[i] + "' must be followed by its inverse");
  if (generator_names) {
    generator_names->clear();
    for (std::size_t i = 0; i + 1 < letters.size(); i += 2) generator_names->push_back(letters[i]);
  }
  return SymmetrizedAlphabet(parse_matrix(require(j, "dist")));
}

/*
 * Everything one CLI invocation works on: the space, named chains and
 * partitions (the full ball chain is always available as "ball"), named
 * isometric actions and an optional free-group alphabet metric.
 */
struct Workspace {
  UltraMetricSpace space;
  std::map<std::string, PartitionChain> chains;
  std::map<std::string, Partition> partitions;
  std::map<std::string, GroupAction> actions;
  std::optional<SymmetrizedAlphabet> alphabet;
  std::vector<std::string> alphabet_names;
};

inline Workspace load_workspace(const json& j, std::optional<std::string> basepoint = {}) {
  Workspace ws;
  ws.space = parse_space(j, basepoint);
  ws.chains.emplace("ball", ball_chain(ws.space));
  if (j.contains("chains")) {
    if (!j["chains"].is_object()) throw SchemaError("\"chains\" must be an object");
    for (auto it = j["chains"].begin(); it != j["chains"].end(); ++it) {
      if (it.key() == "ball") throw SchemaError("chain name \"ball\" is reserved");
      ws.chains.emplace(it.key(), parse_chain(it.value(), ws.space));
    }
  }
  if (j.contains("partitions")) {
    if (!j["partitions"].is_object()) throw SchemaError("\"partitions\" must be an object");
    for (auto it = j["partitions"].begin(); it != j["partitions"].end(); ++it)
      ws.partitions.emplace(it.key(), parse_partition(it.value(), ws.space));
  }
  if (j.contains("actions")) {
    if (!j["actions"].is_object()) throw SchemaError("\"actions\" must be an object");
    for (auto it = j["actions"].begin(); it != j["actions"].end(); ++it) {
      auto act = parse_action(it.value(), ws.space);
      if (auto v = act.isometry_violation(ws.space)) throw InputError("action '" + it.key() + "' is not isometric: " + v->message);
      ws.actions.emplace(it.key(), std::move(act));
    }
  }
  if (j.contains("alphabet")) {
    ws.alphabet = parse_alphabet(j["alphabet"], &ws.alphabet_names);
    auto grau = check_grau_conditions(*ws.alphabet);
    if (!grau.ok) throw InputError("alphabet metric: " + grau.violation);
  }
  return ws;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("parse error in '") + path + "': " + e.what());
  }
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("cannot parse '") + text + "': " + e.what());
  }
}

}  // namespace nafree::io
