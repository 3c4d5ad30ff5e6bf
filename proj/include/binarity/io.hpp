#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "binarity/actions.hpp"
#include "binarity/binarity.hpp"
#include "binarity/closure.hpp"

// JSON formats.
//
// Group file:
//   {"name": "A4", "degree": 4, "generators": ["(0 1 2)", [1,0,3,2]],
//    "subgroup": ["(0 1)(2 3)"]}
// Generators are cycle strings or image lists. With "subgroup" present the
// file describes the action of the group on the right cosets of that
// subgroup. "one_based": true shifts every point down by one.
//
// Witness file:
//   {"group": <group file>, "I": [...], "J": [...], "kind": "plain"|"strong",
//    "provenance": "...", "pair_transporters": {"0,1": [image list], ...}}
// Pair keys are tuple indices; transporters are image lists.

namespace binarity::io {

using nlohmann::json;

struct GroupFile {
  std::string name;
  std::size_t degree = 0;
  std::vector<Permutation> generators;
  std::optional<std::vector<Permutation>> subgroup;
};

namespace detail {

inline Permutation parse_generator(const json& j, std::size_t degree, bool one_based) {
  if (j.is_string()) return parse_permutation(j.get<std::string>(), degree, one_based);
  if (j.is_array()) {
    std::string text = "[";
    for (const auto& v : j) {
      if (!v.is_number_unsigned()) throw InvalidInput("image lists must hold nonnegative integers");
      text += std::to_string(v.get<std::uint64_t>()) + ",";
    }
    text += "]";
    auto p = parse_permutation(text, degree, one_based);
    if (j.size() != degree) throw InvalidInput("image list length differs from degree");
    return p;
  }
  throw InvalidInput("generator must be a cycle string or an image list");
}

inline std::vector<Permutation> parse_generators(const json& j, std::size_t degree, bool one_based,
                                                 const char* field) {
  if (!j.is_array()) throw InvalidInput(std::string("\"") + field + "\" must be an array");
  std::vector<Permutation> out;
  for (const auto& g : j) out.push_back(parse_generator(g, degree, one_based));
  return out;
}

inline json image_array(const Permutation& p) {
  json a = json::array();
  for (std::size_t i = 0; i < p.degree(); ++i) a.push_back(p[static_cast<Point>(i)]);
  return a;
}

}  // namespace detail

inline GroupFile parse_group_json(const json& j, bool one_based = false) {
  if (!j.is_object()) throw InvalidInput("group file must be a JSON object");
  if (!j.contains("degree") || !j["degree"].is_number_unsigned()) throw InvalidInput("missing positive \"degree\"");
  if (!j.contains("generators")) throw InvalidInput("missing \"generators\"");
  GroupFile f;
  f.degree = j["degree"].get<std::size_t>();
  if (f.degree == 0) throw InvalidInput("degree must be positive");
  one_based = one_based || j.value("one_based", false);
  f.name = j.value("name", std::string{});
  f.generators = detail::parse_generators(j["generators"], f.degree, one_based, "generators");
  if (j.contains("subgroup")) f.subgroup = detail::parse_generators(j["subgroup"], f.degree, one_based, "subgroup");
  return f;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

inline GroupFile read_group_file(const std::filesystem::path& path, bool one_based = false) {
  auto f = parse_group_json(read_json_file(path), one_based);
  if (f.name.empty()) f.name = path.stem().string();
  return f;
}

inline PermGroup to_group(const GroupFile& f) { return PermGroup(f.degree, f.generators, f.name); }

/// The explicit action, or the coset action when a subgroup is given.
inline ActionSpace load_action(const GroupFile& f, const Limits& limits = {}) {
  PermGroup G = to_group(f);
  if (!f.subgroup) return ActionSpace::explicit_action(std::move(G));
  PermGroup H(f.degree, *f.subgroup);
  auto A = coset_action(G, H, limits);
  return A;
}

inline json group_to_json(const PermGroup& G, const std::optional<PermGroup>& subgroup = std::nullopt) {
  json j;
  j["name"] = G.name();
  j["degree"] = G.degree();
  j["generators"] = json::array();
  for (const auto& g : G.generators()) j["generators"].push_back(to_cycle_string(g));
  if (subgroup) {
    j["subgroup"] = json::array();
    for (const auto& g : subgroup->generators()) j["subgroup"].push_back(to_cycle_string(g));
  }
  return j;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Witnesses

inline json witness_to_json(const WitnessCertificate& c) {
  json j;
  j["group"] = group_to_json(c.group);
  j["I"] = c.I;
  j["J"] = c.J;
  j["kind"] = c.kind == WitnessKind::Strong ? "strong" : "plain";
  j["provenance"] = c.provenance;
  json pt = json::object();
  for (const auto& [key, g] : c.pair_transporters) {
    pt[std::to_string(key.first) + "," + std::to_string(key.second)] = detail::image_array(g);
  }
  j["pair_transporters"] = std::move(pt);
  return j;
}

inline WitnessCertificate witness_from_json(const json& j, bool one_based = false) {
  if (!j.is_object() || !j.contains("group") || !j.contains("I") || !j.contains("J")) {
    throw InvalidInput("witness file needs \"group\", \"I\" and \"J\"");
  }
  auto gf = parse_group_json(j["group"], one_based);
  if (gf.subgroup) throw InvalidInput("witness groups must be explicit actions");
  WitnessCertificate c{to_group(gf), {}, {}, {}, WitnessKind::Plain, j.value("provenance", std::string{})};
  auto points = [&](const json& a, const char* field) {
    if (!a.is_array()) throw InvalidInput(std::string("\"") + field + "\" must be an array");
    std::vector<Point> v;
    for (const auto& x : a) {
      if (!x.is_number_unsigned()) throw InvalidInput(std::string("\"") + field + "\" must hold points");
      auto p = x.get<std::uint64_t>();
      if (one_based) {
        if (p == 0) throw InvalidInput("point 0 in one-based notation");
        --p;
      }
      v.push_back(static_cast<Point>(p));
    }
    return v;
  };
  c.I = points(j["I"], "I");
  c.J = points(j["J"], "J");
  const auto kind = j.value("kind", std::string("plain"));
  if (kind == "strong") {
    c.kind = WitnessKind::Strong;
  } else if (kind != "plain") {
    throw InvalidInput("unknown witness kind " + kind);
  }
  if (j.contains("pair_transporters")) {
    const auto& pt = j["pair_transporters"];
    if (!pt.is_object()) throw InvalidInput("\"pair_transporters\" must be an object");
    for (const auto& [key, val] : pt.items()) {
      std::size_t u = 0, v = 0;
      char comma = 0;
      std::istringstream ks(key);
      if (!(ks >> u >> comma >> v) || comma != ',') throw InvalidInput("bad pair key " + key);
      c.pair_transporters.emplace(std::make_pair(u, v), detail::parse_generator(val, gf.degree, one_based));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Results

inline json evidence_to_json(const CountEvidence& e) {
  return {{"ell", e.ell},
          {"r_ell", to_string(e.r_ell)},
          {"r_2", to_string(e.r_2)},
          {"bound", to_string(e.bound)},
          {"method", to_string(e.method)}};
}

inline json outcome_to_json(const TestOutcome& t) {
  json j{{"test", t.test}, {"status", to_string(t.status)}, {"detail", t.detail}};
  if (t.budget_hit) j["budget_hit"] = true;
  if (t.evidence) j["evidence"] = evidence_to_json(*t.evidence);
  if (t.certificate) {
    j["witness"] = {{"I", t.certificate->I},
                    {"J", t.certificate->J},
                    {"kind", t.certificate->kind == WitnessKind::Strong ? "strong" : "plain"}};
  }
  if (!t.counts.empty()) {
    json c = json::array();
    for (const auto& oc : t.counts) c.push_back({{"ell", oc.ell}, {"value", to_string(oc.value)}});
    j["counts"] = std::move(c);
  }
  return j;
}

inline json closure_to_json(const ClosureResult& r) {
  json j{{"order", to_string(r.order)},
         {"two_closed", r.is_two_closed},
         {"symbolic_full", r.symbolic_full},
         {"nodes", r.nodes}};
  if (r.witness) j["witness"] = to_cycle_string(*r.witness);
  if (r.closure) {
    json g = json::array();
    for (const auto& s : r.closure->generators()) g.push_back(to_cycle_string(s));
    j["generators"] = std::move(g);
  }
  return j;
}

}  // namespace binarity::io
