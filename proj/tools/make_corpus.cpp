// Writes the group-file corpus: every transitive group of degree 1..7 up to
// conjugacy in Sym(n), a few curated groups of degree 8..10, and the named
// fixtures used by the acceptance suite.

#include <iostream>
#include <set>

#include "binarity/io.hpp"
#include "binarity/named_groups.hpp"

namespace {

using namespace binarity;
namespace fs = std::filesystem;

std::string element_key(const PermGroup& G) {
  std::vector<std::string> rows;
  G.for_each_element([&](const Permutation& g) {
    std::string r;
    for (std::size_t i = 0; i < g.degree(); ++i) r.push_back(static_cast<char>(g[static_cast<Point>(i)]));
    rows.push_back(std::move(r));
  });
  std::sort(rows.begin(), rows.end());
  std::string key;
  for (const auto& r : rows) key += r;
  return key;
}

/// Element-order histogram plus fixed-point histogram; equal for conjugate groups.
std::string signature(const PermGroup& G) {
  std::map<std::pair<std::size_t, std::string>, std::size_t> hist;
  G.for_each_element([&](const Permutation& g) { ++hist[{g.fixed_point_count(), g.order().str()}]; });
  std::string s = G.order().str();
  for (const auto& [k, v] : hist) s += "|" + std::to_string(k.first) + ":" + k.second + ":" + std::to_string(v);
  return s;
}

bool conjugate_in_sym(const PermGroup& a, const PermGroup& b, const std::vector<Permutation>& sym) {
  for (const auto& x : sym) {
    bool ok = true;
    for (const auto& g : a.generators()) {
      if (!b.contains(g.conjugate_by(x))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// Transitive groups of degree n up to conjugacy. Every such group for
/// n <= 7 is generated by two elements, one of which may be taken from a
/// fixed set of cycle-type representatives.
std::vector<PermGroup> transitive_groups(std::size_t n) {
  if (n == 1) return {PermGroup(1, {}, "T1_1")};
  const auto sym = groups::symmetric(n).elements();
  std::map<std::vector<std::size_t>, Permutation> reps;
  for (const auto& x : sym) reps.emplace(x.cycle_type(), x);
  const BigInt full = factorial(n);
  std::set<std::string> seen;
  std::map<std::string, std::vector<PermGroup>> classes;
  std::vector<PermGroup> out;
  for (const auto& [type, x] : reps) {
    for (const auto& y : sym) {
      PermGroup G(n, {x, y});
      if (!G.is_transitive()) continue;
      const bool unique = G.order() * 2 >= full;
      const std::string key = unique ? G.order().str() : element_key(G);
      if (!seen.insert(key).second) continue;
      const std::string sig = unique ? key : signature(G);
      auto& bucket = classes[sig];
      bool known = false;
      for (const auto& H : bucket) {
        if (unique || conjugate_in_sym(G, H, sym)) {
          known = true;
          break;
        }
      }
      if (known) continue;
      bucket.push_back(G);
      out.push_back(G);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) { return a.order() < b.order(); });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].set_name("T" + std::to_string(n) + "_" + std::to_string(i + 1));
  }
  return out;
}

void write_group(const fs::path& path, const PermGroup& G, const std::optional<PermGroup>& H = std::nullopt) {
  io::write_json_file(path, io::group_to_json(G, H));
  std::cout << path.generic_string() << '\n';
}

PermGroup named(PermGroup G, std::string name) {
  G.set_name(std::move(name));
  return G;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("corpus");
  try {
    for (std::size_t n = 1; n <= 7; ++n) {
      const auto gs = transitive_groups(n);
      for (const auto& G : gs) write_group(root / ("deg" + std::to_string(n)) / (G.name() + ".json"), G);
    }
    using namespace groups;
    write_group(root / "deg8" / "C8.json", cyclic(8));
    write_group(root / "deg8" / "D16.json", dihedral(8));
    write_group(root / "deg8" / "PGL2_7.json", pgl2(7));
    write_group(root / "deg9" / "C9.json", cyclic(9));
    write_group(root / "deg9" / "D18.json", dihedral(9));
    write_group(root / "deg9" / "Heisenberg3.json", heisenberg(3));
    write_group(root / "deg10" / "C10.json", cyclic(10));
    write_group(root / "deg10" / "D20.json", dihedral(10));
    {
      const auto A5 = alternating(5);
      const PermGroup S3(5, {parse_permutation("(0 1 2)", 5), parse_permutation("(0 1)(3 4)", 5)});
      write_group(root / "deg10" / "A5_on_cosets_of_S3.json", named(A5, "A5 on cosets of S3"), S3);
      const auto S5 = symmetric(5);
      const PermGroup S2xS3(5, {parse_permutation("(0 1)", 5), parse_permutation("(2 3 4)", 5),
                                parse_permutation("(2 3)", 5)});
      write_group(root / "deg10" / "S5_on_pairs.json", named(S5, "S5 on pairs"), S2xS3);
    }
    const fs::path fx = root / "fixtures";
    write_group(fx / "M11_deg11.json", m11());
    write_group(fx / "M11_deg12.json", named(m11(), "M11 on 12"), m11_index12_subgroup());
    write_group(fx / "L3_3_deg13.json", psl3_3_on_points());
    write_group(fx / "Frobenius_32_31.json", frobenius_32_31());
    write_group(fx / "Heisenberg3_deg9.json", heisenberg(3));
    write_group(fx / "A4xS5_on_2x2xD4.json", a4_x_s5(), a4_x_s5_sylow2());
    {
      const auto A6 = alternating(6);
      const PermGroup H(6, {parse_permutation("(0 1)(2 3)", 6)});
      write_group(fx / "A6_deg180.json", named(A6, "A6 on 180"), H);
    }
    write_group(fx / "PGL2_19.json", pgl2(19));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
