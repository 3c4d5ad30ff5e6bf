#pragma once

// Brute-force reference implementations. They work on plain image vectors
// and share no search code with the library.

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "binarity/pipeline.hpp"

namespace oracle {

using Perm = std::vector<std::uint32_t>;

inline Perm mul(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
  return r;
}

inline Perm identity(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

inline Perm images(const binarity::Permutation& g) {
  Perm p(g.degree());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = g[static_cast<binarity::Point>(i)];
  return p;
}

/// All elements, by closing the generators under multiplication.
inline std::vector<Perm> elements(std::size_t n, const std::vector<Perm>& gens) {
  std::set<Perm> seen{identity(n)};
  std::vector<Perm> queue{identity(n)};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      auto x = mul(queue[i], g);
      if (seen.insert(x).second) queue.push_back(x);
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

inline std::vector<Perm> elements(const binarity::PermGroup& G) {
  std::vector<Perm> gens;
  for (const auto& g : G.generators()) gens.push_back(images(g));
  return elements(G.degree(), gens);
}

inline std::vector<Perm> symmetric(std::size_t n) {
  std::vector<Perm> out;
  Perm p = identity(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Number of orbits on injective ell-tuples.
inline std::size_t tuple_orbits(const std::vector<Perm>& elems, std::size_t n, std::size_t ell) {
  std::set<Perm> seen;
  std::size_t orbits = 0;
  Perm t(ell);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == ell) {
      if (seen.count(t)) return;
      ++orbits;
      for (const auto& g : elems) {
        Perm u(ell);
        for (std::size_t i = 0; i < ell; ++i) u[i] = g[t[i]];
        seen.insert(u);
      }
      return;
    }
    for (std::uint32_t x = 0; x < n; ++x) {
      if (used[x]) continue;
      used[x] = true;
      t[k] = x;
      self(self, k + 1);
      used[x] = false;
    }
  };
  rec(rec, 0);
  return orbits;
}

/// Orbital colour of every ordered pair, from the element list.
inline std::vector<int> orbital_colours(const std::vector<Perm>& elems, std::size_t n) {
  std::vector<int> c(n * n, -1);
  int next = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (c[u * n + v] >= 0) continue;
      for (const auto& g : elems) c[g[u] * n + g[v]] = next;
      ++next;
    }
  }
  return c;
}

/// Order of the 2-closure: elements of Sym(n) preserving every orbital.
inline std::size_t two_closure_order(const std::vector<Perm>& elems, std::size_t n) {
  const auto c = orbital_colours(elems, n);
  std::size_t count = 0;
  for (const auto& s : symmetric(n)) {
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u) {
      for (std::size_t v = 0; v < n && ok; ++v) ok = c[u * n + v] == c[s[u] * n + s[v]];
    }
    count += ok;
  }
  return count;
}

inline bool conjugate_tuples(const std::vector<Perm>& elems, const Perm& I, const Perm& J) {
  for (const auto& g : elems) {
    bool ok = true;
    for (std::size_t i = 0; i < I.size() && ok; ++i) ok = g[I[i]] == J[i];
    if (ok) return true;
  }
  return false;
}

/// Arity from the definition: least r >= 2 such that for every m in [r, n],
/// r-subtuple complete injective m-tuples are conjugate. Only for tiny n.
inline std::size_t arity(const std::vector<Perm>& elems, std::size_t n) {
  // Orbit label of every injective tuple of each length.
  std::vector<std::map<Perm, int>> label(n + 1);
  for (std::size_t m = 1; m <= n; ++m) {
    int next = 0;
    Perm t(m);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k == m) {
        if (label[m].count(t)) return;
        for (const auto& g : elems) {
          Perm u(m);
          for (std::size_t i = 0; i < m; ++i) u[i] = g[t[i]];
          label[m][u] = next;
        }
        ++next;
        return;
      }
      for (std::uint32_t x = 0; x < n; ++x) {
        if (used[x]) continue;
        used[x] = true;
        t[k] = x;
        self(self, k + 1);
        used[x] = false;
      }
    };
    rec(rec, 0);
  }
  auto profile = [&](const Perm& t, std::size_t r) {
    std::vector<int> out;
    std::vector<int> pick(t.size(), 0);
    std::fill(pick.end() - static_cast<long>(r), pick.end(), 1);
    do {
      Perm sub;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (pick[i]) sub.push_back(t[i]);
      }
      out.push_back(label[r].at(sub));
    } while (std::next_permutation(pick.begin(), pick.end()));
    return out;
  };
  for (std::size_t r = 2;; ++r) {
    if (r >= n) return std::max<std::size_t>(r, 2);
    bool good = true;
    for (std::size_t m = r + 1; m <= n && good; ++m) {
      std::map<std::vector<int>, int> seen;
      for (const auto& [t, lab] : label[m]) {
        auto [it, fresh] = seen.emplace(profile(t, r), lab);
        if (!fresh && it->second != lab) {
          good = false;
          break;
        }
      }
    }
    if (good) return r;
  }
}

/// Every subgroup of a small group, as sorted element lists.
inline std::vector<std::vector<Perm>> all_subgroups(const std::vector<Perm>& elems) {
  const std::size_t N = elems.size();
  std::map<Perm, std::size_t> index;
  for (std::size_t i = 0; i < N; ++i) index[elems[i]] = i;
  std::vector<std::vector<std::uint32_t>> table(N, std::vector<std::uint32_t>(N));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) table[i][j] = static_cast<std::uint32_t>(index.at(mul(elems[i], elems[j])));
  }
  using Set = std::vector<bool>;
  auto close = [&](Set s) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < N; ++i) {
      if (s[i]) members.push_back(i);
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) {
        for (auto [x, y] : {std::pair{members[a], members[b]}, std::pair{members[b], members[a]}}) {
          auto z = table[x][y];
          if (!s[z]) {
            s[z] = true;
            members.push_back(z);
          }
        }
      }
    }
    return s;
  };
  std::set<Set> found;
  std::vector<Set> list;
  Set triv(N, false);
  triv[index.at(identity(elems.front().size()))] = true;
  found.insert(triv);
  list.push_back(triv);
  std::vector<Set> cyclics;
  for (std::size_t i = 0; i < N; ++i) {
    Set s = triv;
    s[i] = true;
    s = close(s);
    if (found.insert(s).second) {
      list.push_back(s);
      cyclics.push_back(s);
    }
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (const auto& c : cyclics) {
      Set s = list[i];
      for (std::size_t k = 0; k < N; ++k) s[k] = s[k] || c[k];
      s = close(s);
      if (found.insert(s).second) list.push_back(s);
    }
  }
  std::vector<std::vector<Perm>> out;
  for (const auto& s : list) {
    std::vector<Perm> h;
    for (std::size_t i = 0; i < N; ++i) {
      if (s[i]) h.push_back(elems[i]);
    }
    out.push_back(std::move(h));
  }
  return out;
}

inline binarity::Permutation random_perm(std::size_t n, std::mt19937_64& rng) {
  Perm p = identity(n);
  std::shuffle(p.begin(), p.end(), rng);
  return binarity::Permutation(p);
}

inline std::filesystem::path corpus_dir() { return BINARITY_CORPUS_DIR; }

/// Group files under corpus/ with the given degree bound (explicit actions only).
inline std::vector<binarity::PermGroup> corpus_groups(std::size_t max_degree) {
  std::vector<binarity::PermGroup> out;
  for (const auto& f : binarity::corpus_files(corpus_dir())) {
    auto g = binarity::io::read_group_file(f);
    if (g.subgroup || g.degree > max_degree || f.parent_path().filename() == "fixtures") continue;
    out.push_back(binarity::io::to_group(g));
  }
  return out;
}

}  // namespace oracle
