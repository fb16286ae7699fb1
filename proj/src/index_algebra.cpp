#include "doa/index_algebra.h"

#include <algorithm>
#include <set>

namespace doa {

std::vector<SignedPerm> close_generators(
    int arity, const std::vector<GeneratorDecl>& gens) {
  std::vector<int> identity(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) identity[std::size_t(i)] = i;

  auto compose = [&](const SignedPerm& a, const SignedPerm& b) {
    SignedPerm c;
    c.perm.resize(std::size_t(arity));
    for (int s = 0; s < arity; ++s)
      c.perm[std::size_t(s)] = b.perm[std::size_t(a.perm[std::size_t(s)])];
    c.sign = a.sign * b.sign;
    return c;
  };

  std::vector<SignedPerm> base;
  for (const auto& g : gens) {
    SignedPerm p;
    p.perm = identity;
    std::swap(p.perm[std::size_t(g.a - 1)], p.perm[std::size_t(g.b - 1)]);
    p.sign = g.antisym ? -1 : 1;
    base.push_back(std::move(p));
  }

  std::map<std::vector<int>, int> seen;  // perm -> sign
  std::vector<SignedPerm> closure;
  closure.push_back({identity, 1});
  seen[identity] = 1;
  // BFS closure; a permutation reached with both signs annihilates every
  // orbit it acts on, which canonicalize_tuple detects via the sign clash.
  std::vector<SignedPerm> frontier = closure;
  while (!frontier.empty()) {
    std::vector<SignedPerm> next;
    for (const auto& p : frontier) {
      for (const auto& g : base) {
        SignedPerm q = compose(p, g);
        auto it = seen.find(q.perm);
        if (it == seen.end()) {
          seen.emplace(q.perm, q.sign);
          closure.push_back(q);
          next.push_back(q);
        } else if (it->second != q.sign) {
          // Keep both signed copies so sign clashes stay visible.
          closure.push_back(q);
        }
      }
    }
    frontier = std::move(next);
    if (closure.size() > 4096) break;  // defensive cap, validated arities are tiny
  }
  return closure;
}

std::optional<std::pair<int, std::vector<ValueId>>> canonicalize_tuple(
    const SymbolInfo& sym, const std::vector<ValueId>& tuple) {
  const std::vector<ValueId>* best = nullptr;
  int best_sign = 1;
  std::vector<std::vector<ValueId>> images;
  images.reserve(sym.group.size());
  std::map<std::vector<ValueId>, int> signs;
  for (const auto& p : sym.group) {
    std::vector<ValueId> img(tuple.size());
    for (std::size_t s = 0; s < tuple.size(); ++s)
      img[s] = tuple[std::size_t(p.perm[s])];
    auto it = signs.find(img);
    if (it != signs.end()) {
      if (it->second != p.sign) return std::nullopt;  // orbit annihilates
    } else {
      signs.emplace(img, p.sign);
    }
  }
  for (auto& [img, sign] : signs) {
    if (!best || img > *best) {
      best = &img;
      best_sign = sign;
    }
  }
  // X_tuple = sign * X_rep with sign relating the two orbit members:
  // rep = g(tuple) carries sign_g, i.e. X_rep = sign_g * X_tuple.
  return std::make_pair(best_sign, *best);
}

}  // namespace doa
