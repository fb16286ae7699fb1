// Concrete index model: classes, values, coframe atoms, symbols, components,
// canonicalization under sign symmetries, and index orderings.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "doa/ast.h"
#include "doa/rational.h"

namespace doa {

using ValueId = int;
using AtomId = int;
using CompId = int;

struct IndexClass {
  std::string name;
  ClassKind kind;
  int size = 0;
  ValueId first_value = 0;
};

struct Value {
  int cls = 0;
  int ordinal = 0;  // 0-based within the class
  std::string display;
};

struct CoframeFamily {
  std::string name;
  CoframeKind kind;
  std::vector<int> slot_classes;
  AtomId first_atom = 0;
  int atom_count = 0;
};

struct Atom {
  int family = 0;
  std::vector<ValueId> values;  // canonical member tuple
  std::string display;
  bool is_basic = false;
};

// Signed slot permutation; applying it to a tuple t gives sign * t-permuted.
struct SignedPerm {
  std::vector<int> perm;  // slot s of the image takes old slot perm[s]
  int sign = 1;
};

struct SymbolInfo {
  std::string name;
  std::vector<int> slot_classes;
  std::vector<SignedPerm> group;  // closure, identity included
  std::vector<int> rotation_families;
  std::vector<std::pair<int, int>> adjoints;  // (group family, const symbol)
  bool specified = false;
  bool auxiliary = false;
  bool constant = false;
  std::map<std::vector<ValueId>, Rat> const_values;  // canonical tuple keys
};

// Canonical representative: lex-greatest tuple in the signed orbit.
// Returns nullopt when the orbit is self-annihilating (the component is 0).
std::optional<std::pair<int, std::vector<ValueId>>> canonicalize_tuple(
    const SymbolInfo& sym, const std::vector<ValueId>& tuple);

// Closes generator declarations into the full signed permutation group.
std::vector<SignedPerm> close_generators(int arity,
                                         const std::vector<GeneratorDecl>& gens);

struct CompKey {
  int sym = 0;
  std::vector<ValueId> primary;  // canonical
  std::vector<ValueId> derivs;

  bool operator==(const CompKey&) const = default;
};

struct CompKeyHash {
  std::size_t operator()(const CompKey& k) const {
    std::size_t h = std::hash<int>()(k.sym);
    auto mix = [&](int v) {
      h ^= std::size_t(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (int v : k.primary) mix(v + 1);
    mix(-7);
    for (int v : k.derivs) mix(v + 1);
    return h;
  }
};

// Interning table; ids are dense and stable for a given problem.
class CompTable {
 public:
  CompId intern(CompKey key) {
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    CompId id = CompId(keys_.size());
    ids_.emplace(key, id);
    keys_.push_back(std::move(key));
    return id;
  }

  std::optional<CompId> find(const CompKey& key) const {
    auto it = ids_.find(key);
    return it == ids_.end() ? std::nullopt : std::optional<CompId>(it->second);
  }

  const CompKey& key(CompId id) const { return keys_[std::size_t(id)]; }
  int size() const { return int(keys_.size()); }
  int order_of(CompId id) const { return int(keys_[std::size_t(id)].derivs.size()); }

 private:
  std::vector<CompKey> keys_;
  std::unordered_map<CompKey, CompId, CompKeyHash> ids_;
};

// Ranks every derivation value; greater rank means "greater index" in the
// sense used by seed selection. Non-derivation values have rank 0.
struct IndexOrdering {
  std::string name;
  std::vector<int> rank_of_value;  // indexed by ValueId, 1-based ranks

  int rank(ValueId v) const { return rank_of_value[std::size_t(v)]; }
};

}  // namespace doa
