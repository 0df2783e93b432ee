#pragma once

// Decision-diagram kernel. Reduced ordered BDDs, hash-consed, plain canonical
// form (no complement edges), with an unbounded computed cache per manager.
// State variables come in current/primed twins at adjacent levels:
// even levels are current bits, odd levels their primed twins.

#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <cassert>

namespace gr1kit {

using NodeId = std::uint32_t;
using Level = std::uint32_t;
using GroupId = std::uint32_t;

class SymbolicSet;

namespace detail {
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace detail

class DdManager {
public:
  static constexpr NodeId false_node = 0;
  static constexpr NodeId true_node = 1;
  static constexpr Level terminal_level = std::numeric_limits<Level>::max();

  DdManager() {
    nodes_.push_back({terminal_level, false_node, false_node});
    nodes_.push_back({terminal_level, true_node, true_node});
  }

  DdManager(const DdManager&) = delete;
  DdManager& operator=(const DdManager&) = delete;

  // Allocates a current/primed level pair for a named state bit and returns
  // the current level. The primed twin is always current_level + 1.
  Level add_state_var(const std::string& name) {
    Level cur = num_levels_;
    num_levels_ += 2;
    var_names_.push_back(name);
    var_names_.push_back(name + "'");
    return cur;
  }

  static Level twin(Level l) { return l ^ 1u; }
  static bool is_primed(Level l) { return (l & 1u) != 0; }

  std::size_t num_levels() const { return num_levels_; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::string& level_name(Level l) const { return var_names_.at(l); }

  NodeId make_node(Level level, NodeId lo, NodeId hi) {
    if (lo == hi) return lo;
    assert(level < num_levels_);
    assert(level < level_of(lo) && level < level_of(hi));
    NodeKey key{level, lo, hi};
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({level, lo, hi});
    unique_.emplace(key, id);
    return id;
  }

  Level level_of(NodeId n) const { return nodes_[n].level; }
  NodeId lo_of(NodeId n) const { return nodes_[n].lo; }
  NodeId hi_of(NodeId n) const { return nodes_[n].hi; }

  NodeId var_node(Level l) { return make_node(l, false_node, true_node); }
  NodeId nvar_node(Level l) { return make_node(l, true_node, false_node); }

  enum class Op : std::uint8_t { And, Or, Xor, Implies };

  NodeId apply(Op op, NodeId a, NodeId b) {
    switch (op) {
      case Op::And:
        if (a == false_node || b == false_node) return false_node;
        if (a == true_node) return b;
        if (b == true_node) return a;
        if (a == b) return a;
        break;
      case Op::Or:
        if (a == true_node || b == true_node) return true_node;
        if (a == false_node) return b;
        if (b == false_node) return a;
        if (a == b) return a;
        break;
      case Op::Xor:
        if (a == b) return false_node;
        if (a == false_node) return b;
        if (b == false_node) return a;
        break;
      case Op::Implies:
        if (a == false_node || b == true_node) return true_node;
        if (a == true_node) return b;
        break;
    }
    CacheKey key{static_cast<std::uint32_t>(op), a, b};
    if (op == Op::And || op == Op::Or || op == Op::Xor) {
      if (key.a > key.b) std::swap(key.a, key.b);  // commutative
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    Level la = level_of(a), lb = level_of(b);
    Level top = la < lb ? la : lb;
    NodeId a0 = la == top ? lo_of(a) : a;
    NodeId a1 = la == top ? hi_of(a) : a;
    NodeId b0 = lb == top ? lo_of(b) : b;
    NodeId b1 = lb == top ? hi_of(b) : b;
    NodeId r = make_node(top, apply(op, a0, b0), apply(op, a1, b1));
    cache_.emplace(key, r);
    return r;
  }

  NodeId negate(NodeId a) {
    if (a == false_node) return true_node;
    if (a == true_node) return false_node;
    CacheKey key{kNotTag, a, 0};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    NodeId r = make_node(level_of(a), negate(lo_of(a)), negate(hi_of(a)));
    cache_.emplace(key, r);
    return r;
  }

  NodeId ite(NodeId f, NodeId g, NodeId h) {
    // (f & g) | (!f & h); adequate here since the apply cache soaks the cost.
    return apply(Op::Or, apply(Op::And, f, g), apply(Op::And, negate(f), h));
  }

  // Variable groups for quantification and counting. Levels must be sorted.
  GroupId register_group(std::vector<Level> levels) {
    for (std::size_t i = 1; i < levels.size(); ++i)
      assert(levels[i - 1] < levels[i]);
    groups_.push_back(std::move(levels));
    return static_cast<GroupId>(groups_.size() - 1);
  }

  const std::vector<Level>& group_levels(GroupId g) const { return groups_.at(g); }

  NodeId exists(GroupId g, NodeId a) {
    const auto& lv = groups_.at(g);
    return exists_rec(g, lv, 0, a);
  }

  NodeId forall(GroupId g, NodeId a) { return negate(exists(g, negate(a))); }

  // Swaps every current bit with its primed twin (involution).
  NodeId prime_swap(NodeId a) {
    if (a <= true_node) return a;
    CacheKey key{kSwapTag, a, 0};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    NodeId lo = prime_swap(lo_of(a));
    NodeId hi = prime_swap(hi_of(a));
    NodeId v = var_node(twin(level_of(a)));
    NodeId r = ite(v, hi, lo);
    cache_.emplace(key, r);
    return r;
  }

  // Satisfying assignments counted over exactly the given group. The set must
  // not depend on variables outside the group.
  std::uint64_t sat_count(GroupId g, NodeId a) {
    const auto& lv = groups_.at(g);
    for (Level l : support(a)) {
      bool in = false;
      for (Level gl : lv)
        if (gl == l) { in = true; break; }
      if (!in)
        throw std::logic_error("sat_count: set depends on variable outside group: " +
                               level_name(l));
    }
    return sat_count_rec(lv, 0, a);
  }

  std::vector<Level> support(NodeId a) const {
    std::vector<bool> seen(num_levels_, false);
    std::vector<NodeId> visited;
    support_rec(a, seen, visited);
    std::vector<Level> out;
    for (Level l = 0; l < num_levels_; ++l)
      if (seen[l]) out.push_back(l);
    return out;
  }

  // Evaluates the function on a full assignment given as bit-per-level.
  bool eval(NodeId a, const std::vector<bool>& assignment) const {
    while (a > true_node) {
      Level l = level_of(a);
      a = assignment[l] ? hi_of(a) : lo_of(a);
    }
    return a == true_node;
  }

  void clear_cache() { cache_.clear(); }

  // Canonicity audit used by tests: no node may have equal children and no
  // duplicate (level, lo, hi) triple may exist.
  bool table_is_canonical() const {
    for (std::size_t i = 2; i < nodes_.size(); ++i)
      if (nodes_[i].lo == nodes_[i].hi) return false;
    return unique_.size() == nodes_.size() - 2;
  }

  std::string to_dot(NodeId root) const {
    std::ostringstream os;
    os << "digraph bdd {\n";
    os << "  n0 [shape=box,label=\"0\"]; n1 [shape=box,label=\"1\"];\n";
    std::vector<bool> seen(nodes_.size(), false);
    dot_rec(root, seen, os);
    os << "}\n";
    return os.str();
  }

private:
  struct Node {
    Level level;
    NodeId lo, hi;
  };
  struct NodeKey {
    Level level;
    NodeId lo, hi;
    bool operator==(const NodeKey& o) const {
      return level == o.level && lo == o.lo && hi == o.hi;
    }
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
      std::size_t h = detail::hash_mix(0, k.level);
      h = detail::hash_mix(h, k.lo);
      return detail::hash_mix(h, k.hi);
    }
  };
  struct CacheKey {
    std::uint32_t tag;
    NodeId a, b;
    bool operator==(const CacheKey& o) const {
      return tag == o.tag && a == o.a && b == o.b;
    }
  };
  struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const {
      std::size_t h = detail::hash_mix(0, k.tag);
      h = detail::hash_mix(h, k.a);
      return detail::hash_mix(h, k.b);
    }
  };

  static constexpr std::uint32_t kNotTag = 16;
  static constexpr std::uint32_t kSwapTag = 17;
  static constexpr std::uint32_t kExistsTagBase = 32;  // + group id

  NodeId exists_rec(GroupId g, const std::vector<Level>& lv, std::size_t idx,
                    NodeId a) {
    if (a <= true_node) return a;
    Level la = level_of(a);
    while (idx < lv.size() && lv[idx] < la) ++idx;
    if (idx == lv.size()) return a;
    CacheKey key{kExistsTagBase + g, a, static_cast<NodeId>(idx)};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    NodeId r;
    if (lv[idx] == la) {
      r = apply(Op::Or, exists_rec(g, lv, idx + 1, lo_of(a)),
                exists_rec(g, lv, idx + 1, hi_of(a)));
    } else {
      r = make_node(la, exists_rec(g, lv, idx, lo_of(a)),
                    exists_rec(g, lv, idx, hi_of(a)));
    }
    cache_.emplace(key, r);
    return r;
  }

  std::uint64_t sat_count_rec(const std::vector<Level>& lv, std::size_t idx,
                              NodeId a) {
    if (idx == lv.size()) {
      assert(a <= true_node);
      return a == true_node ? 1u : 0u;
    }
    Level la = level_of(a);
    if (la > lv[idx] || a <= true_node) {
      // Variable lv[idx] unconstrained here: both polarities count.
      return 2u * sat_count_rec(lv, idx + 1, a);
    }
    assert(la == lv[idx]);
    return sat_count_rec(lv, idx + 1, lo_of(a)) +
           sat_count_rec(lv, idx + 1, hi_of(a));
  }

  void support_rec(NodeId a, std::vector<bool>& seen,
                   std::vector<NodeId>& visited) const {
    if (a <= true_node) return;
    for (NodeId v : visited)
      if (v == a) return;
    visited.push_back(a);
    seen[level_of(a)] = true;
    support_rec(lo_of(a), seen, visited);
    support_rec(hi_of(a), seen, visited);
  }

  void dot_rec(NodeId a, std::vector<bool>& seen, std::ostringstream& os) const {
    if (a <= true_node || seen[a]) return;
    seen[a] = true;
    os << "  n" << a << " [label=\"" << level_name(level_of(a)) << "\"];\n";
    os << "  n" << a << " -> n" << lo_of(a) << " [style=dashed];\n";
    os << "  n" << a << " -> n" << hi_of(a) << ";\n";
    dot_rec(lo_of(a), seen, os);
    dot_rec(hi_of(a), seen, os);
  }

  std::size_t num_levels_ = 0;
  std::vector<std::string> var_names_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeKey, NodeId, NodeKeyHash> unique_;
  std::unordered_map<CacheKey, NodeId, CacheKeyHash> cache_;
  std::vector<std::vector<Level>> groups_;
};

// A state set (or relation) handle tied to its manager. Handle equality is
// semantic equality by canonicity.
class SymbolicSet {
public:
  SymbolicSet() : mgr_(nullptr), id_(DdManager::false_node) {}
  SymbolicSet(DdManager* mgr, NodeId id) : mgr_(mgr), id_(id) {}

  static SymbolicSet constant(DdManager& mgr, bool v) {
    return SymbolicSet(&mgr, v ? DdManager::true_node : DdManager::false_node);
  }
  static SymbolicSet var(DdManager& mgr, Level l) {
    return SymbolicSet(&mgr, mgr.var_node(l));
  }

  DdManager* manager() const { return mgr_; }
  NodeId id() const { return id_; }
  bool valid() const { return mgr_ != nullptr; }
  bool is_false() const { return id_ == DdManager::false_node; }
  bool is_true() const { return id_ == DdManager::true_node; }

  SymbolicSet operator&(const SymbolicSet& o) const {
    return bin(DdManager::Op::And, o);
  }
  SymbolicSet operator|(const SymbolicSet& o) const {
    return bin(DdManager::Op::Or, o);
  }
  SymbolicSet operator^(const SymbolicSet& o) const {
    return bin(DdManager::Op::Xor, o);
  }
  SymbolicSet implies(const SymbolicSet& o) const {
    return bin(DdManager::Op::Implies, o);
  }
  SymbolicSet operator!() const {
    check_valid();
    return SymbolicSet(mgr_, mgr_->negate(id_));
  }
  SymbolicSet iff(const SymbolicSet& o) const { return !(*this ^ o); }

  bool operator==(const SymbolicSet& o) const {
    return mgr_ == o.mgr_ && id_ == o.id_;
  }
  bool operator!=(const SymbolicSet& o) const { return !(*this == o); }

  bool subset_of(const SymbolicSet& o) const {
    return (*this & !o).is_false();
  }

  SymbolicSet exists(GroupId g) const {
    check_valid();
    return SymbolicSet(mgr_, mgr_->exists(g, id_));
  }
  SymbolicSet forall(GroupId g) const {
    check_valid();
    return SymbolicSet(mgr_, mgr_->forall(g, id_));
  }

  SymbolicSet prime_swap() const {
    check_valid();
    bool has_cur = false, has_pri = false;
    for (Level l : mgr_->support(id_))
      (DdManager::is_primed(l) ? has_pri : has_cur) = true;
    if (has_cur && has_pri)
      throw std::logic_error("prime_swap: set mixes current and primed bits");
    return SymbolicSet(mgr_, mgr_->prime_swap(id_));
  }

  std::uint64_t sat_count(GroupId g) const {
    check_valid();
    return mgr_->sat_count(g, id_);
  }

  bool eval(const std::vector<bool>& assignment) const {
    check_valid();
    return mgr_->eval(id_, assignment);
  }

  std::string to_dot() const {
    check_valid();
    return mgr_->to_dot(id_);
  }

private:
  SymbolicSet bin(DdManager::Op op, const SymbolicSet& o) const {
    check_valid();
    if (mgr_ != o.mgr_)
      throw std::logic_error("symbolic sets belong to different managers");
    return SymbolicSet(mgr_, mgr_->apply(op, id_, o.id_));
  }
  void check_valid() const {
    if (!mgr_) throw std::logic_error("use of empty SymbolicSet");
  }

  DdManager* mgr_;
  NodeId id_;
};

}  // namespace gr1kit
