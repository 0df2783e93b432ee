#include <catch2/catch_amalgamated.hpp>

#include <bitset>
#include <random>

#include "gr1kit/bdd.hpp"

using namespace gr1kit;

namespace {

// Truth-table oracle over k levels: bit i of the table is the function value
// on the assignment whose level-l bit is ((i >> l) & 1). Fully independent of
// the diagram representation.
using Table = std::vector<bool>;

Table table_of(const DdManager& mgr, NodeId n, std::size_t k) {
  Table t(std::size_t{1} << k);
  std::vector<bool> a(k, false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t l = 0; l < k; ++l) a[l] = (i >> l) & 1;
    t[i] = mgr.eval(n, a);
  }
  return t;
}

// Builds a random function directly from a random truth table, via minterms.
NodeId from_table(DdManager& mgr, const Table& t, std::size_t k) {
  NodeId r = DdManager::false_node;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i]) continue;
    NodeId m = DdManager::true_node;
    for (std::size_t l = 0; l < k; ++l) {
      NodeId lit = ((i >> l) & 1) ? mgr.var_node(static_cast<Level>(l))
                                  : mgr.nvar_node(static_cast<Level>(l));
      m = mgr.apply(DdManager::Op::And, m, lit);
    }
    r = mgr.apply(DdManager::Op::Or, r, m);
  }
  return r;
}

Table random_table(std::mt19937& rng, std::size_t k) {
  Table t(std::size_t{1} << k);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng() & 1;
  return t;
}

}  // namespace

TEST_CASE("identities and complement laws") {
  DdManager mgr;
  Level a = mgr.add_state_var("a");
  Level b = mgr.add_state_var("b");
  SymbolicSet va = SymbolicSet::var(mgr, a);
  SymbolicSet vb = SymbolicSet::var(mgr, b);
  SymbolicSet top = SymbolicSet::constant(mgr, true);
  SymbolicSet bot = SymbolicSet::constant(mgr, false);

  SymbolicSet s = (va & !vb) | (vb & !va);
  CHECK((s & top) == s);
  CHECK((s & !s) == bot);
  CHECK((s | !s) == top);
  CHECK((s | bot) == s);
  CHECK(s.implies(s).is_true());
}

TEST_CASE("apply matches truth-table oracle on random 8-bit sets") {
  DdManager mgr;
  for (int i = 0; i < 4; ++i) mgr.add_state_var("v" + std::to_string(i));
  const std::size_t k = 8;
  std::mt19937 rng(12345);
  for (int round = 0; round < 30; ++round) {
    Table ta = random_table(rng, k);
    Table tb = random_table(rng, k);
    NodeId na = from_table(mgr, ta, k);
    NodeId nb = from_table(mgr, tb, k);
    Table got_or = table_of(mgr, mgr.apply(DdManager::Op::And, na, nb), k);
    Table got_and = table_of(mgr, mgr.apply(DdManager::Op::Or, na, nb), k);
    Table got_xor = table_of(mgr, mgr.apply(DdManager::Op::Xor, na, nb), k);
    Table got_imp = table_of(mgr, mgr.apply(DdManager::Op::Implies, na, nb), k);
    for (std::size_t i = 0; i < ta.size(); ++i) {
      REQUIRE(got_or[i] == (ta[i] && tb[i]));
      REQUIRE(got_and[i] == (ta[i] || tb[i]));
      REQUIRE(got_xor[i] == (ta[i] != tb[i]));
      REQUIRE(got_imp[i] == (!ta[i] || tb[i]));
    }
  }
  CHECK(mgr.table_is_canonical());
}

TEST_CASE("canonicity: semantically equal formulas share a handle") {
  DdManager mgr;
  for (int i = 0; i < 6; ++i) mgr.add_state_var("v" + std::to_string(i));
  std::mt19937 rng(777);
  const std::size_t k = 12;
  for (int round = 0; round < 10; ++round) {
    Table t = random_table(rng, k);
    NodeId n1 = from_table(mgr, t, k);
    // Rebuild through a different op sequence: double negation + de Morgan.
    NodeId n2 = mgr.negate(from_table(mgr, t, k));
    n2 = mgr.negate(n2);
    REQUIRE(n1 == n2);
  }
}

TEST_CASE("boolean algebra laws on random sets") {
  DdManager mgr;
  for (int i = 0; i < 4; ++i) mgr.add_state_var("v" + std::to_string(i));
  std::mt19937 rng(999);
  const std::size_t k = 8;
  auto set = [&](const Table& t) {
    return SymbolicSet(&mgr, from_table(mgr, t, k));
  };
  for (int round = 0; round < 20; ++round) {
    SymbolicSet x = set(random_table(rng, k));
    SymbolicSet y = set(random_table(rng, k));
    SymbolicSet z = set(random_table(rng, k));
    CHECK((x & (x | y)) == x);                       // absorption
    CHECK((x | (x & y)) == x);
    CHECK(!(x & y) == (!x | !y));                    // de Morgan
    CHECK((x & (y | z)) == ((x & y) | (x & z)));     // distributivity
  }
}

TEST_CASE("quantification") {
  DdManager mgr;
  Level a = mgr.add_state_var("a");  // levels 0,1
  Level b = mgr.add_state_var("b");  // levels 2,3
  Level c = mgr.add_state_var("c");  // levels 4,5
  GroupId gb = mgr.register_group({b});
  GroupId gall = mgr.register_group({a, b, c});

  SymbolicSet va = SymbolicSet::var(mgr, a);
  SymbolicSet vb = SymbolicSet::var(mgr, b);
  SymbolicSet vc = SymbolicSet::var(mgr, c);

  SECTION("exists over all vars of a nonempty set is true") {
    SymbolicSet s = va & !vb & vc;
    CHECK(s.exists(gall).is_true());
  }
  SECTION("forall of true is true") {
    CHECK(SymbolicSet::constant(mgr, true).forall(gb).is_true());
  }
  SECTION("exists of one bit matches explicit projection") {
    // Enumerate all 8 assignments of (a,b,c) and project b away by hand.
    std::mt19937 rng(4242);
    for (int round = 0; round < 20; ++round) {
      SymbolicSet s = SymbolicSet::constant(mgr, false);
      bool want[2][2] = {{false, false}, {false, false}};  // [a][c]
      for (int ai = 0; ai < 2; ++ai)
        for (int bi = 0; bi < 2; ++bi)
          for (int ci = 0; ci < 2; ++ci) {
            if (rng() & 1) {
              SymbolicSet m = (ai ? va : !va) & (bi ? vb : !vb) & (ci ? vc : !vc);
              s = s | m;
              want[ai][ci] = true;
            }
          }
      SymbolicSet p = s.exists(gb);
      for (int ai = 0; ai < 2; ++ai)
        for (int ci = 0; ci < 2; ++ci) {
          std::vector<bool> asg(6, false);
          asg[a] = ai;
          asg[c] = ci;
          CHECK(p.eval(asg) == want[ai][ci]);
        }
    }
  }
  SECTION("forall is the dual of exists") {
    SymbolicSet s = (va & vb) | (!va & vc);
    CHECK(s.forall(gb) == !((!s).exists(gb)));
  }
}

TEST_CASE("prime_swap") {
  DdManager mgr;
  Level a = mgr.add_state_var("a");
  Level b = mgr.add_state_var("b");
  SymbolicSet va = SymbolicSet::var(mgr, a);
  SymbolicSet vb = SymbolicSet::var(mgr, b);
  SymbolicSet vap = SymbolicSet::var(mgr, DdManager::twin(a));
  SymbolicSet vbp = SymbolicSet::var(mgr, DdManager::twin(b));

  SECTION("constants are fixed points") {
    CHECK(SymbolicSet::constant(mgr, true).prime_swap().is_true());
    CHECK(SymbolicSet::constant(mgr, false).prime_swap().is_false());
  }
  SECTION("2-bit set matches explicit relabeling") {
    SymbolicSet s = (va & !vb) | (!va & vb);
    SymbolicSet expect = (vap & !vbp) | (!vap & vbp);
    CHECK(s.prime_swap() == expect);
  }
  SECTION("involution on random current-bit sets") {
    std::mt19937 rng(31337);
    for (int round = 0; round < 20; ++round) {
      SymbolicSet s = SymbolicSet::constant(mgr, false);
      for (int ai = 0; ai < 2; ++ai)
        for (int bi = 0; bi < 2; ++bi)
          if (rng() & 1) s = s | ((ai ? va : !va) & (bi ? vb : !vb));
      CHECK(s.prime_swap().prime_swap() == s);
    }
  }
  SECTION("mixed polarity is rejected") {
    CHECK_THROWS_AS((va & vbp).prime_swap(), std::logic_error);
  }
}

TEST_CASE("sat_count") {
  DdManager mgr;
  std::vector<Level> lv;
  for (int i = 0; i < 10; ++i) lv.push_back(mgr.add_state_var("v" + std::to_string(i)));
  GroupId g = mgr.register_group(lv);

  CHECK(SymbolicSet::constant(mgr, false).sat_count(g) == 0);
  CHECK(SymbolicSet::constant(mgr, true).sat_count(g) == 1024);

  // Random 10-bit set against direct enumeration.
  std::mt19937 rng(2024);
  SymbolicSet s = SymbolicSet::constant(mgr, false);
  std::uint64_t expect = 0;
  for (int round = 0; round < 64; ++round) {
    std::uint32_t m = rng() & 1023;
    SymbolicSet cube = SymbolicSet::constant(mgr, true);
    for (int i = 0; i < 10; ++i) {
      SymbolicSet lit = ((m >> i) & 1) ? SymbolicSet::var(mgr, lv[i])
                                       : !SymbolicSet::var(mgr, lv[i]);
      cube = cube & lit;
    }
    s = s | cube;
  }
  {
    std::vector<bool> asg(mgr.num_levels(), false);
    for (std::uint32_t m = 0; m < 1024; ++m) {
      for (int i = 0; i < 10; ++i) asg[lv[i]] = (m >> i) & 1;
      if (s.eval(asg)) ++expect;
    }
  }
  CHECK(s.sat_count(g) == expect);

  SECTION("support outside the group is rejected") {
    GroupId half = mgr.register_group({lv[0], lv[1]});
    SymbolicSet dep = SymbolicSet::var(mgr, lv[5]);
    CHECK_THROWS_AS(dep.sat_count(half), std::logic_error);
  }
}

TEST_CASE("manager mismatch is rejected") {
  DdManager m1, m2;
  Level a1 = m1.add_state_var("a");
  Level a2 = m2.add_state_var("a");
  SymbolicSet s1 = SymbolicSet::var(m1, a1);
  SymbolicSet s2 = SymbolicSet::var(m2, a2);
  CHECK_THROWS_AS(s1 & s2, std::logic_error);
}

TEST_CASE("node table never holds a node with equal children") {
  DdManager mgr;
  for (int i = 0; i < 5; ++i) mgr.add_state_var("v" + std::to_string(i));
  std::mt19937 rng(55);
  for (int round = 0; round < 20; ++round) {
    Table t = random_table(rng, 10);
    from_table(mgr, t, 10);
  }
  CHECK(mgr.table_is_canonical());
}
