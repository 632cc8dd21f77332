#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "weilinv/arith.hpp"
#include "weilinv/errors.hpp"
#include "weilinv/genus.hpp"
#include "weilinv/weil.hpp"

using namespace weilinv;

namespace {

FiniteQuadraticModule sym(const std::string& s) { return realize(parse_genus_symbol(s)); }

FieldMatrix negation_matrix(const WeilContext& ctx, int eps) {
  FieldMatrix m(ctx.size(), ctx.size(), ctx.ell());
  for (std::size_t x = 0; x < ctx.size(); ++x) m(ctx.negation(x), x) = eps > 0 ? 1 : ctx.field().neg(1);
  return m;
}

// Even-signature modules of level <= 12 for the relation and Galois suites.
std::vector<std::string> small_level_modules(std::size_t count) {
  std::mt19937_64 rng(12);
  std::vector<std::string> out;
  while (out.size() < count) {
    const auto s = oracle::random_symbol(rng, 48, 12);
    if (profile(sym(s)).epsilon) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("w and epsilon") {
  const WeilContext a(sym("2^+2"), 5, 4);
  CHECK(a.w() == 3);
  CHECK(a.epsilon() == 1);

  const WeilContext b(sym("3^+1"), 7);
  const PrimeField& f = b.field();
  const Residue z = b.zeta_field().zeta();
  CHECK(b.w() == f.mul(f.add(1, f.mul(2, z)), f.inv(3)));
  CHECK(b.epsilon() == -1);

  CHECK_THROWS_AS(WeilContext(sym("2_7^+1")), ComputationError);
  CHECK_THROWS_AS(WeilContext(sym("3^+1"), 11), ComputationError);

  for (const auto& s : oracle::corpus()) {
    const auto m = sym(s);
    if (!profile(m).epsilon) continue;
    const WeilContext c(m);
    const WeilContext conj(m, c.ell(), c.field().inv(c.zeta_field().zeta()));
    CHECK(c.field().mul(c.w(), conj.w()) == c.field().inv(c.field().reduce(static_cast<std::int64_t>(m.order()))));
    CHECK(c.epsilon() == *profile(m).epsilon);
  }
}

TEST_CASE("T and S actions") {
  const WeilContext c(sym("3^+1"), 7);
  std::vector<Residue> e1 = {0, 1, 0};
  const auto t = c.apply_T(e1);
  CHECK(t == std::vector<Residue>{0, c.zeta_field().zeta_power(2), 0});
  CHECK(c.apply_T(std::vector<Residue>(3, 0)) == std::vector<Residue>(3, 0));

  const WeilContext h(sym("2^+2"), 5, 4);
  // Index order (0,0),(0,1),(1,0),(1,1).
  const std::vector<Residue> u = {1, 0, 1, 0};
  CHECK(h.apply_S(u) == u);
  const std::vector<Residue> iso = {1, 1, 1, 0};
  CHECK(h.apply_T(iso) == iso);

  const WeilContext triv{FiniteQuadraticModule()};
  CHECK(triv.apply_S(std::vector<Residue>{1}) == std::vector<Residue>{1});
}

TEST_CASE("S matrix matches the direct formula") {
  for (const auto& s : oracle::corpus()) {
    const auto m = sym(s);
    if (!profile(m).epsilon || m.order() > 64) continue;
    const WeilContext c(m);
    const auto ref = oracle::s_matrix(m, c.ell(), c.zeta_field().zeta());
    const auto sm = c.s_matrix();
    for (std::size_t y = 0; y < c.size(); ++y) {
      CHECK(std::vector<std::uint64_t>(sm.row(y).begin(), sm.row(y).end()) == ref[y]);
    }
  }
}

TEST_CASE("chi") {
  const WeilContext a(sym("3^+1"));
  CHECK(a.chi(1) == 1);
  CHECK(a.chi(2) == a.field().neg(1));
  const WeilContext b(sym("5^-1"));
  CHECK(b.chi(2) == b.field().neg(1));
  CHECK_THROWS_AS(b.chi(5), ComputationError);

  for (const auto& s : oracle::corpus()) {
    const auto m = sym(s);
    if (!profile(m).epsilon) continue;
    const WeilContext c(m);
    const auto n = c.level();
    for (std::int64_t d = 1; d < n; ++d) {
      if (arith::gcd(d, n) != 1) continue;
      const Residue x = c.chi(d);
      // A fourth root of unity.
      CHECK(c.field().pow(x, 4) == 1);
      for (std::int64_t e = 1; e < n; ++e) {
        if (arith::gcd(e, n) == 1) CHECK(c.chi(d * e) == c.field().mul(x, c.chi(e)));
      }
      if (m.order() % 2 == 1) {
        CHECK(x == c.field().reduce(arith::jacobi(d, static_cast<std::int64_t>(m.order()))));
      }
    }
  }
}

TEST_CASE("generator words") {
  for (std::int64_t n : {1, 2, 3, 4, 5, 6, 8, 9, 12, 25}) {
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b)
        for (std::int64_t c = 0; c < n; ++c)
          for (std::int64_t d = 0; d < n; ++d) {
            if (arith::mod(a * d - b * c, n) != 1 % n) continue;
            const auto g = GroupElement::make(a, b, c, d, n);
            CHECK(evaluate_word(generator_word(g), n) == g);
          }
  }
  CHECK_THROWS_AS(GroupElement::make(2, 0, 0, 2, 4), ComputationError);
}

TEST_CASE("rho on special elements") {
  for (const auto& s : {"2^+2", "3^-2", "9^+1", "2^+2.3^-2", "4_2^+2", "5^+2", "2_0^+2.4^+2"}) {
    const auto m = sym(s);
    const WeilContext c(m);
    const auto n = c.level();
    CHECK(c.rho_matrix(GroupElement::T(n)) == c.t_matrix());
    CHECK(c.rho_matrix(GroupElement::S(n)) == c.s_matrix());
    CHECK(c.rho_matrix(GroupElement::make(-1, 0, 0, -1, n)) == negation_matrix(c, c.epsilon()));
    // Upper triangular g: chi(d) e(bdQ(x)) e_{dx}.
    for (std::int64_t d = 1; d < n; ++d) {
      if (arith::gcd(d, n) != 1) continue;
      const auto a = static_cast<std::int64_t>(arith::inv_mod(d, static_cast<std::uint64_t>(n)));
      for (std::int64_t b = 0; b < n; ++b) {
        FieldMatrix expect(c.size(), c.size(), c.ell());
        for (std::size_t x = 0; x < c.size(); ++x) {
          const auto dx = c.index_of(m.scale(c.element(x), d));
          expect(dx, x) = c.field().mul(c.chi(d), c.zeta_field().zeta_power(b * d * c.q_value(x)));
        }
        CHECK(c.rho_matrix(GroupElement::make(a, b, 0, d, n)) == expect);
      }
    }
  }
}

TEST_CASE("rho is multiplicative") {
  std::mt19937_64 rng(5);
  for (const auto& s : {"2^+2", "3^-2", "2^+2.3^-2", "4_1^+1.8_1^+1"}) {
    const auto m = sym(s);
    if (!profile(m).epsilon) continue;
    const WeilContext c(m);
    const auto n = c.level();
    auto random_g = [&] {
      while (true) {
        const std::int64_t a = rng() % n, b = rng() % n, cc = rng() % n, d = rng() % n;
        if (arith::mod(a * d - b * cc, n) == 1 % n) return GroupElement::make(a, b, cc, d, n);
      }
    };
    for (int t = 0; t < 10; ++t) {
      const auto g = random_g(), h = random_g();
      CHECK(c.rho_matrix(g * h) == c.rho_matrix(g) * c.rho_matrix(h));
    }
  }
}

TEST_CASE("SL2 relations at levels <= 12") {
  const auto modules = small_level_modules(100);
  for (const auto& s : modules) {
    CAPTURE(s);
    const WeilContext c(sym(s));
    const auto sm = c.s_matrix(), tm = c.t_matrix();
    const auto s2 = sm * sm;
    CHECK(s2 * s2 == FieldMatrix::identity(c.size(), c.ell()));
    CHECK(s2 == negation_matrix(c, c.epsilon()));
    const auto st = sm * tm;
    CHECK(st * st * st == s2);
  }
}

TEST_CASE("Galois equivariance at levels <= 12") {
  std::size_t cases = 0;
  for (const auto& s : small_level_modules(30)) {
    CAPTURE(s);
    const auto m = sym(s);
    const WeilContext c(m);
    const auto n = c.level();
    const GroupElement gens[] = {GroupElement::S(n), GroupElement::T(n), GroupElement::S(n) * GroupElement::T(n)};
    for (std::int64_t u = 1; u <= n; ++u) {
      if (arith::gcd(u, n) != 1) continue;
      const WeilContext twisted(m, c.ell(), c.zeta_field().zeta_power(u));
      const auto ui = static_cast<std::int64_t>(arith::inv_mod(u, static_cast<std::uint64_t>(n)));
      for (const auto& g : gens) {
        const auto h = GroupElement::make(g.a, u * g.b, ui * g.c, g.d, n);
        CHECK(twisted.rho_matrix(g) == c.rho_matrix(h));
        ++cases;
      }
    }
  }
  CHECK(cases >= 100);
}
