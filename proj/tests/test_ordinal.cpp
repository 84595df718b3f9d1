#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "epsforge/index.hpp"
#include "epsforge/ordinal.hpp"
#include "ordinal_oracle.hpp"

using namespace epsforge;

namespace {
Ordinal w() { return Ordinal::omega(); }
Ordinal fin(uint64_t n) { return Ordinal::finite(n); }
}  // namespace

TEST_CASE("comparison basics") {
  CHECK(ord_cmp(w(), w()) == 0);
  CHECK(ord_cmp(oracle::mul_nat(w(), 5), omega_pow(w())) < 0);  // w*5 < w^w
  Ordinal w2_2_1 = ord_add(Ordinal::single(fin(2), 2), fin(1));
  Ordinal w2_2 = Ordinal::single(fin(2), 2);
  CHECK(ord_cmp(w2_2_1, w2_2) > 0);
  CHECK(fin(0).is_zero());
  CHECK(fin(3) < w());
}

TEST_CASE("addition") {
  // w*2 + 1, then + w absorbs the finite tail: w*3
  Ordinal a = ord_add(Ordinal::single(fin(1), 2), fin(1));
  CHECK(ord_add(a, w()) == Ordinal::single(fin(1), 3));
  CHECK(ord_add(a, w()) == oracle::add(a, w()));
  CHECK(ord_add(fin(2), fin(3)) == fin(5));
  CHECK(ord_add(Ordinal(), w()) == w());
  CHECK(ord_add(w(), Ordinal()) == w());
}

TEST_CASE("omega and two powers") {
  CHECK(omega_pow(fin(0)) == fin(1));
  CHECK(omega_pow(fin(1)) == w());
  CHECK(two_pow(w()) == w());
  // 2^(w*2+3) = w^2*8
  Ordinal a = ord_add(Ordinal::single(fin(1), 2), fin(3));
  CHECK(two_pow(a) == Ordinal::single(fin(2), 8));
  CHECK(two_pow(a) == oracle::two_pow(a));
  for (uint64_t n = 0; n <= 10; ++n) CHECK(two_pow(fin(n)) == fin(uint64_t{1} << n));
  CHECK_THROWS_AS(two_pow(fin(100)), OrdinalOverflow);
}

TEST_CASE("base omega-plus-one powers") {
  CHECK(omega_plus_one_pow(0) == fin(1));
  // (w+1)^2 = w^2 + w + 1
  Ordinal expected = ord_add(ord_add(Ordinal::single(fin(2), 1), w()), fin(1));
  CHECK(omega_plus_one_pow(2) == expected);
  for (uint64_t i = 0; i <= 6; ++i)
    CHECK(omega_plus_one_pow(i) == oracle::pow_nat(oracle::omega_plus_one(), i));
}

TEST_CASE("towers") {
  CHECK(tower(0) == fin(1));
  CHECK(tower(1) == w());
  CHECK(tower(2) == omega_pow(w()));
  CHECK(tower(3) == omega_pow(omega_pow(w())));
  CHECK_THROWS_AS(tower(kTowerCap + 1), OrdinalOverflow);
}

TEST_CASE("display syntax") {
  CHECK(Ordinal().display() == "0");
  CHECK(fin(7).display() == "7");
  CHECK(w().display() == "w");
  CHECK(Ordinal::single(fin(1), 3).display() == "w*3");
  Ordinal a = ord_add(ord_add(Ordinal::single(w(), 1), Ordinal::single(fin(2), 2)), fin(1));
  CHECK(a.display() == "w^(w) + w^(2)*2 + 1");
}

TEST_CASE("fuzz: order axioms and monotonicity") {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = oracle::random_ordinal(rng);
    Ordinal b = oracle::random_ordinal(rng);
    Ordinal c = oracle::random_ordinal(rng);
    // trichotomy
    int ab = ord_cmp(a, b);
    CHECK(((ab < 0) + (ab == 0) + (ab > 0)) == 1);
    CHECK(ab == -ord_cmp(b, a));
    // transitivity
    if (ord_cmp(a, b) <= 0 && ord_cmp(b, c) <= 0) CHECK(ord_cmp(a, c) <= 0);
    // associativity of addition, against the oracle as well
    CHECK(ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c)));
    CHECK(ord_add(a, b) == oracle::add(a, b));
    // strict monotonicity of the exponentials
    if (ab < 0) {
      CHECK(omega_pow(a) < omega_pow(b));
      try {
        Ordinal ta = two_pow(a), tb = two_pow(b);
        CHECK(ta < tb);
      } catch (const OrdinalOverflow&) {
      }
    }
    // left addend never exceeds the sum
    CHECK(a <= ord_add(a, b));
  }
}

TEST_CASE("fuzz: two_pow against the oracle") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = oracle::random_ordinal(rng);
    try {
      CHECK(two_pow(a) == oracle::two_pow(a));
    } catch (const OrdinalOverflow&) {
    }
  }
}

TEST_CASE("index vectors: order matches positional ordinal value") {
  // coords (phi0, phi1) = (w, 2): ordinal (w+1)*2 + w = w*3
  IndexVector iv;
  iv.coords = {IndexCoord{true, 0}, IndexCoord{false, 2}};
  CHECK(index_ordinal(iv) == Ordinal::single(Ordinal::finite(1), 3));
  CHECK(index_ordinal(zero_index(4)).is_zero());

  std::mt19937_64 rng(5150);
  auto random_vec = [&](std::size_t n) {
    IndexVector v;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 4 == 0)
        v.coords.push_back(IndexCoord{true, 0});
      else
        v.coords.push_back(IndexCoord{false, rng() % 9});
    }
    return v;
  };
  for (int i = 0; i < 10000; ++i) {
    std::size_t n = 1 + rng() % 5;
    IndexVector a = random_vec(n), b = random_vec(n);
    int lex = iv_cmp(a, b);
    int ord = ord_cmp(index_ordinal(a), index_ordinal(b));
    CHECK(lex == ord);
  }
}

TEST_CASE("index ordinal against oracle positional sum") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    std::size_t n = 1 + rng() % 5;
    IndexVector v;
    for (std::size_t j = 0; j < n; ++j)
      v.coords.push_back(rng() % 4 == 0 ? IndexCoord{true, 0} : IndexCoord{false, rng() % 9});
    Ordinal expect;
    for (std::size_t j = n; j-- > 0;) {
      Ordinal phi = v.coords[j].is_omega ? Ordinal::omega() : Ordinal::finite(v.coords[j].n);
      expect = oracle::add(expect, oracle::mul(oracle::pow_nat(oracle::omega_plus_one(), j), phi));
    }
    CHECK(index_ordinal(v) == expect);
  }
}
