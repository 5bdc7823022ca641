// Randomized admissible systems for property tests.
#pragma once

#include "rkg/model.hpp"

#include <random>

namespace rkg::testing {

inline Rational random_rational(std::mt19937_64& rng, int span = 9, int max_den = 6) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational random_nonzero(std::mt19937_64& rng) {
  Rational q;
  do q = random_rational(rng);
  while (sgn(q) == 0);
  return q;
}

inline DerivIndex random_jet(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> ord(0, max_order);
  std::uniform_int_distribution<int> ax(0, 2);
  const int n = ord(rng);
  DerivIndex d;
  for (int i = 0; i < n; ++i) d = d.with(kAxes[ax(rng)]);
  return d;
}

/// Null by construction: a random member of the two-parameter family plus
/// strong null pairs and self-interaction terms, all admissible.
inline QuadraticSystem random_null_system(std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  auto maybe = [&]() { return coin(rng) ? random_rational(rng) : Rational(0); };

  NullExampleParams p;
  for (auto& x : p.p) x = maybe();
  for (auto& x : p.r) x = maybe();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a + b == 0) continue;
      p.q[a][b] = maybe();
      p.s[a][b] = maybe();
    }
  QuadraticSystem s = null_example(p);

  s.eq(1) += maybe() * g1_form(u(1), u(2), s.masses);
  s.eq(2) += maybe() * g2_form(u(1), u(1), s.masses);

  const std::array<std::pair<Axis, Axis>, 3> pairs{{{Axis::t, Axis::x1}, {Axis::t, Axis::x2}, {Axis::x1, Axis::x2}}};
  for (auto [a, b] : pairs) {
    s.eq(1) += maybe() * qab_form(a, b, u(1), u(2));
    // Second derivatives on u2 in F1 need their symmetric partner in F2.
    for (Axis c : {Axis::x1, Axis::x2}) {
      const Rational k = maybe();
      s.eq(1) += k * qab_form(a, b, u(1), FieldRef{2, DerivIndex{c}});
      s.eq(2) += k * qab_form(a, b, u(1), FieldRef{1, DerivIndex{c}});
      s.eq(1) += maybe() * qab_form(a, b, FieldRef{1, DerivIndex{c}}, u(2));
    }
  }

  // Self-interaction: first-order products, plus second derivatives where no
  // symmetry partner is involved (u1 in F1, u2 in F2).
  std::uniform_int_distribution<int> nfree(0, 3);
  auto first_order = [&](int comp) { return FieldRef{comp, random_jet(rng, 1)}; };
  auto spatial_second = [&](int comp) {
    std::uniform_int_distribution<int> ax(1, 2);
    return FieldRef{comp, DerivIndex{kAxes[ax(rng)], kAxes[ax(rng)]}};
  };
  for (int i = nfree(rng); i > 0; --i) s.eq(1).add(first_order(1), first_order(1), random_nonzero(rng));
  for (int i = nfree(rng); i > 0; --i) s.eq(1).add(first_order(2), first_order(2), random_nonzero(rng));
  for (int i = nfree(rng); i > 0; --i) s.eq(2).add(first_order(1), first_order(2), random_nonzero(rng));
  for (int i = nfree(rng); i > 0; --i) s.eq(2).add(first_order(2), first_order(2), random_nonzero(rng));
  if (coin(rng)) s.eq(1).add(first_order(1), spatial_second(1), random_nonzero(rng));
  if (coin(rng)) s.eq(2).add(first_order(2), spatial_second(2), random_nonzero(rng));
  return s;
}

/// A null system plus one random first-order cross monomial.
inline QuadraticSystem random_perturbed_system(std::mt19937_64& rng) {
  QuadraticSystem s = random_null_system(rng);
  std::bernoulli_distribution coin(0.5);
  if (coin(rng))
    s.eq(1).add(FieldRef{1, random_jet(rng, 1)}, FieldRef{2, random_jet(rng, 1)}, random_nonzero(rng));
  else
    s.eq(2).add(FieldRef{1, random_jet(rng, 1)}, FieldRef{1, random_jet(rng, 1)}, random_nonzero(rng));
  return s;
}

}  // namespace rkg::testing
