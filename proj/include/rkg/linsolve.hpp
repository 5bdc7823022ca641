// Exact span membership over sparse rational vectors.
//
// Columns are inserted in a fixed order; a column that is dependent on earlier
// ones is recorded but never becomes a pivot, so the solution of a consistent
// system is expressed in the earliest independent columns. This makes
// certificates reproducible.
#pragma once

#include "rkg/rational.hpp"

#include <map>
#include <vector>

namespace rkg {

template <class Key>
class ExactSpan {
 public:
  using Vec = std::map<Key, Rational>;
  using Combo = std::map<int, Rational>;

  struct Solution {
    bool feasible = false;
    Combo x;       // column index -> coefficient
    Vec residual;  // component of the target outside the span
  };

  /// Returns the column index.
  int add_column(const Vec& column) {
    const int idx = columns_++;
    Vec v = column;
    Combo combo{{idx, Rational(1)}};
    reduce(v, combo);
    if (!v.empty()) {
      Basis b;
      b.pivot = v.begin()->first;
      b.vec = std::move(v);
      b.combo = std::move(combo);
      basis_.push_back(std::move(b));
    }
    return idx;
  }

  int columns() const { return columns_; }
  int rank() const { return static_cast<int>(basis_.size()); }

  Solution solve(const Vec& target) const {
    Solution s;
    Vec v = target;
    Combo combo;
    reduce(v, combo);
    s.feasible = v.empty();
    s.residual = std::move(v);
    // reduce() subtracts; the representation of the target is the negation.
    for (auto& [i, c] : combo) s.x[i] = -c;
    return s;
  }

 private:
  struct Basis {
    Key pivot;
    Vec vec;
    Combo combo;
  };

  static void axpy(Vec& v, const Vec& b, const Rational& f) {
    for (const auto& [k, c] : b) {
      auto [it, inserted] = v.try_emplace(k, Rational(-f * c));
      if (!inserted) {
        it->second -= f * c;
        if (sgn(it->second) == 0) v.erase(it);
      }
    }
  }

  static void axpy(Combo& v, const Combo& b, const Rational& f) {
    for (const auto& [k, c] : b) {
      auto [it, inserted] = v.try_emplace(k, Rational(-f * c));
      if (!inserted) {
        it->second -= f * c;
        if (sgn(it->second) == 0) v.erase(it);
      }
    }
  }

  // Each basis vector is zero at the pivots of all earlier ones, so a single
  // ordered pass clears every pivot.
  void reduce(Vec& v, Combo& combo) const {
    for (const auto& b : basis_) {
      auto it = v.find(b.pivot);
      if (it == v.end()) continue;
      Rational f = it->second / b.vec.at(b.pivot);
      axpy(v, b.vec, f);
      axpy(combo, b.combo, f);
    }
  }

  std::vector<Basis> basis_;
  int columns_ = 0;
};

}  // namespace rkg
