#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expr/expr.hpp"

namespace pss {

// Deterministic generator (splitmix64) so seeded reports are byte-identical
// across platforms; std:: distributions are not guaranteed reproducible.
class Rng {
public:
  explicit Rng(uint64_t seed) : s_(seed) {}
  uint64_t next() {
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

private:
  uint64_t s_;
};

enum class AssumeKind { positive, nonzero };

struct Assumption {
  Expr expr;
  AssumeKind kind = AssumeKind::nonzero;
  std::string text;
};

// "expr > 0" or "expr != 0"
Assumption parse_assumption(const std::string& s);
std::string assumption_text(const Assumption& a);

struct SamplerOptions {
  double lo = -2.0;
  double hi = 2.0;
  double den_floor = 1e-3;
  double margin = 1e-3;
  int max_tries = 1000;
};

// Uniform draw over [lo,hi]^n, resampled until every guard expression
// evaluates cleanly (denominators above den_floor, domains respected) and all
// assumptions hold with margin. Pre-bound symbols live in `base`.
Binding sample_admissible(const std::vector<Sym>& vars, const std::vector<Expr>& guards,
                          const std::vector<Assumption>& assumptions, Rng& rng,
                          const Binding& base = {}, const SamplerOptions& opt = {});

// Free jet coordinates of a set of expressions, sorted.
std::vector<Sym> jet_vars_of(const std::vector<Expr>& exprs);

}  // namespace pss
