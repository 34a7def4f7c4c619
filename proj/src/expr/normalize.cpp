#include "expr/expr.hpp"
#include "expr/ratfn.hpp"

namespace pss {

Expr normalize(const Expr& e) { return rf::ratfn_to_expr(rf::to_ratfn(e)); }

bool is_zero(const Expr& e) { return rf::to_ratfn(e).num.is_zero(); }

bool equal_normalized(const Expr& a, const Expr& b) { return is_zero(a - b); }

}  // namespace pss
