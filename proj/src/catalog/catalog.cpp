#include "catalog/catalog.hpp"

#include <sstream>

namespace pss {

namespace {

struct Ctx {
  const ParamMap& p;

  Expr operator()(const std::string& src) const {
    Expr e = parse_expr(src);
    std::map<Sym, Expr> sub;
    for (const auto& [n, v] : p) sub.emplace(Sym::param(n), Expr::constant(v));
    return substitute(e, sub);
  }

  Rational at(const std::string& n) const {
    auto it = p.find(n);
    if (it == p.end()) raise(Errc::domain_violation, "missing parameter " + n);
    return it->second;
  }

  void require(bool ok, const std::string& constraint) const {
    if (!ok) raise(Errc::domain_violation, "parameter constraint violated: " + constraint);
  }

  int sign_of(const std::string& n) const {
    Rational v = at(n);
    require(v == 1 || v == -1, n + " in {-1, +1}");
    return v == 1 ? 1 : -1;
  }

  long long int_of(const std::string& n) const {
    Rational v = at(n);
    require(denominator(v) == 1, n + " must be an integer");
    return numerator(v).convert_to<long long>();
  }
};

Expr zpow(long long e) { return Expr::pow(ex_jet(0, 0), static_cast<int>(e)); }

EvolutionRelation relation_from(const PdeCoeffs& c) {
  return EvolutionRelation(kZtt, c.A * ex_sym(kZxx) + c.B * ex_sym(kZxt) + c.C);
}

std::vector<Fixture> make_catalog() {
  std::vector<Fixture> fs;

  fs.push_back(Fixture{
      "sine-gordon", "sine-Gordon equation z_xt = sin z", FixtureClass::generic_zcr, true,
      {{"eta", 1, "nonzero"}},
      [](const ParamMap& p) {
        Ctx c{p};
        c.require(c.at("eta") != 0, "eta nonzero");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(Expr(), c("sin(z)/eta"), c("eta"), c("cos(z)/eta"),
                                 ex_sym(kZx), Expr(), 1);
        out.relation = EvolutionRelation(kZxt, parse_expr("sin(z)"));
        return out;
      }});

  fs.push_back(Fixture{
      "kdv", "KdV equation z_t = z_xxx + 6 z z_x", FixtureClass::generic_zcr, true,
      {{"eta", 1, "real"}},
      [](const ParamMap& p) {
        Ctx c{p};
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(
            c("1 - z"), c("-z_xx + eta*z_x - eta^2*z - 2*z^2 + eta^2 + 2*z"), c("eta"),
            c("eta^3 + 2*eta*z - 2*z_x"), c("-(1+z)"),
            c("-z_xx + eta*z_x - eta^2*z - 2*z^2 - eta^2 - 2*z"), 1);
        out.relation = EvolutionRelation(kZt, parse_expr("z_xxx + 6*z*z_x"));
        return out;
      }});

  fs.push_back(Fixture{
      "gca", "generalized constant astigmatism equation", FixtureClass::form_1_1, true,
      {{"m", 1, "real"}, {"eta", 1, "nonzero"}, {"delta", 1, "in {-1,+1}, eta^2+delta > 0"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("eta") != 0, "eta nonzero");
        c.require(c.at("eta") * c.at("eta") + delta > 0, "eta^2 + delta > 0");
        FixtureInstance out;
        out.params = p;
        std::vector<Assumption> assume = {parse_assumption("z > 0"),
                                          parse_assumption("z - m > 0")};
        for (auto& a : assume) a.expr = c(to_string(a.expr));
        out.sextet = make_sextet(
            c("(eta*z*z_t + sqrt(eta^2+delta)*z_x)/(2*sqrt(z*(z-m)))"),
            c("(eta*z_x + sqrt(eta^2+delta)*z*z_t)/(2*sqrt(z*(z-m))*z)"),
            c("sqrt(z*(eta^2+delta))"), c("eta/sqrt(z)"), c("sqrt(z-m)"), Expr(), delta,
            assume);
        PdeCoeffs coeffs{c("1/z^2"), Expr(),
                         c("-(4*z-3*m)/(2*(z-m)*z^3)*z_x^2 + m/(2*(z-m)*z)*z_t^2 - 2 + 2*m/z"),
                         delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = c("sqrt(z*(eta^2+delta))");
        fam.psi22 = c("eta/sqrt(z)");
        fam.psi31 = c("sqrt(z-m)");
        fam.psi32 = Expr();
        fam.delta = delta;
        fam.assumptions = assume;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "ca-marvan", "constant astigmatism equation, alternative linear problem",
      FixtureClass::form_1_1, true,
      {{"lambda", 2, "lambda^2 + lambda > 0"}},
      [](const ParamMap& p) {
        Ctx c{p};
        Rational l = c.at("lambda");
        c.require(l * l + l > 0, "lambda^2 + lambda > 0");
        FixtureInstance out;
        out.params = p;
        std::vector<Assumption> assume = {parse_assumption("z > 0")};
        // z^lambda on z > 0 via exp(lambda ln z)
        auto zp = [&](const std::string& e) { return "exp((" + e + ")*ln(z))"; };
        std::string r = "sqrt(lambda^2+lambda)";
        out.sextet = make_sextet(
            c(r + "*z_t"), c(r + "*z_x/z^2"),
            c("(lambda+1)*" + zp("-lambda") + " + lambda*" + zp("lambda+1")),
            c(r + "*(" + zp("-lambda-1") + " + " + zp("lambda") + ")"),
            c("(lambda+1)*" + zp("-lambda") + " - lambda*" + zp("lambda+1")),
            c(r + "*(" + zp("-lambda-1") + " - " + zp("lambda") + ")"), 1, assume);
        PdeCoeffs coeffs{c("1/z^2"), Expr(), c("-2*z_x^2/z^3 - 2"), 1};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = out.sextet.f21();
        fam.psi22 = out.sextet.f22();
        fam.psi31 = out.sextet.f31();
        fam.psi32 = out.sextet.f32();
        fam.delta = 1;
        fam.assumptions = assume;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "gsp", "generalized short-pulse equation", FixtureClass::form_1_1, true,
      {{"lambda", 1, "nonzero"}, {"m", 1, "real"}, {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("lambda") != 0, "lambda in R - {0}");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(c("(lambda/2)*delta*(z^2+m)*z_t"), c("lambda*z_t"),
                                 c("(delta*lambda/2)*(z^2+m) + 1/lambda"), c("lambda"),
                                 c("delta*z"), Expr(), delta);
        PdeCoeffs coeffs{Expr(), c("2*delta/(z^2+m)"), c("-2*z/(z^2+m)*(z_t^2+1)"), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = c("(1/2)*delta*lambda*(z^2+m) + 1/lambda");
        fam.psi22 = c("lambda");
        fam.psi31 = c("delta*z");
        fam.psi32 = Expr();
        fam.delta = delta;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "power-transport", "power-law transport equation z_tt = m^2 z_xx + m p z^{p-1} z_x - p z^{p-1} z_t",
      FixtureClass::form_1_1, true,
      {{"p", 2, "integer"},
       {"m", 1, "nonzero"},
       {"lambda", 1, "nonzero"},
       {"eta", 1, "nonzero"},
       {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        long long pe = c.int_of("p");
        c.require(c.at("m") != 0, "m in R - {0}");
        c.require(c.at("lambda") != 0, "lambda in R - {0}");
        c.require(c.at("eta") != 0, "eta in R - {0}");
        FixtureInstance out;
        out.params = p;
        Expr zp = zpow(pe);
        Expr zp1 = zpow(pe - 1);
        Expr m = Expr::constant(c.at("m")), lam = Expr::constant(c.at("lambda"));
        Expr pp = Expr::integer(pe);
        Expr h = c("lambda*z_t + lambda*(m - 1/(lambda^2*z^2-delta))*z_x") + lam * zp;
        Expr f21 = c("eta/sqrt(lambda^2*z^2 - delta)");
        out.sextet = make_sextet(
            h,
            c("lambda*(m - 1/(lambda^2*z^2-delta))*z_t + lambda*m^2*z_x") + lam * m * zp,
            f21, m * f21, c("lambda*z") * f21, c("lambda*m*z") * f21, delta);
        PdeCoeffs coeffs{m * m, Expr(),
                         m * pp * zp1 * ex_sym(kZx) - pp * zp1 * ex_sym(kZt), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor34 fam;
        fam.h = h;
        fam.rho = c("lambda*z");
        fam.m = m;
        fam.eta = Expr::constant(c.at("eta"));
        fam.delta = delta;
        fam.sign = 1;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "z4-ss", "quartic equation z_tt = z^4 z_xx + 2 z^3 z_x^2 + 2 z_t^2/z - delta m^2 z",
      FixtureClass::form_1_1, true,
      {{"m", 1, "nonzero"}, {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("m") != 0, "m in R - {0}");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(c("delta/m*(z_t/z^2 + z_x)"), c("delta/m*(z_t + z^2*z_x)"),
                                 Expr(), c("m"), c("1/z"), c("z"), delta);
        PdeCoeffs coeffs{c("z^4"), Expr(), c("2*z^3*z_x^2 + 2*z_t^2/z - delta*m^2*z"), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = Expr();
        fam.psi22 = c("m");
        fam.psi31 = c("1/z");
        fam.psi32 = c("z");
        fam.delta = delta;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "zxt-family", "equation z_tt = z z_xt - z_x z_t + 2 z_t^2/z - delta m^2 z",
      FixtureClass::form_1_1, true,
      {{"m", 1, "nonzero"}, {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("m") != 0, "m in R - {0}");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(c("delta/(m*z^2)*z_t"), c("delta/(m*z)*z_t"), Expr(), c("m"),
                                 c("1/z"), c("1"), delta);
        PdeCoeffs coeffs{Expr(), c("z"), c("-z_x*z_t + 2*z_t^2/z - delta*m^2*z"), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = Expr();
        fam.psi22 = c("m");
        fam.psi31 = c("1/z");
        fam.psi32 = c("1");
        fam.delta = delta;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "ell-wave", "wave equation with transported flux, ell = z^2, rho = z",
      FixtureClass::form_1_1, true,
      {{"m", 1, "nonzero"},
       {"lambda", 1, "nonzero"},
       {"eta", 1, "nonzero"},
       {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("m") != 0, "m in R - {0}");
        c.require(c.at("lambda") != 0, "lambda in R - {0}");
        c.require(c.at("eta") != 0, "eta in R - {0}");
        FixtureInstance out;
        out.params = p;
        Expr h = c("lambda*z_t + (m*lambda - 1/(z^2-delta) - 2*lambda*z)*z_x");
        Expr f21 = c("eta/sqrt(z^2 - delta)");
        out.sextet = make_sextet(
            h, c("lambda*m*(m-2*z)*z_x + (m*lambda - 1/(z^2-delta))*z_t"), f21,
            c("m") * f21, c("z") * f21, c("m*z") * f21, delta);
        PdeCoeffs coeffs{c("m*(m-2*z)"), c("2*z"), c("-2*m*z_x^2 + 2*z_x*z_t"), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor34 fam;
        fam.h = h;
        fam.rho = ex_jet(0, 0);
        fam.m = c("m");
        fam.eta = c("eta");
        fam.delta = delta;
        fam.sign = 1;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "alpha-ell", "conservation-form equation z_tt = (alpha z_x)_x + (ell z_x)_t at alpha = 1, ell = z",
      FixtureClass::form_1_1, true,
      {},
      [](const ParamMap& p) {
        Ctx c{p};
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(c("-2*z_t"), c("-2*z*z_t - 2*z_x"), c("z"), c("z^2 + 1/2"),
                                 c("z"), c("z^2 + 1/2"), 1);
        PdeCoeffs coeffs{c("1"), c("z"), c("z_x*z_t"), 1};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor35 fam;
        fam.h = c("-2*z_t");
        fam.psi = c("z");
        fam.chi = c("z^2 + 1/2");
        fam.sign = 1;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "pq-family", "two-exponent power family", FixtureClass::form_1_1, true,
      {{"p", 2, "integer"},
       {"q", 1, "nonzero integer"},
       {"m", 1, "nonzero"},
       {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        long long pe = c.int_of("p"), qe = c.int_of("q");
        c.require(qe != 0, "q != 0");
        c.require(c.at("m") != 0, "m in R - {0}");
        FixtureInstance out;
        out.params = p;
        Expr m = Expr::constant(c.at("m"));
        Expr d = Expr::integer(delta);
        Expr zx = ex_sym(kZx), zt = ex_sym(kZt);
        out.sextet = make_sextet(
            d / m * (Expr::integer(pe) * zpow(pe - 1) * zx - Expr::integer(qe) * zpow(qe - 1) * zt),
            d / m *
                (Expr::integer(pe) * zpow(2 * pe - qe - 1) * zx -
                 Expr::integer(qe) * zpow(pe - 1) * zt),
            Expr(), m, zpow(qe), zpow(pe), delta);
        Rational pq(pe, qe);
        PdeCoeffs coeffs;
        coeffs.delta = delta;
        coeffs.A = Expr::constant(-pq) * zpow(2 * (pe - qe));
        coeffs.B = Expr::constant(pq + 1) * zpow(pe - qe);
        coeffs.C = Expr::constant(-pq * (2 * pe - qe - 1)) * zpow(2 * (pe - qe) - 1) * zx * zx +
                   Expr::constant(Rational((pe - 1) * (pe + qe), qe)) * zpow(pe - qe - 1) * zx * zt -
                   Expr::integer(qe - 1) * zt * zt / ex_jet(0, 0) +
                   d * m * m / Expr::integer(qe) * ex_jet(0, 0);
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = Expr();
        fam.psi22 = m;
        fam.psi31 = zpow(qe);
        fam.psi32 = zpow(pe);
        fam.delta = delta;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "astig-cubic", "cubic-coefficient equation from the astigmatism family",
      FixtureClass::form_1_1, true,
      {{"m", 1, "real"}, {"m2", 3, "m2 != 2m"}, {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("m2") != 2 * c.at("m"), "m2 != 2m");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(
            c("-1/(m2-2*m)*(z*z_x + z_t)"), c("(-z/2 + m/z)*(-1/(m2-2*m))*(z*z_x + z_t)"),
            c("z"), c("-z^2/2 + 2*delta*m2 - (4*delta-1)*m"), c("2*z"), c("-z^2 + m2"), delta);
        PdeCoeffs coeffs{
            c("-z^2/2 + m"), c("-3*z/2 + m/z"),
            c("(-3/2 - m/z^2)*z_t*z_x - z*z_x^2 + (4*delta-1)*(m2-2*m)^2*z"), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor33 fam;
        fam.psi21 = c("z");
        fam.psi22 = c("-z^2/2 + 2*delta*m2 - (4*delta-1)*m");
        fam.psi31 = c("2*z");
        fam.psi32 = c("-z^2 + m2");
        fam.delta = delta;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "m1m2", "bidirectional transport equation, ell = z", FixtureClass::form_1_1, true,
      {{"m1", 2, "real"}, {"m2", 1, "real"}, {"eta", 1, "nonzero"}},
      [](const ParamMap& p) {
        Ctx c{p};
        c.require(c.at("eta") != 0, "eta in R - {0}");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(c("z_t + (m2 + 1/z)*z_x + z"),
                                 c("m1*m2*z_x + (m1 + 1/z)*z_t + m1*z"), c("eta*z"),
                                 c("eta*m1*z"), c("eta*z"), c("eta*m1*z"), 1);
        PdeCoeffs coeffs{c("m1*m2"), c("m1 - m2"), c("m1*z_x - z_t"), 1};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        Cor35 fam;
        fam.h = c("z_t + (m2 + 1/z)*z_x + z");
        fam.psi = c("eta*z");
        fam.chi = c("eta*m1*z");
        fam.sign = 1;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "rational-ss", "fully rational example from the general case (a)",
      FixtureClass::form_1_1, true,
      {{"eta", 1, "nonzero"}, {"delta", 1, "in {-1,+1}"}},
      [](const ParamMap& p) {
        Ctx c{p};
        int delta = c.sign_of("delta");
        c.require(c.at("eta") != 0, "eta in R - {0}");
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(c("delta*eta*z*z_t/(z_x - z*z_t)"),
                                 c("delta*eta*z_t/(z_x - z*z_t)"), ex_sym(kZx), ex_sym(kZt),
                                 c("eta*z"), c("eta"), delta);
        PdeCoeffs coeffs{c("-z_t/(z*z_x)"), c("(z*z_t + z_x)/(z*z_x)"),
                         c("delta*(z_x - z*z_t)^3/(z*z_x)"), delta};
        out.stated_coeffs = coeffs;
        out.relation = relation_from(coeffs);
        CaseA fam;
        fam.phi = c("1");
        fam.varphi = Expr();
        fam.psi21 = Expr();
        fam.psi22 = Expr();
        fam.psi31 = c("eta*z");
        fam.psi32 = c("eta");
        fam.delta = delta;
        out.family = fam;
        return out;
      }});

  fs.push_back(Fixture{
      "camassa-holm", "Camassa-Holm equation (third-order relation)",
      FixtureClass::generic_zcr, /*in_default_acceptance=*/false,
      {{"m", 1, "real"}, {"eta", 1, "real"}},
      [](const ParamMap& p) {
        Ctx c{p};
        FixtureInstance out;
        out.params = p;
        out.sextet = make_sextet(
            c("z - z_xx + (m+eta^2)/2 - 1"),
            c("-z*(z - z_xx + (m+eta^2)/2) + eta*z_x - (m+eta^2)/2 + 1"), c("eta"),
            c("-eta*z + z_x - eta"), c("z - z_xx + (m+eta^2)/2"),
            c("-z*(z - z_xx + (m+eta^2)/2) + eta*z_x - z - (m+eta^2)/2"), 1);
        out.relation = EvolutionRelation(
            Sym::jet(2, 1), c("z_t - z*z_xxx - 2*z_x*z_xx + 3*z*z_x + m*z_x"));
        return out;
      }});

  return fs;
}

}  // namespace

const std::vector<Fixture>& catalog() {
  static const std::vector<Fixture> fs = make_catalog();
  return fs;
}

std::vector<std::string> list_catalog() {
  std::vector<std::string> names;
  for (const Fixture& f : catalog()) names.push_back(f.name);
  return names;
}

const Fixture& find_fixture(const std::string& name) {
  for (const Fixture& f : catalog())
    if (f.name == name) return f;
  raise(Errc::domain_violation, "unknown fixture: " + name);
}

ParamMap fixture_defaults(const std::string& name) {
  const Fixture& f = find_fixture(name);
  ParamMap out;
  for (const ParamSpec& ps : f.params) out.emplace(ps.name, ps.default_value);
  return out;
}

FixtureInstance instantiate_fixture(const std::string& name, const ParamMap& params) {
  const Fixture& f = find_fixture(name);
  ParamMap merged = fixture_defaults(name);
  for (const auto& [k, v] : params) {
    if (!merged.count(k))
      raise(Errc::domain_violation, "unknown parameter " + k + " for fixture " + name);
    merged[k] = v;
  }
  return f.make(merged);
}

}  // namespace pss
