#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "normaudit/audit.hpp"
#include "normaudit/catalog.hpp"
#include "normaudit/dsl.hpp"
#include "normaudit/rng.hpp"
#include "support/ast_gen.hpp"

using namespace normaudit;
using namespace normaudit::dsl;
using normaudit::testing::random_ast;

namespace {

double eval(const std::string& src, std::map<std::string, double> bindings = {}) {
  return eval_expr(*parse_expr(src), bindings);
}

std::filesystem::path write_temp_spec(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("parser: precedence and associativity") {
  CHECK(eval("1 + 2*3") == 7.0);
  CHECK(eval("2 - 3 - 4") == -5.0);      // left associative
  CHECK(eval("24 / 4 / 2") == 3.0);      // left associative
  CHECK(eval("2 ^ 3 ^ 2") == 512.0);     // right associative
  CHECK(eval("-x^2", {{"x", 3.0}}) == -9.0);  // negation binds looser than ^
  CHECK(eval("(1 + 2) * 3") == 9.0);
  CHECK(eval("2^-1") == 0.5);
  CHECK(eval("log(exp(2))") == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(eval("logsumexp(0, 1, 2)") == doctest::Approx(2.40760596444438030).epsilon(1e-14));
  CHECK(eval("1.5e2 + .5") == 150.5);
}

TEST_CASE("parser: errors carry byte offsets") {
  try {
    parse_expr("1 + * 2");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }

  try {
    parse_expr("2 * foo(1)");
    FAIL("expected UnknownFunctionError");
  } catch (const UnknownFunctionError& e) {
    CHECK(e.offset() == 4);
  }

  try {
    parse_expr("1 + exp(1, 2)");
    FAIL("expected ArityError");
  } catch (const ArityError& e) {
    CHECK(e.offset() == 4);
  }

  try {
    parse_expr("exp(2");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);  // clamped to the last byte of the text
  }

  CHECK_THROWS_AS(parse_expr(""), SyntaxError);
  CHECK_THROWS_AS(parse_expr("1 @ 2"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("1 2"), SyntaxError);
}

TEST_CASE("eval: unbound identifiers and domain errors") {
  CHECK_THROWS_AS(eval("x + 1"), UnboundIdentifierError);
  CHECK_THROWS_AS(eval("x/y", {{"x", 1.0}, {"y", 0.0}}), DomainError);
  CHECK_THROWS_AS(eval("log(0 - 1)"), DomainError);
  CHECK_THROWS_AS(eval("sqrt(0 - 4)"), DomainError);
  CHECK_THROWS_AS(eval("arccos(2)"), DomainError);
}

TEST_CASE("parse -> print -> parse reaches a fixpoint") {
  Rng rng(31337);
  for (int k = 0; k < 1000; ++k) {
    const ExprPtr ast = random_ast(rng, 1 + static_cast<int>(rng.next_u64() % 6));
    const std::string printed = print_expr(*ast);
    const ExprPtr reparsed = parse_expr(printed);
    INFO("printed form: ", printed);
    REQUIRE(expr_equal(*ast, *reparsed));
    CHECK(print_expr(*reparsed) == printed);
  }
}

TEST_CASE("DSL re-expressions match the catalog implementations") {
  const BinaryChoiceModel m{{0.2, 0.3}, DistHandle::logistic(0, 1)};
  const std::map<std::string, double> bindings{
      {"b1", 0.2}, {"b2", 0.3}, {"x2", 1.0}, {"x2p", 2.0},
      {"eps_loc", 0.0}, {"eps_scale", 1.0}};

  const double me = eval(
      "logistic_pdf((b1 + b2*x2 - eps_loc) / eps_scale) / eps_scale * b2", bindings);
  CHECK(me == doctest::Approx(binary_marginal_effect(m, std::vector{1.0, 1.0}, 2))
                  .epsilon(1e-12));

  const double prob = eval("logistic_cdf((b1 + b2*x2 - eps_loc) / eps_scale)", bindings);
  CHECK(prob == doctest::Approx(binary_choice_prob(m, std::vector{1.0, 1.0})).epsilon(1e-12));

  const double pct = eval("(b2*(x2p - x2)) / (b1 + b2*x2)", bindings);
  CHECK(pct == doctest::Approx(binary_pct_welfare(m, std::vector{1.0, 1.0},
                                                  std::vector{1.0, 2.0}))
                   .epsilon(1e-12));

  const LogitDemandModel logit{{0.0, 1.0, 2.0}, 2.0, 1.0, 0.0};
  const double dcs = eval(
      "(mu/alpha) * (logsumexp(dp0/mu, dp1/mu, dp2/mu) - logsumexp(d0/mu, d1/mu, d2/mu))",
      {{"mu", 1.0}, {"alpha", 2.0}, {"d0", 0.0}, {"d1", 1.0}, {"d2", 2.0},
       {"dp0", 0.0}, {"dp1", 1.0}, {"dp2", 3.0}});
  CHECK(dcs == doctest::Approx(logit_delta_cs(logit, std::vector{0.0, 1.0, 3.0}))
                   .epsilon(1e-12));
}

TEST_CASE("model spec: binary file reproduces the catalog verdicts") {
  const auto path = write_temp_spec("binary_like.spec", R"spec(# binary response, custom file
[model]
name = binary-custom

[params]
b1 = 0.2
b2 = 0.3

[dists]
eps = logistic(0, 1)

[transform]
family = binary_affine

[context]
x2 = 1.0
x2p = 2.0

[counterfactuals]
marginal_effect_2 = "logistic_pdf((b1 + b2*x2 - eps_loc) / eps_scale) / eps_scale * b2"
pct_welfare = "(b2*(x2p - x2)) / (b1 + b2*x2)"
)spec");
  const ModelSpec spec = load_model_spec(path);
  CHECK(spec.name == "binary-custom");
  CHECK(spec.point.coord("b1") == 0.2);
  CHECK(spec.family.family_id == "binary_affine");
  REQUIRE(spec.counterfactuals.size() == 2);

  const auto qs = spec.make_counterfactuals();
  const BinaryChoiceModel m{{0.2, 0.3}, DistHandle::logistic(0, 1)};
  CHECK(qs[0].eval(spec.point, spec.default_context) ==
        doctest::Approx(binary_marginal_effect(m, std::vector{1.0, 1.0}, 2)).epsilon(1e-12));

  // the audit verdicts match the built-in catalog classification
  const auto me_verdict =
      invariance_audit(qs[0], spec.family, spec.point, spec.default_context, 1000, 1e-9, 7);
  CHECK(me_verdict.status == AuditStatus::invariant);
  const auto pct_verdict =
      invariance_audit(qs[1], spec.family, spec.point, spec.default_context, 1000, 1e-9, 7);
  CHECK(pct_verdict.status == AuditStatus::non_invariant);
  std::filesystem::remove(path);
}

TEST_CASE("model spec: custom affine pattern forms a lawful family") {
  const auto path = write_temp_spec("custom_family.spec", R"spec(
[model]
name = custom-pattern

[params]
theta = 0.4
gamma = 1.25

[dists]
u = normal(0, 1)

[transform]
family = custom
kinds = location, scale
theta = (1, 2)
gamma = (-, 2)
u = (1, 2)

[counterfactuals]
ratio = "theta / gamma"
)spec");
  const ModelSpec spec = load_model_spec(path);
  CHECK(spec.family.family_id == "custom_affine");
  const auto axioms = check_group_axioms(spec.family, 44, 300, 1e-9);
  CHECK(axioms.pass);

  // theta/gamma is contaminated by the location slot, like an intercept ratio
  const auto qs = spec.make_counterfactuals();
  const auto verdict =
      invariance_audit(qs[0], spec.family, spec.point, spec.default_context, 500, 1e-9, 7);
  CHECK(verdict.status == AuditStatus::non_invariant);
  std::filesystem::remove(path);
}

TEST_CASE("model spec: load-time failures") {
  const auto unresolved = write_temp_spec("unresolved.spec", R"spec(
[model]
name = broken

[params]
b1 = 0.1

[transform]
family = binary_affine

[counterfactuals]
q = "b1 + gamma"
)spec");
  CHECK_THROWS_WITH_AS(load_model_spec(unresolved), doctest::Contains("gamma"),
                       ResolutionError);
  std::filesystem::remove(unresolved);

  const auto missing = write_temp_spec("missing.spec", "[model]\nname = x\n");
  CHECK_THROWS_AS(load_model_spec(missing), SchemaError);
  std::filesystem::remove(missing);

  const auto conflict = write_temp_spec("conflict.spec", R"spec(
[model]
name = conflict

[params]
p = 1.0
q = 2.0

[transform]
family = custom
kinds = location, scale, scale
p = (1, 2)
q = (1, 3)
)spec");
  CHECK_THROWS_AS(load_model_spec(conflict), SchemaError);
  std::filesystem::remove(conflict);

  CHECK_THROWS_AS(load_model_spec("/nonexistent/path.spec"), IoError);
}

TEST_CASE("model spec: empty counterfactual section and CRLF input are fine") {
  const auto path = write_temp_spec("crlf.spec",
                                    "[model]\r\nname = crlf\r\n\r\n[params]\r\nv = 2.5\r\n\r\n"
                                    "[transform]\r\nfamily = scaling\r\n\r\n[counterfactuals]\r\n");
  const ModelSpec spec = load_model_spec(path);
  CHECK(spec.counterfactuals.empty());
  CHECK(spec.point.coord("v") == 2.5);
  std::filesystem::remove(path);
}
