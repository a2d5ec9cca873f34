#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "normaudit/audit.hpp"
#include "normaudit/catalog.hpp"

using namespace normaudit;

namespace {

const CatalogEntry& binary() { return catalog_entry("binary"); }

}  // namespace

TEST_CASE("invariance_audit: marginal effect is orbit constant") {
  const auto& e = binary();
  const auto verdict = invariance_audit(e.find("marginal_effect").q, e.family, e.base_point,
                                        e.context, 1000, 1e-9, 7);
  CHECK(verdict.status == AuditStatus::invariant);
  CHECK(verdict.max_rel_deviation <= 1e-9);
  CHECK(!verdict.witness.has_value());
}

TEST_CASE("invariance_audit: percentage welfare breaks with a witness") {
  const auto& e = binary();
  const auto verdict =
      invariance_audit(e.find("pct_welfare").q, e.family, e.base_point, e.context, 1000, 1e-9, 7);
  CHECK(verdict.status == AuditStatus::non_invariant);
  REQUIRE(verdict.witness.has_value());
  CHECK(verdict.max_rel_deviation > 100.0 * 1e-9);
  CHECK(!verdict.low_confidence);

  // the hand-computed pair from the d = 2 fixture: q = 0.6 at theta, 0.3 after (1, 2)
  const auto family = binary_affine_family();
  const BinaryChoiceModel m{{0.2, 0.3}, DistHandle::logistic(0, 1)};
  const std::vector<double> x{1.0, 1.0};
  const std::vector<double> x_prime{1.0, 2.0};
  CHECK(binary_pct_welfare(m, x, x_prime) == doctest::Approx(0.6).epsilon(1e-14));
  const auto moved = apply(family, {"binary_affine", {1.0, 2.0}}, m.to_point());
  CHECK(binary_pct_welfare(BinaryChoiceModel::from_point(moved), x, x_prime) ==
        doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("invariance_audit: coefficient ratios split by the intercept") {
  const auto& e = binary();
  CHECK(invariance_audit(e.find("coef_ratio").q, e.family, e.base_point, e.context, 1000, 1e-9, 3)
            .status == AuditStatus::invariant);
  CHECK(invariance_audit(e.find("intercept_ratio").q, e.family, e.base_point, e.context, 1000,
                         1e-9, 3)
            .status == AuditStatus::non_invariant);
}

TEST_CASE("invariance_audit: determinism and witness validity") {
  const auto& e = binary();
  const auto& q = e.find("pct_welfare").q;
  const auto v1 = invariance_audit(q, e.family, e.base_point, e.context, 500, 1e-9, 99);
  const auto v2 = invariance_audit(q, e.family, e.base_point, e.context, 500, 1e-9, 99);
  CHECK(v1.max_rel_deviation == v2.max_rel_deviation);
  REQUIRE(v1.witness.has_value());
  REQUIRE(v2.witness.has_value());
  CHECK(v1.witness->element.params == v2.witness->element.params);

  // re-evaluating the witness reproduces the stored deviation
  const auto moved = apply(e.family, v1.witness->element, e.base_point);
  const double v = q.eval(moved, e.context);
  const double base = q.eval(e.base_point, e.context);
  const double dev = std::abs(v - base) / (1.0 + std::abs(base));
  CHECK(std::abs(dev - v1.witness->rel_deviation) <= 1e-12);
}

TEST_CASE("invariance_audit: monotone in the tolerance") {
  const auto& e = binary();
  const auto& q = e.find("choice_prob").q;
  const auto tight = invariance_audit(q, e.family, e.base_point, e.context, 300, 1e-12, 5);
  for (double tol : {1e-11, 1e-9, 1e-6}) {
    const auto loose = invariance_audit(q, e.family, e.base_point, e.context, 300, tol, 5);
    if (tight.status == AuditStatus::invariant)
      CHECK(loose.status == AuditStatus::invariant);
    CHECK(loose.max_rel_deviation == tight.max_rel_deviation);
  }
}

TEST_CASE("invariance_audit: gray-zone deviations are flagged low confidence") {
  // deviations of ~2e-8 sit between tol and 100*tol for tol = 1e-9
  Counterfactual q;
  q.name = "nearly_constant";
  q.eval = [](const ParamPoint& p, const Context&) {
    return 1.0 + 2e-8 * std::tanh(p.coord("b1"));
  };
  const auto& e = binary();
  const auto verdict = invariance_audit(q, e.family, e.base_point, e.context, 500, 1e-9, 77);
  CHECK(verdict.status == AuditStatus::non_invariant);
  CHECK(verdict.low_confidence);
  REQUIRE(verdict.witness.has_value());
  CHECK(verdict.max_rel_deviation > 1e-9);
  CHECK(verdict.max_rel_deviation <= 1e-7);
}

TEST_CASE("normalization_check: without an orbit invariant every pair must separate") {
  const auto& e = catalog_entry("temperature");
  const auto report =
      normalization_check(e.normalization, e.family, e.audit_points, 100, 1e-9, 13, {});
  CHECK(report.pass);
  CHECK(report.separation.pairs_checked == 10);  // all C(5,2) pairs compared
}

TEST_CASE("invariance_audit: eval failure surfaces the offending element") {
  Counterfactual q;
  q.name = "needs_positive_b1";
  q.eval = [](const ParamPoint& p, const Context&) {
    const double v = p.coord("b1");
    if (v <= 0.0) throw DomainError("b1 must stay positive");
    return std::log(v);
  };
  const auto family = binary_affine_family();
  ParamPoint theta = BinaryChoiceModel{{0.5, 1.0}, DistHandle::logistic(0, 1)}.to_point();
  // location shifts push b1 negative for many sampled elements
  CHECK_THROWS_AS(invariance_audit(q, family, theta, Context{}, 200, 1e-9, 2), EvalFailedError);
  try {
    invariance_audit(q, family, theta, Context{}, 200, 1e-9, 2);
  } catch (const EvalFailedError& err) {
    CHECK(err.element().family_id == "binary_affine");
    CHECK(err.element().params.size() == 2);
  }
}

TEST_CASE("invariance_audit: missing context name is rejected") {
  const auto& e = binary();
  CHECK_THROWS_AS(
      invariance_audit(e.find("pct_welfare").q, e.family, e.base_point, Context{}, 10, 1e-9, 1),
      UnknownNameError);
}

TEST_CASE("normalization_check: catalog sections pass all three clauses") {
  for (const auto& id : catalog_ids()) {
    const auto& e = catalog_entry(id);
    const auto report = normalization_check(e.normalization, e.family, e.audit_points, 200, 1e-9,
                                            13, e.orbit_invariant);
    INFO("model ", id);
    CHECK(report.collapse.pass);
    CHECK(report.idempotence.pass);
    CHECK(report.separation.pass);
    CHECK(report.separation.pairs_checked > 0);
    CHECK(report.pass);
  }
}

TEST_CASE("normalization_check: scale-only section fails collapse") {
  const auto& e = binary();
  Normalization bad;
  bad.name = "scale_only";
  bad.family_id = e.family.family_id;
  bad.section = [fam = e.family](const ParamPoint& p) {
    // rescales to unit error scale but leaves the location free
    const GroupElement g{fam.family_id, {0.0, 1.0 / p.dist("eps").scale()}};
    return apply(fam, g, p);
  };
  const auto report =
      normalization_check(bad, e.family, {e.base_point}, 200, 1e-9, 13, e.orbit_invariant);
  CHECK(!report.collapse.pass);
  // the concrete counterexample: g = (1, 1) shifts the location, the section keeps it
  const auto moved = apply(e.family, {"binary_affine", {1.0, 1.0}}, e.base_point);
  CHECK(param_distance(bad.section(moved), bad.section(e.base_point)) > 0.1);
}

TEST_CASE("normalization_check: identity section fails collapse on a nontrivial family") {
  const auto& e = binary();
  Normalization identity;
  identity.name = "identity";
  identity.family_id = e.family.family_id;
  identity.section = [](const ParamPoint& p) { return p; };
  const auto report =
      normalization_check(identity, e.family, e.audit_points, 200, 1e-9, 13, e.orbit_invariant);
  CHECK(!report.collapse.pass);
}

TEST_CASE("identification_witness: present iff the audit is non-invariant") {
  const auto& e = binary();
  const auto none =
      identification_witness(e.find("choice_prob").q, e.family, e.base_point, e.context, 500,
                             1e-9, 21);
  CHECK(!none.has_value());

  const auto pair = identification_witness(e.find("pct_welfare").q, e.family, e.base_point,
                                           e.context, 500, 1e-9, 21);
  REQUIRE(pair.has_value());
  CHECK(pair->q_at_theta != pair->q_at_transformed);
  CHECK(pair->statement.find("identified set") != std::string::npos);
  // the stored pair is genuinely modeling equivalent
  CHECK(param_distance(apply(e.family, pair->element, pair->theta), pair->transformed) == 0.0);
}

TEST_CASE("identification_witness: logit CS level vs Delta CS") {
  const auto& e = catalog_entry("logit");
  const auto level = identification_witness(e.find("cs_level").q, e.family, e.base_point,
                                            e.context, 500, 1e-9, 4);
  REQUIRE(level.has_value());
  CHECK(std::abs(level->q_at_theta - level->q_at_transformed) > 1e-6);

  CHECK(!identification_witness(e.find("delta_cs").q, e.family, e.base_point, e.context, 500,
                                1e-9, 4)
             .has_value());
}

TEST_CASE("wlog_equivalence_audit: verdicts and values survive normalization") {
  const auto& e = binary();
  const auto me = wlog_equivalence_audit(e.find("marginal_effect").q, e.family, e.normalization,
                                         e.base_point, e.context, 500, 1e-9, 8);
  CHECK(me.verdicts_agree);
  CHECK(me.values_agree);
  CHECK(me.pass);
  CHECK(me.from_theta.status == AuditStatus::invariant);

  const auto pct = wlog_equivalence_audit(e.find("pct_welfare").q, e.family, e.normalization,
                                          e.base_point, e.context, 500, 1e-9, 8);
  CHECK(pct.verdicts_agree);
  CHECK(pct.from_theta.status == AuditStatus::non_invariant);
  CHECK(pct.pass);
}

TEST_CASE("wlog_equivalence_audit: absolute temperature change stays 10") {
  const auto& e = catalog_entry("temperature");
  const auto report = wlog_equivalence_audit(e.find("temp_delta").q, e.family, e.normalization,
                                             e.base_point, e.context, 500, 1e-9, 6);
  CHECK(report.pass);
  CHECK(report.value_at_theta == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(report.value_at_section == doctest::Approx(10.0).epsilon(1e-12));
}
