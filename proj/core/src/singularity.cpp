#include "normaudit/singularity.hpp"

#include <algorithm>
#include <cmath>

#include "normaudit/math.hpp"

namespace normaudit {

TransformFamily scaling_family() {
  TransformFamily f;
  f.family_id = "scaling";
  f.kinds = {ParamKind::scale};
  f.identity = {1.0};
  f.preserves = {"nonnegative-support"};
  f.action = [](std::span<const double> g, const ParamPoint& p) {
    ParamPoint out;
    for (const auto& [name, v] : p.coords()) out.set_coord(name, g[0] * v);
    for (const auto& [name, d] : p.dists()) out.set_dist(name, d.affine(0.0, g[0]));
    return out;
  };
  f.compose_law = [](std::span<const double> g1, std::span<const double> g2) {
    return std::vector<double>{g1[0] * g2[0]};
  };
  f.inverse_law = [](std::span<const double> g) { return std::vector<double>{1.0 / g[0]}; };
  ParamPoint probe;
  probe.set_coord("y", 1.0);
  f.probe_point = std::move(probe);
  return f;
}

double EquivariantSystem::act(const GroupElement& g, double y) const {
  ParamPoint p;
  p.set_coord("y", y);
  return apply(group, g, p).coord("y");
}

EquivariantSystem log_scaling_system() {
  EquivariantSystem sys;
  sys.m = [](double y) {
    if (!(y > 0.0)) throw DomainError("log undefined at y <= 0");
    return std::log(y);
  };
  sys.group = scaling_family();
  sys.rho = [](const GroupElement& g) { return std::log(g.params[0]); };
  sys.fixed_point = 0.0;
  sys.sample_y = [](Rng& rng) { return std::exp(rng.uniform(-3.0, 3.0)); };
  return sys;
}

double equivariance_residual_at(const EquivariantSystem& sys, const GroupElement& g, double y) {
  if (y == sys.fixed_point)
    throw DomainViolationError("sample hit the fixed point");
  return std::abs(sys.m(sys.act(g, y)) - sys.rho(g) - sys.m(y));
}

double equivariance_residual(const EquivariantSystem& sys, int n, std::uint64_t seed) {
  if (n < 1) throw ConstraintViolatedError("equivariance_residual requires n >= 1");
  const auto elements = sample_group(sys.group, seed, n);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);  // decouple y draws from element draws
  double worst = 0.0;
  for (const auto& g : elements)
    worst = std::max(worst, equivariance_residual_at(sys, g, sys.sample_y(rng)));
  return worst;
}

FixedPointReport fixed_point_extension_test(const EquivariantSystem& sys, double candidate_value,
                                            const GroupElement& g) {
  const double rho = sys.rho(g);
  if (rho == 0.0)
    throw TrivialCocycleError("rho(g) = 0: this element forces no inconsistency");
  FixedPointReport report;
  report.rho_value = rho;
  report.inconsistency = std::abs(rho);
  report.candidate_value = candidate_value;
  return report;
}

namespace {

double draw_outcome(const OutcomeAtomDist& d, double u_atom, double u_pos) {
  if (u_atom < d.p_zero) return 0.0;
  return d.positive_part.quantile(u_pos);
}

}  // namespace

AteScaleReport ate_scale_sensitivity(const OutcomeAtomDist& y0, const OutcomeAtomDist& y1,
                                     double extension_value_at_zero, double scale_a,
                                     int n_draws, std::uint64_t seed) {
  if (!(scale_a > 0.0)) throw ConstraintViolatedError("scale must be positive");
  if (n_draws < 10000) throw ConstraintViolatedError("ate_scale_sensitivity requires n >= 10^4");
  if (!(y0.p_zero >= 0.0 && y0.p_zero <= 1.0) || !(y1.p_zero >= 0.0 && y1.p_zero <= 1.0))
    throw ConstraintViolatedError("atom mass must lie in [0, 1]");

  const auto m_ext = [extension_value_at_zero](double y) {
    return y == 0.0 ? extension_value_at_zero : std::log(y);
  };

  Rng rng(seed);
  double sum_base = 0.0, sum_shift = 0.0, sum_shift_sq = 0.0;
  for (int i = 0; i < n_draws; ++i) {
    const double u_atom = rng.uniform01();  // shared: equal atom masses cancel exactly
    const double v0 = draw_outcome(y0, u_atom, rng.uniform_open01());
    const double v1 = draw_outcome(y1, u_atom, rng.uniform_open01());
    const double base = m_ext(v1) - m_ext(v0);
    const double scaled = m_ext(scale_a * v1) - m_ext(scale_a * v0);
    sum_base += base;
    const double s = scaled - base;
    sum_shift += s;
    sum_shift_sq += s * s;
  }

  AteScaleReport report;
  report.n_draws = n_draws;
  report.ate_at_1 = sum_base / n_draws;
  report.shift = sum_shift / n_draws;
  report.ate_at_a = report.ate_at_1 + report.shift;
  const double var = std::max(0.0, sum_shift_sq / n_draws - report.shift * report.shift);
  report.shift_se = std::sqrt(var / n_draws);
  report.expected_shift = (y0.p_zero - y1.p_zero) * std::log(scale_a);
  return report;
}

LimitTestReport non_unique_limit_test(const std::function<double(const ParamPoint&)>& qbar,
                                      const std::function<ParamPoint(int)>& seq1,
                                      const std::function<ParamPoint(int)>& seq2, int horizon,
                                      double tail_tol, double divergence_threshold) {
  if (horizon < 10) throw ConstraintViolatedError("limit test requires horizon >= 10");

  const auto run = [&](const std::function<ParamPoint(int)>& seq, int which) {
    double value = 0.0;
    for (int k = 1; k <= horizon; ++k) {
      try {
        value = qbar(seq(k));
      } catch (const Error& e) {
        throw EvalFailedError("limit functional failed on sequence " + std::to_string(which) +
                                  " at index " + std::to_string(k) + ": " + e.what(),
                              GroupElement{});
      }
      if (!std::isfinite(value))
        throw EvalFailedError("limit functional non-finite on sequence " + std::to_string(which) +
                                  " at index " + std::to_string(k),
                              GroupElement{});
    }
    return value;
  };

  LimitTestReport report;
  report.tail_tol = tail_tol;
  report.divergence_threshold = divergence_threshold;
  report.tail1 = run(seq1, 1);
  report.tail2 = run(seq2, 2);

  const bool diverged = std::abs(report.tail1) > divergence_threshold ||
                        std::abs(report.tail2) > divergence_threshold;
  const bool split = std::abs(report.tail1 - report.tail2) > tail_tol;
  if (diverged || split) {
    report.verdict = LimitVerdict::singular;
  } else {
    report.verdict = LimitVerdict::extendable_candidate;
    report.common_value = 0.5 * (report.tail1 + report.tail2);
  }
  return report;
}

std::string to_string(ExtensionCandidate c) {
  switch (c) {
    case ExtensionCandidate::log1p: return "log1p";
    case ExtensionCandidate::arcsinh: return "arcsinh";
    case ExtensionCandidate::log_patch: return "log_patch";
  }
  return "?";
}

TrilemmaReport trilemma_check(ExtensionCandidate candidate, double patch_value, int n_samples,
                              std::uint64_t seed) {
  TrilemmaReport report;
  report.candidate = candidate;

  const auto m_ext = [candidate, patch_value](double y) {
    switch (candidate) {
      case ExtensionCandidate::log1p: return std::log1p(y);
      case ExtensionCandidate::arcsinh: return std::asinh(y);
      case ExtensionCandidate::log_patch: return y == 0.0 ? patch_value : std::log(y);
    }
    throw Error("unreachable candidate");
  };

  // Fidelity: the extension must agree with log on the regular domain.
  {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const double y = std::exp(rng.uniform(-3.0, 3.0));
      worst = std::max(worst, std::abs(m_ext(y) - std::log(y)));
    }
    report.fidelity.statistic = worst;
    report.fidelity.pass = worst <= 1e-9;
    report.fidelity.detail = "sup |m_ext(y) - log(y)| over sampled y > 0";
  }

  // Invariance: the induced difference m_ext(y1) - m_ext(y0) must be constant
  // along scaling orbits, including those through the boundary point y0 = 0.
  {
    Counterfactual q;
    q.name = "extended_log_difference";
    q.eval = [m_ext](const ParamPoint& p, const Context&) {
      return m_ext(p.coord("y1")) - m_ext(p.coord("y0"));
    };
    ParamPoint theta;
    theta.set_coord("y1", 1.0);
    theta.set_coord("y0", 0.0);  // boundary representative
    const AuditVerdict verdict =
        invariance_audit(q, scaling_family(), theta, Context{}, n_samples, 1e-9, seed);
    report.invariance.statistic = verdict.max_rel_deviation;
    report.invariance.pass = verdict.status == AuditStatus::invariant;
    report.invariance.detail = "invariance audit of m_ext(y1) - m_ext(y0) under scaling";
  }

  // Regularity: the induced ATE must extend continuously to the boundary class
  // P(Y0 = 0) > 0. Sequence 1 shrinks the atom location toward 0; sequence 2
  // sits at the boundary model itself.
  {
    constexpr double p_atom = 0.5;
    const auto qbar = [m_ext](const ParamPoint& p) {
      return m_ext(p.coord("y1")) -
             (p.coord("p_zero") * m_ext(p.coord("atom_loc")) +
              (1.0 - p.coord("p_zero")) * m_ext(p.coord("y_pos")));
    };
    const auto boundary_point = [](double atom_loc) {
      ParamPoint p;
      p.set_coord("p_zero", p_atom);
      p.set_coord("atom_loc", atom_loc);
      p.set_coord("y_pos", 1.0);
      p.set_coord("y1", 2.0);
      return p;
    };
    const auto seq1 = [boundary_point](int k) { return boundary_point(std::pow(2.0, -k)); };
    const auto seq2 = [boundary_point](int) { return boundary_point(0.0); };
    const LimitTestReport limit = non_unique_limit_test(qbar, seq1, seq2, 40);
    report.regularity.statistic = std::abs(limit.tail1 - limit.tail2);
    report.regularity.pass = limit.verdict == LimitVerdict::extendable_candidate;
    report.regularity.detail = "non-unique limit test at the boundary class";
  }

  report.at_least_one_fails =
      !(report.fidelity.pass && report.invariance.pass && report.regularity.pass);
  return report;
}

}  // namespace normaudit
