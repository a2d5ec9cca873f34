#include "normaudit/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "normaudit/math.hpp"

namespace normaudit {

namespace {

std::vector<double> scaled(std::span<const double> xs, double inv_mu) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] * inv_mu;
  return out;
}

}  // namespace

// --- binary -----------------------------------------------------------------

ParamPoint BinaryChoiceModel::to_point() const {
  ParamPoint p;
  for (std::size_t i = 0; i < beta.size(); ++i)
    p.set_coord("b" + std::to_string(i + 1), beta[i]);
  p.set_dist("eps", errdist);
  return p;
}

BinaryChoiceModel BinaryChoiceModel::from_point(const ParamPoint& p) {
  std::vector<double> beta = p.indexed_coords("b", 1);
  if (beta.size() < 2)
    throw ConstraintViolatedError("binary model needs coordinates b1, b2, ...");
  return BinaryChoiceModel{std::move(beta), p.dist("eps")};
}

TransformFamily binary_affine_family() {
  TransformFamily f;
  f.family_id = "binary_affine";
  f.kinds = {ParamKind::location, ParamKind::scale};
  f.identity = {0.0, 1.0};
  f.preserves = {"cdf-monotone"};
  f.action = [](std::span<const double> g, const ParamPoint& p) {
    const double a = g[0], b = g[1];
    ParamPoint out;
    for (const auto& [name, v] : p.coords())
      out.set_coord(name, name == "b1" ? a + b * v : b * v);
    for (const auto& [name, d] : p.dists()) out.set_dist(name, d.affine(a, b));
    return out;
  };
  f.compose_law = [](std::span<const double> g1, std::span<const double> g2) {
    return std::vector<double>{g1[0] + g1[1] * g2[0], g1[1] * g2[1]};
  };
  f.inverse_law = [](std::span<const double> g) {
    return std::vector<double>{-g[0] / g[1], 1.0 / g[1]};
  };
  f.probe_point = BinaryChoiceModel{{0.2, 0.3, -0.5}, DistHandle::logistic(0, 1)}.to_point();
  return f;
}

double binary_choice_prob(const BinaryChoiceModel& m, std::span<const double> x) {
  if (x.size() != m.beta.size())
    throw DimMismatchError("covariate length " + std::to_string(x.size()) +
                           " vs d = " + std::to_string(m.beta.size()));
  const double idx = std::inner_product(x.begin(), x.end(), m.beta.begin(), 0.0);
  return m.errdist.cdf(idx);
}

double binary_marginal_effect(const BinaryChoiceModel& m, std::span<const double> x, int j) {
  if (x.size() != m.beta.size()) throw DimMismatchError("covariate length vs d");
  if (j < 2 || static_cast<std::size_t>(j) > m.beta.size())
    throw DimMismatchError("coefficient label j must be in [2, d]");
  const double idx = std::inner_product(x.begin(), x.end(), m.beta.begin(), 0.0);
  return m.errdist.pdf(idx) * m.beta[static_cast<std::size_t>(j) - 1];
}

double binary_pct_welfare(const BinaryChoiceModel& m, std::span<const double> x,
                          std::span<const double> x_prime) {
  if (x.size() != m.beta.size() || x_prime.size() != m.beta.size())
    throw DimMismatchError("covariate length vs d");
  const double w = std::inner_product(x.begin(), x.end(), m.beta.begin(), 0.0);
  const double w_prime = std::inner_product(x_prime.begin(), x_prime.end(), m.beta.begin(), 0.0);
  if (w == 0.0) throw ZeroDenominatorError("latent welfare W(x) = 0");
  return (w_prime - w) / w;
}

// --- logit ------------------------------------------------------------------

TransformFamily logit_affine_family() {
  TransformFamily f;
  f.family_id = "logit_affine";
  f.kinds = {ParamKind::location, ParamKind::scale};
  f.identity = {0.0, 1.0};
  f.preserves = {"cdf-monotone"};
  f.action = [](std::span<const double> g, const ParamPoint& p) {
    const double a = g[0], b = g[1];
    const double alpha_pre = p.coord("alpha");
    ParamPoint out;
    for (const auto& [name, v] : p.coords()) {
      if (name.rfind("delta", 0) == 0) {
        out.set_coord(name, a + b * v);
      } else if (name == "cs_const") {
        out.set_coord(name, v + a / (b * alpha_pre));
      } else {
        out.set_coord(name, b * v);  // alpha, mu, any other utility-unit scalar
      }
    }
    for (const auto& [name, d] : p.dists()) out.set_dist(name, d.affine(a, b));
    return out;
  };
  f.compose_law = [](std::span<const double> g1, std::span<const double> g2) {
    return std::vector<double>{g1[0] + g1[1] * g2[0], g1[1] * g2[1]};
  };
  f.inverse_law = [](std::span<const double> g) {
    return std::vector<double>{-g[0] / g[1], 1.0 / g[1]};
  };
  {
    ParamPoint probe;
    probe.set_coord("delta_0", 0.0);
    probe.set_coord("delta_1", 1.0);
    probe.set_coord("delta_2", 2.0);
    probe.set_coord("deltap_0", 0.0);
    probe.set_coord("deltap_1", 1.0);
    probe.set_coord("deltap_2", 3.0);
    probe.set_coord("alpha", 2.0);
    probe.set_coord("mu", 1.0);
    probe.set_coord("cs_const", 0.0);
    f.probe_point = std::move(probe);
  }
  return f;
}

double logit_cs_level(const LogitDemandModel& m) {
  const auto z = scaled(m.delta, 1.0 / m.mu);
  return (m.mu / m.alpha) * logsumexp(z) + m.cs_const;
}

double logit_delta_cs(const LogitDemandModel& m, std::span<const double> delta_prime) {
  if (delta_prime.size() != m.delta.size())
    throw DimMismatchError("policy profile length vs J+1");
  const auto z0 = scaled(m.delta, 1.0 / m.mu);
  const auto z1 = scaled(delta_prime, 1.0 / m.mu);
  return (m.mu / m.alpha) * (logsumexp(z1) - logsumexp(z0));
}

double logit_pct_cs(const LogitDemandModel& m, std::span<const double> delta_prime) {
  const double level = logit_cs_level(m);
  if (level == 0.0) throw ZeroDenominatorError("CS level = 0");
  return logit_delta_cs(m, delta_prime) / level;
}

// --- network ----------------------------------------------------------------

ParamPoint NetworkModel::to_point() const {
  ParamPoint p;
  const int g = static_cast<int>(cov_grid.size());
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j)
      p.set_coord("w_" + std::to_string(i) + "_" + std::to_string(j), w[i][j]);
  for (std::size_t i = 0; i < fixed_effects.size(); ++i)
    p.set_coord("A_" + std::to_string(i + 1), fixed_effects[i]);
  p.set_dist("U", errdist);
  return p;
}

NetworkModel NetworkModel::with_point(const ParamPoint& p) const {
  NetworkModel out = *this;
  const int g = static_cast<int>(cov_grid.size());
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j)
      out.w[i][j] = out.w[j][i] = p.coord("w_" + std::to_string(i) + "_" + std::to_string(j));
  for (std::size_t i = 0; i < fixed_effects.size(); ++i)
    out.fixed_effects[i] = p.coord("A_" + std::to_string(i + 1));
  out.errdist = p.dist("U");
  return out;
}

double NetworkModel::w_at(int gi, int gj) const {
  const int g = static_cast<int>(cov_grid.size());
  if (gi < 0 || gj < 0 || gi >= g || gj >= g)
    throw OffGridError("covariate pair off the declared grid");
  return w[gi][gj];
}

namespace {

TransformFamily network_family_impl(bool with_b) {
  TransformFamily f;
  if (with_b) {
    f.family_id = "network_affine";
    f.kinds = {ParamKind::location, ParamKind::location, ParamKind::scale};
    f.identity = {0.0, 0.0, 1.0};
  } else {
    f.family_id = "network_parametric";
    f.kinds = {ParamKind::location, ParamKind::scale};
    f.identity = {0.0, 1.0};
  }
  f.preserves = {"iid-errors", "cross-sectional-sampling", "cdf-monotone", "w-symmetry"};
  f.action = [with_b](std::span<const double> g, const ParamPoint& p) {
    const double a = g[0];
    const double b = with_b ? g[1] : 0.0;
    const double c = with_b ? g[2] : g[1];
    ParamPoint out;
    for (const auto& [name, v] : p.coords()) {
      if (name.rfind("A_", 0) == 0) {
        out.set_coord(name, c * v + a);
      } else if (name.rfind("w_", 0) == 0) {
        out.set_coord(name, c * v + b);
      } else {
        out.set_coord(name, c * v);
      }
    }
    for (const auto& [name, d] : p.dists()) out.set_dist(name, d.affine(2.0 * a + b, c));
    return out;
  };
  if (with_b) {
    f.compose_law = [](std::span<const double> g1, std::span<const double> g2) {
      return std::vector<double>{g1[0] + g1[2] * g2[0], g1[1] + g1[2] * g2[1], g1[2] * g2[2]};
    };
    f.inverse_law = [](std::span<const double> g) {
      return std::vector<double>{-g[0] / g[2], -g[1] / g[2], 1.0 / g[2]};
    };
  } else {
    f.compose_law = [](std::span<const double> g1, std::span<const double> g2) {
      return std::vector<double>{g1[0] + g1[1] * g2[0], g1[1] * g2[1]};
    };
    f.inverse_law = [](std::span<const double> g) {
      return std::vector<double>{-g[0] / g[1], 1.0 / g[1]};
    };
  }
  return f;
}

NetworkModel network_fixture();

}  // namespace

TransformFamily network_affine_family() {
  TransformFamily f = network_family_impl(true);
  f.probe_point = network_fixture().to_point();
  return f;
}

TransformFamily network_parametric_family() {
  TransformFamily f = network_family_impl(false);
  NetworkModel m = network_fixture();
  m.w[0][0] = 0.0;  // pinned by functional form in the parametric case
  f.probe_point = m.to_point();
  return f;
}

double network_link_prob(const NetworkModel& m, int i, int j) {
  const int n = static_cast<int>(m.fixed_effects.size());
  if (i < 0 || j < 0 || i >= n || j >= n) throw OffGridError("unit index out of range");
  if (i == j) throw ConstraintViolatedError("link probability needs i != j");
  const double idx = m.w_at(m.unit_cov[i], m.unit_cov[j]) + m.fixed_effects[i] + m.fixed_effects[j];
  return m.errdist.cdf(idx);
}

std::vector<int> fixed_effect_ranking(const NetworkModel& m) {
  std::vector<int> order(m.fixed_effects.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return m.fixed_effects[i] < m.fixed_effects[j];
  });
  return order;
}

double ranking_code(const std::vector<int>& order) {
  const double base = static_cast<double>(order.size()) + 1.0;
  double code = 0.0;
  double weight = 1.0;
  for (int idx : order) {
    code += static_cast<double>(idx) * weight;
    weight *= base;
  }
  return code;
}

NetworkModel two_quantile_normalize(const NetworkModel& m, double alpha_q) {
  if (!(alpha_q > 0.0 && alpha_q < 0.5))
    throw ConstraintViolatedError("quantile level must lie in (0, 0.5)");
  const double q_lo = m.errdist.quantile(alpha_q);
  const double q_hi = m.errdist.quantile(1.0 - alpha_q);
  const double spread = q_hi - q_lo;
  if (!(spread > 0.0))
    throw DegenerateQuantilesError("F^-1(1-alpha) equals F^-1(alpha)");
  const double c = 1.0 / spread;
  const double w_ref = m.w_at(m.ref_cov, m.ref_cov);
  const double b = -c * w_ref;
  const double a = 0.5 * (c * w_ref - c * q_lo);  // makes 2a + b = -c * q_lo
  const TransformFamily fam = network_family_impl(true);
  const GroupElement g{fam.family_id, {a, b, c}};
  return m.with_point(apply(fam, g, m.to_point()));
}

// --- temperature --------------------------------------------------------------

double temperature_pct_change(double t_from_celsius, double t_to_celsius, TempUnit unit) {
  const auto convert = [unit](double celsius) {
    switch (unit) {
      case TempUnit::C: return celsius;
      case TempUnit::F: return 1.8 * celsius + 32.0;
      case TempUnit::K: return celsius + 273.15;
    }
    throw Error("unreachable temperature unit");
  };
  const double from = convert(t_from_celsius);
  const double to = convert(t_to_celsius);
  if (from == 0.0) throw ZeroDenominatorError("temperature is zero in the chosen unit");
  return (to - from) / from;
}

TransformFamily temperature_shift_family() {
  TransformFamily f;
  f.family_id = "temperature_shift";
  f.kinds = {ParamKind::location};
  f.identity = {0.0};
  f.action = [](std::span<const double> g, const ParamPoint& p) {
    ParamPoint out;
    for (const auto& [name, v] : p.coords()) out.set_coord(name, v + g[0]);
    for (const auto& [name, d] : p.dists()) out.set_dist(name, d.affine(g[0], 1.0));
    return out;
  };
  f.compose_law = [](std::span<const double> g1, std::span<const double> g2) {
    return std::vector<double>{g1[0] + g2[0]};
  };
  f.inverse_law = [](std::span<const double> g) { return std::vector<double>{-g[0]}; };
  ParamPoint probe;
  probe.set_coord("t_from", 1.0);
  probe.set_coord("t_to", 11.0);
  f.probe_point = std::move(probe);
  return f;
}

// --- catalog entries -----------------------------------------------------------

namespace {

Counterfactual make_cf(std::string name, std::vector<std::string> schema,
                       std::function<double(const ParamPoint&, const Context&)> eval) {
  Counterfactual q;
  q.name = std::move(name);
  q.context_schema = std::move(schema);
  q.eval = std::move(eval);
  return q;
}

CatalogEntry make_binary_entry() {
  CatalogEntry e;
  e.id = "binary";
  e.family = binary_affine_family();

  const auto point = [](std::vector<double> beta, DistHandle d) {
    return BinaryChoiceModel{std::move(beta), std::move(d)}.to_point();
  };
  e.audit_points = {
      point({0.2, 0.3, -0.5}, DistHandle::logistic(0, 1)),
      point({-0.4, 1.1, 0.7}, DistHandle::normal(0, 1)),
      point({0.0, 0.5, 2.0}, DistHandle::logistic(0.5, 2.0)),
      point({1.5, -0.8, 0.3}, DistHandle::normal(-1.0, 0.5)),
      point({0.7, 2.2, -1.4}, DistHandle::cauchy(0, 1)),
  };
  e.base_point = e.audit_points.front();

  e.context.set("x", std::vector<double>{1.0, 0.8, -0.6});
  e.context.set("x_prime", std::vector<double>{1.0, 1.6, 0.4});

  e.counterfactuals = {
      {make_cf("choice_prob", {"x"},
               [](const ParamPoint& p, const Context& c) {
                 return binary_choice_prob(BinaryChoiceModel::from_point(p), c.vec("x"));
               }),
       true},
      {make_cf("marginal_effect", {"x"},
               [](const ParamPoint& p, const Context& c) {
                 return binary_marginal_effect(BinaryChoiceModel::from_point(p), c.vec("x"), 2);
               }),
       true},
      {make_cf("coef_ratio", {},
               [](const ParamPoint& p, const Context&) {
                 const double b3 = p.coord("b3");
                 if (b3 == 0.0) throw ZeroDenominatorError("b3 = 0");
                 return p.coord("b2") / b3;
               }),
       true},
      {make_cf("latent_level", {"x"},
               [](const ParamPoint& p, const Context& c) {
                 const auto m = BinaryChoiceModel::from_point(p);
                 const auto& x = c.vec("x");
                 if (x.size() != m.beta.size()) throw DimMismatchError("covariate length vs d");
                 return std::inner_product(x.begin(), x.end(), m.beta.begin(), 0.0);
               }),
       false},
      {make_cf("intercept_ratio", {},
               [](const ParamPoint& p, const Context&) {
                 const double b2 = p.coord("b2");
                 if (b2 == 0.0) throw ZeroDenominatorError("b2 = 0");
                 return p.coord("b1") / b2;
               }),
       false},
      {make_cf("pct_welfare", {"x", "x_prime"},
               [](const ParamPoint& p, const Context& c) {
                 return binary_pct_welfare(BinaryChoiceModel::from_point(p), c.vec("x"),
                                           c.vec("x_prime"));
               }),
       false},
  };

  e.normalization.name = "unit_error";
  e.normalization.family_id = e.family.family_id;
  e.normalization.section = [fam = e.family](const ParamPoint& p) {
    const DistHandle& d = p.dist("eps");
    const GroupElement g{fam.family_id, {-d.location() / d.scale(), 1.0 / d.scale()}};
    return apply(fam, g, p);
  };

  e.orbit_invariant = [ctx = e.context](const ParamPoint& p) {
    return binary_choice_prob(BinaryChoiceModel::from_point(p), ctx.vec("x"));
  };
  return e;
}

ParamPoint logit_point(std::vector<double> delta, std::vector<double> delta_prime, double alpha,
                       double mu, double cs_const) {
  ParamPoint p;
  for (std::size_t j = 0; j < delta.size(); ++j)
    p.set_coord("delta_" + std::to_string(j), delta[j]);
  for (std::size_t j = 0; j < delta_prime.size(); ++j)
    p.set_coord("deltap_" + std::to_string(j), delta_prime[j]);
  p.set_coord("alpha", alpha);
  p.set_coord("mu", mu);
  p.set_coord("cs_const", cs_const);
  return p;
}

LogitDemandModel logit_from_point(const ParamPoint& p) {
  return LogitDemandModel{p.indexed_coords("delta_"), p.coord("alpha"), p.coord("mu"),
                          p.coord("cs_const")};
}

CatalogEntry make_logit_entry() {
  CatalogEntry e;
  e.id = "logit";
  e.family = logit_affine_family();

  // The policy profile delta' rides inside the point: it is made of the same
  // utility unknowns as delta and shares the affine freedom. A fixed context
  // profile would spuriously break the Delta-CS invariance.
  e.audit_points = {
      logit_point({0, 1, 2}, {0, 1, 3}, 2.0, 1.0, 0.0),
      logit_point({0.5, -1.0, 2.5}, {0.5, 0.0, 2.0}, 0.7, 2.3, 1.2),
      logit_point({0.0, 0.1}, {0.0, 3.0}, 5.0, 0.4, -2.0),
      logit_point({1, 1, 1, 1}, {1, 2, 0.5, 1}, 1.0, 1.0, 0.3),
      logit_point({-2, 0, 2, 4}, {-2, 0, 2, 5}, 3.5, 1.7, 0.0),
  };
  e.base_point = e.audit_points.front();

  const auto delta_cs = [](const ParamPoint& p, const Context&) {
    return logit_delta_cs(logit_from_point(p), p.indexed_coords("deltap_"));
  };
  e.counterfactuals = {
      {make_cf("delta_cs", {}, delta_cs), true},
      {make_cf("cs_level", {},
               [](const ParamPoint& p, const Context&) {
                 return logit_cs_level(logit_from_point(p));
               }),
       false},
      {make_cf("pct_cs", {},
               [](const ParamPoint& p, const Context&) {
                 return logit_pct_cs(logit_from_point(p), p.indexed_coords("deltap_"));
               }),
       false},
  };

  e.normalization.name = "outside_zero_unit_scale";
  e.normalization.family_id = e.family.family_id;
  e.normalization.section = [fam = e.family](const ParamPoint& p) {
    const double mu = p.coord("mu");
    const GroupElement g{fam.family_id, {-p.coord("delta_0") / mu, 1.0 / mu}};
    return apply(fam, g, p);
  };

  e.orbit_invariant = [delta_cs](const ParamPoint& p) { return delta_cs(p, Context{}); };
  return e;
}

NetworkModel network_fixture() {
  NetworkModel m;
  m.cov_grid = {0.0, 1.0};
  m.w = {{0.3, -0.2}, {-0.2, 0.5}};
  m.unit_cov = {0, 1, 0, 1};
  m.fixed_effects = {0.1, 0.2, -0.3, 0.4};
  m.errdist = DistHandle::logistic(0, 1);
  m.alpha_q = 0.25;
  m.ref_cov = 0;
  return m;
}

CatalogEntry make_network_entry() {
  CatalogEntry e;
  e.id = "network";
  e.family = network_affine_family();

  NetworkModel proto = network_fixture();

  const auto variant = [&proto](std::vector<std::vector<double>> w, std::vector<double> A,
                                DistHandle d) {
    NetworkModel m = proto;
    m.w = std::move(w);
    m.fixed_effects = std::move(A);
    m.errdist = std::move(d);
    return m.to_point();
  };
  e.audit_points = {
      proto.to_point(),
      variant({{0.0, 0.8}, {0.8, -0.4}}, {1.0, -0.5, 0.25, 0.75}, DistHandle::normal(0.3, 1.5)),
      variant({{1.2, 0.4}, {0.4, 0.9}}, {-1.0, -2.0, 0.5, 1.5}, DistHandle::uniform(-1.0, 2.0)),
      variant({{-0.6, 0.1}, {0.1, 0.3}}, {0.05, 0.1, 0.15, 0.2}, DistHandle::cauchy(0.2, 0.7)),
      variant({{0.25, 0.5}, {0.5, 0.75}}, {2.0, 1.0, 0.0, -1.0},
              DistHandle::quantile_grid({{0.1, -2.0}, {0.25, -1.0}, {0.5, 0.0}, {0.75, 1.0}, {0.9, 2.0}})),
  };
  e.base_point = e.audit_points.front();

  e.context.set("i", 0.0);
  e.context.set("j", 1.0);

  const auto link_prob = [proto](const ParamPoint& p, const Context& c) {
    return network_link_prob(proto.with_point(p), static_cast<int>(c.scalar("i")),
                             static_cast<int>(c.scalar("j")));
  };
  e.counterfactuals = {
      {make_cf("link_prob", {"i", "j"}, link_prob), true},
      {make_cf("fe_ranking", {},
               [proto](const ParamPoint& p, const Context&) {
                 return ranking_code(fixed_effect_ranking(proto.with_point(p)));
               }),
       true},
      {make_cf("a_level", {},
               [](const ParamPoint& p, const Context&) { return p.coord("A_1"); }), false},
      {make_cf("w_level", {},
               [](const ParamPoint& p, const Context&) { return p.coord("w_0_1"); }), false},
  };

  e.normalization.name = "two_quantile";
  e.normalization.family_id = e.family.family_id;
  e.normalization.section = [proto](const ParamPoint& p) {
    const NetworkModel m = proto.with_point(p);
    return two_quantile_normalize(m, m.alpha_q).to_point();
  };

  e.orbit_invariant = [link_prob, ctx = e.context](const ParamPoint& p) {
    return link_prob(p, ctx);
  };
  return e;
}

CatalogEntry make_temperature_entry() {
  CatalogEntry e;
  e.id = "temperature";
  e.family = temperature_shift_family();

  const auto point = [](double from, double to) {
    ParamPoint p;
    p.set_coord("t_from", from);
    p.set_coord("t_to", to);
    return p;
  };
  e.audit_points = {point(1.0, 11.0), point(-5.0, 5.5), point(15.2, 18.7), point(100.0, 90.0),
                    point(0.3, 0.45)};
  e.base_point = e.audit_points.front();

  e.counterfactuals = {
      {make_cf("temp_delta", {},
               [](const ParamPoint& p, const Context&) {
                 return p.coord("t_to") - p.coord("t_from");
               }),
       true},
      {make_cf("temp_pct", {},
               [](const ParamPoint& p, const Context&) {
                 const double from = p.coord("t_from");
                 if (from == 0.0) throw ZeroDenominatorError("temperature is zero");
                 return (p.coord("t_to") - from) / from;
               }),
       false},
  };

  // Anchor the base reading at 1, not 0: the zero anchor would park every
  // representative on the percentage counterfactual's singular locus.
  e.normalization.name = "anchor_from_one";
  e.normalization.family_id = e.family.family_id;
  e.normalization.section = [fam = e.family](const ParamPoint& p) {
    const GroupElement g{fam.family_id, {1.0 - p.coord("t_from")}};
    return apply(fam, g, p);
  };

  e.orbit_invariant = [](const ParamPoint& p) {
    return p.coord("t_to") - p.coord("t_from");
  };
  return e;
}

}  // namespace

const CatalogCounterfactual& CatalogEntry::find(const std::string& name) const {
  for (const auto& cf : counterfactuals)
    if (cf.q.name == name) return cf;
  throw UnknownNameError("model '" + id + "' has no counterfactual '" + name + "'");
}

std::vector<std::string> catalog_ids() { return {"binary", "logit", "network", "temperature"}; }

const CatalogEntry& catalog_entry(const std::string& id) {
  static const std::map<std::string, CatalogEntry> registry = [] {
    std::map<std::string, CatalogEntry> r;
    r.emplace("binary", make_binary_entry());
    r.emplace("logit", make_logit_entry());
    r.emplace("network", make_network_entry());
    r.emplace("temperature", make_temperature_entry());
    return r;
  }();
  auto it = registry.find(id);
  if (it == registry.end()) throw UnknownNameError("no catalog model named '" + id + "'");
  return it->second;
}

}  // namespace normaudit
