#include "spectral/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spectral {
namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kNegativeTol = 1e-9;
constexpr double kMarginTol = 1e-8;

void check_square(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw std::domain_error("copula: argument outside [0,1]^2");
}

double midpoint(int i, int grid) { return (i + 0.5) / grid; }

// Family-specific sufficient condition for nonnegativity.
double analytic_margin(const SpectralCopula& c) {
  const Basis& basis = c.basis();
  if (const auto* f = std::get_if<family::PiecewiseSign>(&basis.family())) {
    // disjoint supports: each cell only needs |theta_i| <= 1
    double worst = 0.0;
    for (const Term& t : c.terms()) {
      const auto k = static_cast<std::size_t>(t.index.k);
      const double h = f->breakpoints[k] - f->breakpoints[k - 1];
      worst = std::max(worst, std::abs(t.lambda) / h);
    }
    return 1.0 - worst;
  }
  double margin = 1.0;
  for (const Term& t : c.terms()) {
    const Extrema e = basis.extrema(t.index);
    if (t.lambda < 0.0) {
      const double peak = std::max(std::abs(e.min_phi), std::abs(e.max_phi));
      margin += t.lambda * peak * peak;
    } else if (t.lambda > 0.0) {
      margin += t.lambda * e.min_phi * e.max_phi;
    }
  }
  return margin;
}

Verdict decide(ValidityReport& r) {
  if (r.margin_deviation > kMarginTol) return Verdict::invalid;
  if (r.grid_min_density < -kNegativeTol) return Verdict::invalid;
  if (r.analytic_ok) return std::abs(r.analytic_margin) <= kBoundaryTol ? Verdict::valid_boundary : Verdict::valid;
  r.grid_adjudicated = true;
  return Verdict::valid;
}

}  // namespace

SpectralCopula::SpectralCopula(Basis basis, std::vector<Term> terms)
    : basis_(std::move(basis)), terms_(std::move(terms)) {
  for (const Term& t : terms_) {
    basis_.require(t.index);
    if (!std::isfinite(t.lambda)) throw std::invalid_argument("copula: non-finite coefficient");
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < terms_.size(); ++i)
    if (terms_[i].index == terms_[i - 1].index)
      throw std::invalid_argument("copula: duplicate coefficient index " + to_string(terms_[i].index));
}

double SpectralCopula::coefficient(BasisIndex index) const {
  for (const Term& t : terms_)
    if (t.index == index) return t.lambda;
  return 0.0;
}

double SpectralCopula::sup_abs_lambda() const {
  double s = 0.0;
  for (const Term& t : terms_) s = std::max(s, std::abs(t.lambda));
  return s;
}

double SpectralCopula::sum_sq_lambda() const {
  double s = 0.0;
  for (const Term& t : terms_) s += t.lambda * t.lambda;
  return s;
}

double SpectralCopula::density(double u, double v) const {
  check_square(u, v);
  double s = 1.0;
  for (const Term& t : terms_) s += t.lambda * basis_.phi(t.index, u) * basis_.phi(t.index, v);
  return s;
}

double SpectralCopula::cdf(double u, double v) const {
  check_square(u, v);
  double s = u * v;
  for (const Term& t : terms_) s += t.lambda * basis_.antiderivative(t.index, u) * basis_.antiderivative(t.index, v);
  return s;
}

double SpectralCopula::conditional_cdf(double u, double v) const {
  check_square(u, v);
  double s = v;
  for (const Term& t : terms_) s += t.lambda * basis_.phi(t.index, u) * basis_.antiderivative(t.index, v);
  return s;
}

quad::Rule quadrature_for(const Basis& basis) {
  if (basis.piecewise_constant()) {
    const auto breaks = basis.discontinuities();
    return quad::composite(quad::gauss_legendre(4), breaks);
  }
  return quad::gauss_legendre(64);
}

SpectralCopula fold(const SpectralCopula& c, int n) {
  if (n < 1) throw std::invalid_argument("fold: n must be >= 1");
  std::vector<Term> terms(c.terms().begin(), c.terms().end());
  for (Term& t : terms) t.lambda = std::pow(t.lambda, n);
  return {c.basis(), std::move(terms)};
}

SpectralCopula convex_combination(std::span<const double> weights, std::span<const SpectralCopula> parts) {
  if (weights.size() != parts.size() || parts.empty())
    throw std::invalid_argument("convex_combination: need one weight per copula");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("convex_combination: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("convex_combination: weights must sum to 1");

  std::vector<Term> terms;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].basis() == parts[0].basis()))
      throw std::invalid_argument("convex_combination: copulas must share a basis");
    for (const Term& t : parts[i].terms()) {
      auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& s) { return s.index == t.index; });
      if (it == terms.end()) {
        terms.push_back({t.index, weights[i] * t.lambda});
      } else {
        it->lambda += weights[i] * t.lambda;
      }
    }
  }
  return {parts[0].basis(), std::move(terms)};
}

StarProduct::StarProduct(SpectralCopula a, SpectralCopula b, int nodes_per_piece)
    : a_(std::move(a)), b_(std::move(b)) {
  auto breaks = a_.basis().discontinuities();
  const auto more = b_.basis().discontinuities();
  breaks.insert(breaks.end(), more.begin(), more.end());
  rule_ = quad::composite(quad::gauss_legendre(nodes_per_piece), breaks);
}

double StarProduct::operator()(double u, double v) const {
  return quad::integrate(rule_, [&](double t) { return a_.density(u, t) * b_.density(t, v); });
}

SpectralCopula two_value_step(double alpha, double lambda) {
  return {Basis::two_value_step(alpha), {{{1}, lambda}}};
}

SpectralCopula piecewise_sign(std::vector<double> breakpoints, std::span<const double> thetas) {
  Basis basis = Basis::piecewise_sign(breakpoints);
  if (static_cast<int>(thetas.size()) != basis.finite_size())
    throw std::invalid_argument("piecewise_sign: need one theta per cell");
  std::vector<Term> terms;
  for (std::size_t i = 0; i < thetas.size(); ++i)
    terms.push_back({{static_cast<int>(i) + 1}, thetas[i] * (breakpoints[i + 1] - breakpoints[i])});
  return {std::move(basis), std::move(terms)};
}

SpectralCopula fgm(double lambda) { return {Basis::shifted_legendre(), {{{1}, lambda}}}; }

SpectralCopula legendre_fgm(double lambda1, double lambda2) {
  return {Basis::shifted_legendre(), {{{1}, lambda1}, {{2}, lambda2}}};
}

SpectralCopula cosine_single(double lambda) { return {Basis::cosine(), {{{1}, lambda}}}; }

SpectralCopula model(double mu1, double mu2) {
  if (!(2.0 * std::abs(mu1) + 2.0 * std::abs(mu2) <= 1.0 + kBoundaryTol))
    throw std::invalid_argument("model: requires 2|mu1| + 2|mu2| <= 1");
  return {Basis::sine_cosine(), {{{1, Wave::sine}, mu1}, {{2, Wave::sine}, mu2}}};
}

SpectralCopula taurho(double mu1) {
  if (!(std::abs(mu1) <= 0.11 + kBoundaryTol)) throw std::invalid_argument("taurho: requires |mu1| <= 0.11");
  return {Basis::sine_cosine(), {{{1, Wave::sine}, mu1}, {{2, Wave::sine}, -4.0 * mu1}}};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::valid:
      return "Valid";
    case Verdict::valid_boundary:
      return "ValidBoundary";
    case Verdict::invalid:
      return "Invalid";
  }
  return "Invalid";
}

DensityRange density_grid_range(const SpectralCopula& c, int grid) {
  if (grid < 1) throw std::invalid_argument("density_grid_range: grid must be positive");
  const auto n = static_cast<std::size_t>(grid);
  const auto terms = c.terms();
  // table[t * n + i] = phi_t(x_i)
  std::vector<double> table(terms.size() * n);
  for (std::size_t t = 0; t < terms.size(); ++t)
    for (std::size_t i = 0; i < n; ++i)
      table[t * n + i] = c.basis().phi(terms[t].index, midpoint(static_cast<int>(i), grid));

  DensityRange range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double d = 1.0;
      for (std::size_t t = 0; t < terms.size(); ++t) d += terms[t].lambda * table[t * n + i] * table[t * n + j];
      range.min = std::min(range.min, d);
      range.max = std::max(range.max, d);
    }
  }
  return range;
}

ValidityReport validate(const SpectralCopula& c, int grid) {
  ValidityReport r;
  r.grid_size = grid;
  r.analytic_margin = analytic_margin(c);
  r.analytic_ok = r.analytic_margin >= -kBoundaryTol;
  const DensityRange range = density_grid_range(c, grid);
  r.grid_min_density = range.min;
  r.grid_max_density = range.max;
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    r.margin_deviation = std::max({r.margin_deviation, std::abs(c.cdf(x, 1.0) - x), std::abs(c.cdf(1.0, x) - x)});
  }
  r.verdict = decide(r);
  return r;
}

ValidityReport validate_candidate(const std::function<double(double, double)>& density,
                                  const std::function<double(double, double)>& cdf,
                                  std::optional<double> margin, int grid) {
  ValidityReport r;
  r.grid_size = grid;
  r.analytic_margin = margin.value_or(std::numeric_limits<double>::quiet_NaN());
  r.analytic_ok = margin.has_value() && *margin >= -kBoundaryTol;
  r.grid_min_density = std::numeric_limits<double>::infinity();
  r.grid_max_density = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double d = density(midpoint(i, grid), midpoint(j, grid));
      r.grid_min_density = std::min(r.grid_min_density, d);
      r.grid_max_density = std::max(r.grid_max_density, d);
    }
  }
  for (int i = 0; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    r.margin_deviation = std::max({r.margin_deviation, std::abs(cdf(x, 1.0) - x), std::abs(cdf(1.0, x) - x)});
  }
  r.verdict = decide(r);
  return r;
}

SineCounterexample reject_sine_counterexample(int terms) {
  if (terms < 0) throw std::invalid_argument("reject_sine_counterexample: terms must be >= 0");
  constexpr double pi = std::numbers::pi;
  const auto cdf = [terms](double u, double v) {
    double s = 0.0;
    for (int j = 0; j < terms; ++j) {
      const double k = 2.0 * j + 1.0;
      s += (1.0 - std::cos(k * pi * u)) * (1.0 - std::cos(k * pi * v)) / (k * k);
    }
    return 2.0 / (pi * pi) * s;
  };
  const auto density = [terms](double u, double v) {
    double s = 0.0;
    for (int j = 0; j < terms; ++j) {
      const double k = 2.0 * j + 1.0;
      s += std::sin(k * pi * u) * std::sin(k * pi * v);
    }
    return 2.0 * s;
  };

  SineCounterexample out;
  out.terms = terms;
  constexpr int kPoints = 10000;
  for (int i = 0; i <= kPoints; ++i) {
    const double u = static_cast<double>(i) / kPoints;
    out.max_margin_deviation = std::max(out.max_margin_deviation, std::abs(cdf(u, 1.0) - u));
  }
  out.deviation_at_half = std::abs(cdf(0.5, 1.0) - 0.5);
  // the basis lacks the constant function, so no Type-I analytic condition applies
  out.validity = validate_candidate(density, cdf, std::nullopt);
  return out;
}

}  // namespace spectral
