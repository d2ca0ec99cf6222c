#include "spectral/association.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace spectral {
namespace {

constexpr double kPi = std::numbers::pi;

double rho_numeric(const SpectralCopula& c) {
  const quad::Rule rule = quadrature_for(c.basis());
  return 12.0 * quad::integrate2(rule, [&](double u, double v) { return c.cdf(u, v); }) - 3.0;
}

double tau_numeric(const SpectralCopula& c) {
  const quad::Rule rule = quadrature_for(c.basis());
  const double s = quad::integrate2(rule, [&](double u, double v) { return c.conditional_cdf(u, v) * c.partial_v(u, v); });
  return 1.0 - 4.0 * s;
}

struct Closed {
  double rho;
  double tau;
};

Closed sine_cosine_closed(const SpectralCopula& c) {
  double rho = 0.0;
  double tau = 0.0;
  for (const Term& t : c.terms()) {
    if (t.index.wave != Wave::sine) continue;
    const double k2 = static_cast<double>(t.index.k) * t.index.k;
    const double lambda = c.coefficient({t.index.k, Wave::cosine});
    rho += t.lambda / k2;
    tau += (4.0 * t.lambda + 2.0 * lambda * t.lambda) / k2;
  }
  return {6.0 / (kPi * kPi) * rho, tau / (kPi * kPi)};
}

Closed cosine_closed(const SpectralCopula& c) {
  double linear = 0.0;
  for (const Term& t : c.terms()) {
    if (t.index.k % 2 == 0) continue;
    const double k4 = std::pow(static_cast<double>(t.index.k), 4);
    linear += t.lambda / k4;
  }
  // cross terms survive only for j + k odd, where (1 - cos pi(j+k))^2 = 4
  double cross = 0.0;
  const auto terms = c.terms();
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      const int k = terms[a].index.k;
      const int j = terms[b].index.k;
      const double factor = 1.0 - std::cos(kPi * (j + k));
      const double diff = static_cast<double>(k) * k - static_cast<double>(j) * j;
      cross += 2.0 * terms[a].lambda * terms[b].lambda * factor * factor / (diff * diff);
    }
  }
  const double pi4 = std::pow(kPi, 4);
  return {96.0 / pi4 * linear, 64.0 / pi4 * linear + 16.0 / pi4 * cross};
}

Closed legendre_closed(const SpectralCopula& c) {
  const double lambda1 = c.coefficient({1});
  double cross = 0.0;
  for (const Term& t : c.terms()) {
    const double next = c.coefficient({t.index.k + 1});
    if (next == 0.0) continue;
    const double k = t.index.k;
    cross += 2.0 * t.lambda * next / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  }
  return {lambda1, 2.0 * lambda1 / 3.0 + cross};
}

Closed step_closed(const SpectralCopula& c, double alpha) {
  const double lambda = c.coefficient({1});
  const double scale = alpha * lambda / ((1.0 + alpha) * (1.0 + alpha));
  return {3.0 * scale, 2.0 * scale};
}

std::optional<Closed> closed_form(const SpectralCopula& c) {
  const BasisFamily& f = c.basis().family();
  if (std::holds_alternative<family::SineCosine>(f)) return sine_cosine_closed(c);
  if (std::holds_alternative<family::Cosine>(f)) return cosine_closed(c);
  if (std::holds_alternative<family::ShiftedLegendre>(f)) return legendre_closed(c);
  if (const auto* s = std::get_if<family::TwoValueStep>(&f)) return step_closed(c, s->alpha);
  return std::nullopt;
}

}  // namespace

bool has_closed_association(const Basis& basis) {
  return !std::holds_alternative<family::PiecewiseSign>(basis.family());
}

AssociationValue rho_spearman(const SpectralCopula& c, AssociationMode mode) {
  if (mode == AssociationMode::closed) {
    if (auto closed = closed_form(c)) return {closed->rho, AssociationMode::closed};
  }
  return {rho_numeric(c), AssociationMode::numeric};
}

AssociationValue tau_kendall(const SpectralCopula& c, AssociationMode mode) {
  if (mode == AssociationMode::closed) {
    if (auto closed = closed_form(c)) return {closed->tau, AssociationMode::closed};
  }
  return {tau_numeric(c), AssociationMode::numeric};
}

AssociationReport associate(const SpectralCopula& c) {
  AssociationReport r;
  r.rho_numeric = rho_numeric(c);
  r.tau_numeric = tau_numeric(c);
  if (auto closed = closed_form(c)) {
    r.closed_available = true;
    r.rho_closed = closed->rho;
    r.tau_closed = closed->tau;
  } else {
    r.rho_closed = r.rho_numeric;
    r.tau_closed = r.tau_numeric;
  }
  r.rho_gap = std::abs(r.rho_closed - r.rho_numeric);
  r.tau_gap = std::abs(r.tau_closed - r.tau_numeric);
  r.tolerance = c.basis().piecewise_constant() ? 1e-6 : 1e-8;
  return r;
}

}  // namespace spectral
