#include "spectral/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace spectral {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("basis: argument outside [0,1]");
}

double sign_at_least_zero(double t) { return t >= 0.0 ? 1.0 : -1.0; }

struct Cell {
  double lo;
  double hi;
};

Cell cell(const family::PiecewiseSign& f, int k) {
  return {f.breakpoints[static_cast<std::size_t>(k - 1)], f.breakpoints[static_cast<std::size_t>(k)]};
}

// [lo, hi) with the last cell closed at 1
bool in_cell(Cell c, double x) { return x >= c.lo && (x < c.hi || (c.hi == 1.0 && x == 1.0)); }

}  // namespace

std::string to_string(BasisIndex index) {
  switch (index.wave) {
    case Wave::cosine:
      return "cos" + std::to_string(index.k);
    case Wave::sine:
      return "sin" + std::to_string(index.k);
    case Wave::none:
      break;
  }
  return std::to_string(index.k);
}

Basis::Basis(BasisFamily family) : family_(std::move(family)) {
  std::visit(overloaded{
                 [](const family::TwoValueStep& f) {
                   if (!(f.alpha > 0.0) || !std::isfinite(f.alpha))
                     throw std::invalid_argument("two_value_step: alpha must be positive");
                 },
                 [](const family::PiecewiseSign& f) {
                   const auto& a = f.breakpoints;
                   if (a.size() < 2)
                     throw std::invalid_argument("piecewise_sign: need at least two breakpoints");
                   if (!(a.front() >= 0.0))
                     throw std::invalid_argument("piecewise_sign: first breakpoint must be >= 0");
                   if (a.back() != 1.0)
                     throw std::invalid_argument("piecewise_sign: last breakpoint must equal 1");
                   for (std::size_t i = 1; i < a.size(); ++i)
                     if (!(a[i] > a[i - 1]))
                       throw std::invalid_argument("piecewise_sign: breakpoints must be strictly increasing");
                 },
                 [](const auto&) {},
             },
             family_);
}

std::string_view Basis::name() const {
  return std::visit(overloaded{
                        [](const family::SineCosine&) { return std::string_view{"sine_cosine"}; },
                        [](const family::Cosine&) { return std::string_view{"cosine"}; },
                        [](const family::ShiftedLegendre&) { return std::string_view{"shifted_legendre"}; },
                        [](const family::TwoValueStep&) { return std::string_view{"two_value_step"}; },
                        [](const family::PiecewiseSign&) { return std::string_view{"piecewise_sign"}; },
                    },
                    family_);
}

bool Basis::contains(BasisIndex index) const {
  if (index.k < 1) return false;
  return std::visit(overloaded{
                        [&](const family::SineCosine&) { return index.wave != Wave::none; },
                        [&](const family::PiecewiseSign& f) {
                          return index.wave == Wave::none &&
                                 index.k < static_cast<int>(f.breakpoints.size());
                        },
                        [&](const family::TwoValueStep&) { return index.wave == Wave::none && index.k == 1; },
                        [&](const auto&) { return index.wave == Wave::none; },
                    },
                    family_);
}

void Basis::require(BasisIndex index) const {
  if (!contains(index))
    throw std::out_of_range("basis " + std::string(name()) + ": no function with index " + to_string(index));
}

double Basis::phi(BasisIndex index, double x) const {
  require(index);
  check_unit(x);
  const int k = index.k;
  return std::visit(overloaded{
                        [&](const family::SineCosine&) {
                          const double arg = 2.0 * kPi * k * x;
                          return kSqrt2 * (index.wave == Wave::cosine ? std::cos(arg) : std::sin(arg));
                        },
                        [&](const family::Cosine&) { return kSqrt2 * std::cos(kPi * k * x); },
                        [&](const family::ShiftedLegendre&) {
                          return std::sqrt(2.0 * k + 1.0) * legendre_p(k, 2.0 * x - 1.0);
                        },
                        [&](const family::TwoValueStep& f) {
                          const double r = std::sqrt(f.alpha);
                          return x < 1.0 / (f.alpha + 1.0) ? r : -1.0 / r;
                        },
                        [&](const family::PiecewiseSign& f) {
                          const Cell c = cell(f, k);
                          if (!in_cell(c, x)) return 0.0;
                          return sign_at_least_zero(2.0 * x - c.lo - c.hi) / std::sqrt(c.hi - c.lo);
                        },
                    },
                    family_);
}

double Basis::antiderivative(BasisIndex index, double x) const {
  require(index);
  check_unit(x);
  const int k = index.k;
  return std::visit(
      overloaded{
          [&](const family::SineCosine&) {
            const double w = 2.0 * kPi * k;
            return index.wave == Wave::cosine ? kSqrt2 * std::sin(w * x) / w
                                              : kSqrt2 * (1.0 - std::cos(w * x)) / w;
          },
          [&](const family::Cosine&) { return kSqrt2 * std::sin(kPi * k * x) / (kPi * k); },
          [&](const family::ShiftedLegendre&) {
            // 2 sqrt(2k+1) Phi_k = phi_{k+1}/sqrt(2k+3) - phi_{k-1}/sqrt(2k-1), phi_0 = 1
            const double y = 2.0 * x - 1.0;
            return (legendre_p(k + 1, y) - legendre_p(k - 1, y)) / (2.0 * std::sqrt(2.0 * k + 1.0));
          },
          [&](const family::TwoValueStep& f) {
            const double r = std::sqrt(f.alpha);
            return x < 1.0 / (f.alpha + 1.0) ? r * x : (1.0 - x) / r;
          },
          [&](const family::PiecewiseSign& f) {
            const Cell c = cell(f, k);
            if (x <= c.lo || x >= c.hi) return 0.0;
            const double s = std::sqrt(c.hi - c.lo);
            const double mid = 0.5 * (c.lo + c.hi);
            return x < mid ? -(x - c.lo) / s : (x - c.hi) / s;
          },
      },
      family_);
}

Extrema Basis::extrema(BasisIndex index) const {
  require(index);
  const int k = index.k;
  return std::visit(overloaded{
                        [&](const family::ShiftedLegendre&) {
                          const double s = std::sqrt(2.0 * k + 1.0);
                          return Extrema{s * legendre_min(k), s};
                        },
                        [&](const family::TwoValueStep& f) {
                          const double r = std::sqrt(f.alpha);
                          return Extrema{-1.0 / r, r};
                        },
                        [&](const family::PiecewiseSign& f) {
                          const Cell c = cell(f, k);
                          const double s = 1.0 / std::sqrt(c.hi - c.lo);
                          return Extrema{-s, s};
                        },
                        [&](const auto&) { return Extrema{-kSqrt2, kSqrt2}; },
                    },
                    family_);
}

bool Basis::piecewise_constant() const {
  return std::holds_alternative<family::TwoValueStep>(family_) ||
         std::holds_alternative<family::PiecewiseSign>(family_);
}

std::vector<double> Basis::discontinuities() const {
  std::vector<double> out;
  if (const auto* f = std::get_if<family::TwoValueStep>(&family_)) {
    out.push_back(1.0 / (f->alpha + 1.0));
  } else if (const auto* g = std::get_if<family::PiecewiseSign>(&family_)) {
    const auto& a = g->breakpoints;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      out.push_back(a[i]);
      out.push_back(0.5 * (a[i] + a[i + 1]));
    }
  }
  std::erase_if(out, [](double t) { return !(t > 0.0 && t < 1.0); });
  return out;
}

int Basis::finite_size() const {
  if (std::holds_alternative<family::TwoValueStep>(family_)) return 1;
  if (const auto* g = std::get_if<family::PiecewiseSign>(&family_))
    return static_cast<int>(g->breakpoints.size()) - 1;
  return 0;
}

double legendre_p(int k, double y) {
  if (k < 0) throw std::invalid_argument("legendre_p: negative degree");
  if (k == 0) return 1.0;
  double p0 = 1.0;
  double p1 = y;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2.0 * n + 1.0) * y * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_dp(int k, double y) {
  if (k < 0) throw std::invalid_argument("legendre_dp: negative degree");
  if (k == 0) return 0.0;
  double d0 = 0.0;  // P'_{n-1}
  double d1 = 1.0;  // P'_n, n = 1
  double p0 = 1.0;
  double p1 = y;
  for (int n = 1; n < k; ++n) {
    const double d2 = d0 + (2.0 * n + 1.0) * p1;
    const double p2 = ((2.0 * n + 1.0) * y * p1 - n * p0) / (n + 1.0);
    d0 = d1;
    d1 = d2;
    p0 = p1;
    p1 = p2;
  }
  return d1;
}

double legendre_min(int k) {
  if (k < 1) throw std::invalid_argument("legendre_min: degree must be >= 1");
  if (k % 2 == 1) return -1.0;

  static std::mutex mutex;
  static std::map<int, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }

  constexpr int kGrid = 4096;
  int best = 0;
  double best_value = legendre_p(k, -1.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double y = -1.0 + 2.0 * i / kGrid;
    const double p = legendre_p(k, y);
    if (p < best_value) {
      best_value = p;
      best = i;
    }
  }
  // bisect P_k' on the bracketing grid interval
  double lo = -1.0 + 2.0 * std::max(best - 1, 0) / kGrid;
  double hi = -1.0 + 2.0 * std::min(best + 1, kGrid) / kGrid;
  if (legendre_dp(k, lo) < 0.0 && legendre_dp(k, hi) > 0.0) {
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (legendre_dp(k, mid) < 0.0 ? lo : hi) = mid;
    }
    best_value = std::min(best_value, legendre_p(k, 0.5 * (lo + hi)));
  }

  std::lock_guard lock(mutex);
  cache.emplace(k, best_value);
  return best_value;
}

}  // namespace spectral
