#include "ecogame/game_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ecogame {

namespace {

void check_fraction(double value, const char* what) {
  if (!(value >= -kDomainTolerance && value <= 1.0 + kDomainTolerance)) {
    throw std::domain_error(std::string(what) + " = " + std::to_string(value) +
                            " lies outside [0, 1]");
  }
}

void check_strategy(int strategy) {
  if (strategy != 1 && strategy != 2) {
    throw std::out_of_range("strategy index must be 1 or 2, got " +
                            std::to_string(strategy));
  }
}

double magnitude(const Payoff2x2& a) {
  return std::max({1.0, std::abs(a.a11), std::abs(a.a12), std::abs(a.a21),
                   std::abs(a.a22)});
}

}  // namespace

double Payoff2x2::at(int row, int col) const {
  check_strategy(row);
  check_strategy(col);
  if (row == 1) return col == 1 ? a11 : a12;
  return col == 1 ? a21 : a22;
}

bool Payoff2x2::is_finite() const {
  return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
         std::isfinite(a22);
}

void validate(const Payoff2x2& a) {
  if (!a.is_finite()) {
    throw std::invalid_argument("payoff matrix has a non-finite entry");
  }
}

void validate(const GamePair& pair) {
  validate(pair.depleted);
  validate(pair.replenished);
}

namespace detail {

Payoff2x2 lerp(const GamePair& pair, double w) {
  const double v = 1.0 - w;
  const Payoff2x2& lo = pair.depleted;
  const Payoff2x2& hi = pair.replenished;
  return {w * hi.a11 + v * lo.a11, w * hi.a12 + v * lo.a12,
          w * hi.a21 + v * lo.a21, w * hi.a22 + v * lo.a22};
}

double row_payoff(const Payoff2x2& a, int strategy, double x) {
  if (strategy == 1) return a.a11 * x + a.a12 * (1.0 - x);
  return a.a21 * x + a.a22 * (1.0 - x);
}

}  // namespace detail

Payoff2x2 interpolate(const GamePair& pair, double w) {
  check_fraction(w, "interpolation weight");
  return detail::lerp(pair, std::clamp(w, 0.0, 1.0));
}

double expected_payoff(const Payoff2x2& a, int strategy, double x) {
  check_strategy(strategy);
  check_fraction(x, "strategy share x");
  return detail::row_payoff(a, strategy, x);
}

double average_payoff(const Payoff2x2& a, double x) {
  return x * expected_payoff(a, 1, x) + (1.0 - x) * expected_payoff(a, 2, x);
}

Payoff2x2 hawk_dove_matrix(double v, double c) {
  if (!(std::isfinite(v) && std::isfinite(c))) {
    throw std::invalid_argument("hawk-dove parameters must be finite");
  }
  if (!(v > 0.0)) {
    throw std::invalid_argument("hawk-dove resource value v must be positive");
  }
  if (!(c > v)) {
    throw std::invalid_argument(
        "hawk-dove cost c must exceed the resource value v");
  }
  return {(v - c) / 2.0, v, 0.0, v / 2.0};
}

std::optional<double> mixed_equilibrium(const Payoff2x2& a) {
  const double denominator = a.a11 - a.a12 - a.a21 + a.a22;
  if (std::abs(denominator) < kDomainTolerance) return std::nullopt;
  const double x = (a.a22 - a.a12) / denominator;
  if (!(x > 0.0 && x < 1.0)) return std::nullopt;
  const double gap = (a.a11 - a.a21) * x + (a.a12 - a.a22) * (1.0 - x);
  if (std::abs(gap) > kDomainTolerance * magnitude(a)) return std::nullopt;
  return x;
}

EquilibriumReport classify_2x2(const Payoff2x2& a) {
  validate(a);
  EquilibriumReport report;
  const double tol = kDomainTolerance * magnitude(a);
  if (std::abs(a.a11 - a.a21) <= tol && std::abs(a.a12 - a.a22) <= tol) {
    report.degenerate = true;
    return report;
  }

  // In (A, A^T) the column player's payoff at (i, j) is a_{ji}, so both
  // best-response checks read the same matrix column-wise.
  auto best_response = [&](int mine, int theirs, bool& tie) {
    const int other = mine == 1 ? 2 : 1;
    const double margin = a.at(mine, theirs) - a.at(other, theirs);
    if (std::abs(margin) <= tol) tie = true;
    return margin >= -tol;
  };

  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      bool tie = false;
      const bool row_ok = best_response(i, j, tie);
      const bool col_ok = best_response(j, i, tie);
      if (!(row_ok && col_ok)) continue;
      if (tie) report.has_ties = true;
      if (i == j) {
        report.pure_symmetric.push_back(i);
      } else {
        report.pure_asymmetric.emplace_back(i, j);
      }
    }
  }
  report.mixed_interior = mixed_equilibrium(a);
  return report;
}

bool check_pd_conditions(const GamePair& pair) {
  const Payoff2x2& lo = pair.depleted;
  const Payoff2x2& hi = pair.replenished;
  return lo.a11 > lo.a21 && lo.a12 > lo.a22 && hi.a11 < hi.a21 &&
         hi.a12 < hi.a22;
}

}  // namespace ecogame
