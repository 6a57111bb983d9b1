#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace ecogame {

// Tolerance used for domain checks on fractions and for Nash inequalities.
inline constexpr double kDomainTolerance = 1e-12;

/// Row player's 2x2 payoff matrix, stored row-major.
struct Payoff2x2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  double at(int row, int col) const;
  bool is_finite() const;

  friend bool operator==(const Payoff2x2&, const Payoff2x2&) = default;
};

/// Games played in a fully depleted (weight 0) and fully replenished
/// (weight 1) environment.
struct GamePair {
  Payoff2x2 depleted;
  Payoff2x2 replenished;

  friend bool operator==(const GamePair&, const GamePair&) = default;
};

/// Nash structure of the symmetric bimatrix game (A, A^T).
///
/// Strategy indices are 1-based. A profile (i, j) means the row player uses
/// pure strategy i and the column player uses j. Profiles are included under
/// non-strict best-response inequalities; `has_ties` is raised when at least
/// one listed profile holds only through an exact indifference.
struct EquilibriumReport {
  std::vector<int> pure_symmetric;
  std::vector<std::pair<int, int>> pure_asymmetric;
  std::optional<double> mixed_interior;
  bool has_ties = false;
  // Both rows identical: every profile is an equilibrium. Lists stay empty.
  bool degenerate = false;
};

void validate(const Payoff2x2& a);
void validate(const GamePair& pair);

/// Entrywise w * replenished + (1 - w) * depleted.
Payoff2x2 interpolate(const GamePair& pair, double w);

/// u(e^i, x): row i of `a` against the population (x, 1 - x).
double expected_payoff(const Payoff2x2& a, int strategy, double x);

/// u(x, x) = x u(e^1, x) + (1 - x) u(e^2, x).
double average_payoff(const Payoff2x2& a, double x);

/// [[(v - c)/2, v], [0, v/2]]; requires 0 < v < c.
Payoff2x2 hawk_dove_matrix(double v, double c);

/// Interior root of u(e^1, x) = u(e^2, x), if one exists in (0, 1).
std::optional<double> mixed_equilibrium(const Payoff2x2& a);

EquilibriumReport classify_2x2(const Payoff2x2& a);

/// Cooperation dominant when depleted, defection dominant when replenished.
bool check_pd_conditions(const GamePair& pair);

namespace detail {

// Unchecked kernels shared with the integrator, whose intermediate stages may
// sit a rounding error outside the unit cube.
Payoff2x2 lerp(const GamePair& pair, double w);
double row_payoff(const Payoff2x2& a, int strategy, double x);

}  // namespace detail

}  // namespace ecogame
