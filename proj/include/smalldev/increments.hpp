#pragma once

#include <optional>
#include <string_view>

#include "smalldev/rng.hpp"

namespace smalldev {

enum class LawKind { rademacher, gaussian, uniform_centered, exponential_centered, symmetric_pareto };

std::string_view to_string(LawKind kind) noexcept;
/// Parses the names printed by to_string. Throws InvalidParameter("law") otherwise.
LawKind parse_law_kind(std::string_view name);

/// Distribution of the i.i.d. increments X_k, standardised analytically so that
/// E X = 0 and Var X = sigma^2 hold exactly. moment_eps is the order for which
/// E|X|^{2+moment_eps} < inf is guaranteed.
class IncrementLaw {
 public:
  /// symmetric_pareto uses |Y| = U^{-1/alpha} with tail index alpha > 2, which
  /// has moments of every order below alpha; moment_eps must be < alpha - 2.
  /// The default moment_eps is 0.5, or (alpha - 2) / 2 for symmetric_pareto.
  static IncrementLaw make(LawKind kind, double sigma = 1.0,
                           std::optional<double> moment_eps = std::nullopt,
                           double tail_index = 2.5);

  LawKind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  double moment_eps() const noexcept { return moment_eps_; }
  double tail_index() const noexcept { return tail_index_; }

  /// One increment in units of sigma (mean 0, variance 1).
  double draw_unit(rng::RandomStream& stream) const noexcept;

  /// sup |X| in units of sigma; infinity for unbounded laws.
  double max_abs_unit_increment() const noexcept;

 private:
  IncrementLaw(LawKind kind, double sigma, double moment_eps, double tail_index);

  LawKind kind_;
  double sigma_;
  double moment_eps_;
  double tail_index_;
  double pareto_scale_ = 1.0;  // 1 / sqrt(alpha / (alpha - 2))
};

}  // namespace smalldev
