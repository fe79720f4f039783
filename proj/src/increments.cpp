#include "smalldev/increments.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "smalldev/errors.hpp"

namespace smalldev {

std::string_view to_string(LawKind kind) noexcept {
  switch (kind) {
    case LawKind::rademacher:
      return "rademacher";
    case LawKind::gaussian:
      return "gaussian";
    case LawKind::uniform_centered:
      return "uniform_centered";
    case LawKind::exponential_centered:
      return "exponential_centered";
    case LawKind::symmetric_pareto:
      return "symmetric_pareto";
  }
  return "unknown";
}

LawKind parse_law_kind(std::string_view name) {
  for (auto kind : {LawKind::rademacher, LawKind::gaussian, LawKind::uniform_centered,
                    LawKind::exponential_centered, LawKind::symmetric_pareto}) {
    if (name == to_string(kind)) return kind;
  }
  throw InvalidParameter("law", "unknown increment law '" + std::string(name) + "'");
}

IncrementLaw IncrementLaw::make(LawKind kind, double sigma, std::optional<double> moment_eps,
                                double tail_index) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("sigma", "sigma must be positive, got " + std::to_string(sigma));
  }
  double eps = moment_eps.value_or(0.5);
  if (kind == LawKind::symmetric_pareto) {
    if (!(tail_index > 2.0) || !std::isfinite(tail_index)) {
      throw InvalidParameter("tail_index", "symmetric_pareto needs tail index > 2, got " +
                                               std::to_string(tail_index));
    }
    eps = moment_eps.value_or((tail_index - 2.0) / 2.0);
    if (!(eps < tail_index - 2.0)) {
      throw InvalidParameter("moment_eps", "symmetric_pareto with tail index " +
                                               std::to_string(tail_index) +
                                               " has no moment of order 2 + " + std::to_string(eps));
    }
  }
  if (!(eps > 0.0)) {
    throw InvalidParameter("moment_eps", "moment_eps must be positive, got " + std::to_string(eps));
  }
  return IncrementLaw(kind, sigma, eps, tail_index);
}

IncrementLaw::IncrementLaw(LawKind kind, double sigma, double moment_eps, double tail_index)
    : kind_(kind), sigma_(sigma), moment_eps_(moment_eps), tail_index_(tail_index) {
  if (kind_ == LawKind::symmetric_pareto) {
    pareto_scale_ = 1.0 / std::sqrt(tail_index_ / (tail_index_ - 2.0));
  }
}

double IncrementLaw::draw_unit(rng::RandomStream& stream) const noexcept {
  switch (kind_) {
    case LawKind::rademacher:
      return (stream.next_u64() & 1u) ? 1.0 : -1.0;
    case LawKind::gaussian:
      return stream.next_normal();
    case LawKind::uniform_centered:
      return std::numbers::sqrt3 * (2.0 * stream.next_uniform() - 1.0);
    case LawKind::exponential_centered:
      return -std::log(stream.next_uniform()) - 1.0;
    case LawKind::symmetric_pareto: {
      const std::uint64_t bits = stream.next_u64();
      // 53 bits for the magnitude, one more for the sign.
      const double u = (static_cast<double>(bits >> 11) + 1.0) / 9007199254740992.0;
      const double magnitude = std::pow(u, -1.0 / tail_index_) * pareto_scale_;
      return (bits & 1u) ? magnitude : -magnitude;
    }
  }
  return 0.0;
}

double IncrementLaw::max_abs_unit_increment() const noexcept {
  switch (kind_) {
    case LawKind::rademacher:
      return 1.0;
    case LawKind::uniform_centered:
      return std::numbers::sqrt3;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

}  // namespace smalldev
