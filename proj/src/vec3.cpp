#include "nct/vec3.hpp"

#include <sstream>

#include "nct/errors.hpp"

namespace nct {

Direction::Direction(double x, double y, double z) : v_{x, y, z} {
  const double n = norm(v_);
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "direction norm " << n << " differs from 1 by more than 1e-12";
    throw DomainError(msg.str());
  }
}

Direction Direction::normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero or non-finite vector");
  Direction d;
  d.v_ = v * (1.0 / n);
  return d;
}

ConfigError::ConfigError(std::vector<FieldError> errors)
    : Error([&] {
        std::string text = "configuration invalid:";
        for (const auto& e : errors) text += "\n  " + e.path + ": " + e.message;
        return text;
      }()),
      errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string path, std::string message)
    : ConfigError(std::vector<FieldError>{FieldError{std::move(path), std::move(message)}}) {}

}  // namespace nct
