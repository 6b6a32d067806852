#pragma once

#include <stdexcept>
#include <string>

namespace legimpact {

// Trajectory generation
struct UnreachablePoint : std::runtime_error {
  explicit UnreachablePoint(const std::string& what) : std::runtime_error(what) {}
};
struct NoIkSolution : std::runtime_error {
  explicit NoIkSolution(const std::string& what) : std::runtime_error(what) {}
};

// Filter numerics
struct CovarianceNotPSD : std::runtime_error {
  explicit CovarianceNotPSD(const std::string& what) : std::runtime_error(what) {}
};
struct SingularInnovationCovariance : std::runtime_error {
  explicit SingularInnovationCovariance(const std::string& what) : std::runtime_error(what) {}
};

// Training
struct DivergedTraining : std::runtime_error {
  explicit DivergedTraining(const std::string& what) : std::runtime_error(what) {}
};

// Model file
struct BadMagic : std::runtime_error {
  explicit BadMagic(const std::string& what) : std::runtime_error(what) {}
};
struct VersionMismatch : std::runtime_error {
  explicit VersionMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct DimMismatch : std::runtime_error {
  explicit DimMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace legimpact
