#pragma once

#include <stdexcept>
#include <string>

namespace slb {

/// Invalid scalar argument (negative Bessel argument, bad config value, ...).
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Operation applied to the k = 0 Fourier mode where the straight-cylinder
/// mobility diverges logarithmically and mean-zero data is required.
class ZeroModeError : public std::invalid_argument {
  public:
    explicit ZeroModeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Denominator Q-function of an inverse single layer symbol fell below the
/// singularity threshold.
class SingularSymbolError : public std::runtime_error {
  public:
    explicit SingularSymbolError(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate or inadmissible filament geometry (non-regular curve, radius
/// too large for an embedded tube, ...).
class GeometryError : public std::runtime_error {
  public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Kernel evaluated at coincident source/target.
class SingularityError : public std::runtime_error {
  public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Two fields (or a field and a grid) with incompatible discretizations.
class GridMismatchError : public std::invalid_argument {
  public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// Dense linear solve failed or produced an unacceptable residual.
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace slb
