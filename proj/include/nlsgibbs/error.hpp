#pragma once

#include <stdexcept>
#include <string>

namespace nlsgibbs {

/// Base of every error the library raises. `kind()` is a stable machine-readable tag
/// used by the CLI's error records.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &what) : std::runtime_error(what), kind_(std::move(kind)) {}
    [[nodiscard]] const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

#define NLSGIBBS_DEFINE_ERROR(Name, tag)                                          \
    class Name : public Error {                                                 \
      public:                                                                   \
        explicit Name(const std::string &what) : Error(tag, what) {}            \
    };

NLSGIBBS_DEFINE_ERROR(DomainError, "domain")
NLSGIBBS_DEFINE_ERROR(ShapeError, "shape")
NLSGIBBS_DEFINE_ERROR(ResolutionError, "resolution")
NLSGIBBS_DEFINE_ERROR(SolverError, "solver")
NLSGIBBS_DEFINE_ERROR(StepSizeError, "step_size")
NLSGIBBS_DEFINE_ERROR(StatisticsError, "statistics")
NLSGIBBS_DEFINE_ERROR(DivergenceError, "divergence")
NLSGIBBS_DEFINE_ERROR(WindowError, "window")
NLSGIBBS_DEFINE_ERROR(NotInNeighborhood, "not_in_neighborhood")
NLSGIBBS_DEFINE_ERROR(ConvergenceError, "convergence")
NLSGIBBS_DEFINE_ERROR(NumericalError, "numerical")
NLSGIBBS_DEFINE_ERROR(InternalError, "internal")

#undef NLSGIBBS_DEFINE_ERROR

}  // namespace nlsgibbs
