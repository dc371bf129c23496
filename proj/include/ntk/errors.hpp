#pragma once

#include <stdexcept>
#include <string>

namespace ntk {

// Failures of the numerical pipeline. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NTK_DEFINE_ERROR(Name, Base)         \
  class Name : public Base {                 \
   public:                                   \
    using Base::Base;                        \
  };

NTK_DEFINE_ERROR(NotPositiveDefinite, NumericalError)
NTK_DEFINE_ERROR(NonConvergence, NumericalError)
NTK_DEFINE_ERROR(DomainError, NumericalError)
NTK_DEFINE_ERROR(DegenerateGaussian, NumericalError)
NTK_DEFINE_ERROR(QuadratureNonConvergence, NumericalError)
NTK_DEFINE_ERROR(NegativeTail, NumericalError)
NTK_DEFINE_ERROR(ZeroMeanDerivative, NumericalError)
NTK_DEFINE_ERROR(SingularKernel, NumericalError)
NTK_DEFINE_ERROR(SingularDesign, NumericalError)
NTK_DEFINE_ERROR(SingularReference, NumericalError)
NTK_DEFINE_ERROR(ShapeError, NumericalError)
NTK_DEFINE_ERROR(ContextMismatch, NumericalError)
NTK_DEFINE_ERROR(NonSmoothActivation, NumericalError)
NTK_DEFINE_ERROR(Divergence, NumericalError)

#undef NTK_DEFINE_ERROR

}  // namespace ntk
