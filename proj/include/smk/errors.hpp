#pragma once

#include <stdexcept>
#include <string>

namespace smk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SMK_DEFINE_ERROR(Name)        \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

SMK_DEFINE_ERROR(InverseOfZero);
SMK_DEFINE_ERROR(ZeroElement);
SMK_DEFINE_ERROR(ModulusMismatch);
SMK_DEFINE_ERROR(ZeroPolynomial);
SMK_DEFINE_ERROR(ZeroDivisor);
SMK_DEFINE_ERROR(ParseError);
SMK_DEFINE_ERROR(RangeTooLarge);
SMK_DEFINE_ERROR(NonDivisorOrder);
SMK_DEFINE_ERROR(TooLarge);
SMK_DEFINE_ERROR(ConditionViolation);
SMK_DEFINE_ERROR(PreconditionFailure);
SMK_DEFINE_ERROR(NoQualifyingPrime);
SMK_DEFINE_ERROR(DegenerateRotation);
SMK_DEFINE_ERROR(ZeroX);
SMK_DEFINE_ERROR(EqualR);
SMK_DEFINE_ERROR(InfeasibleParams);
SMK_DEFINE_ERROR(FullRank);
SMK_DEFINE_ERROR(ZeroPsi);
SMK_DEFINE_ERROR(VerificationFailure);

#undef SMK_DEFINE_ERROR

}  // namespace smk
