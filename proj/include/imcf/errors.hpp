#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define IMCF_DEFINE_ERROR(Name)          \
  struct Name : Error {                  \
    using Error::Error;                  \
  }

IMCF_DEFINE_ERROR(InvalidParams);
IMCF_DEFINE_ERROR(DegenerateCurve);
IMCF_DEFINE_ERROR(AxisSingularity);
IMCF_DEFINE_ERROR(NotEmbedded);
IMCF_DEFINE_ERROR(DegenerateInterval);
IMCF_DEFINE_ERROR(NotMeanConvex);
IMCF_DEFINE_ERROR(GluingOverlap);
IMCF_DEFINE_ERROR(CannotSatisfy);
IMCF_DEFINE_ERROR(StabilityViolation);
IMCF_DEFINE_ERROR(LostStarShape);
IMCF_DEFINE_ERROR(NotFoliated);
IMCF_DEFINE_ERROR(PreconditionViolated);
IMCF_DEFINE_ERROR(CenterOutside);
IMCF_DEFINE_ERROR(NotAGraph);
IMCF_DEFINE_ERROR(InvalidGeometry);
IMCF_DEFINE_ERROR(NoConvergence);
IMCF_DEFINE_ERROR(HullTouched);
IMCF_DEFINE_ERROR(MissingRun);
IMCF_DEFINE_ERROR(MalformedFrame);
IMCF_DEFINE_ERROR(IoError);

#undef IMCF_DEFINE_ERROR

}  // namespace imcf
