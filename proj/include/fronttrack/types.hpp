#ifndef FRONTTRACK_TYPES_HPP
#define FRONTTRACK_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fronttrack {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrCode {
  NonHyperbolic,
  NormalizationFailure,
  MixedField,
  NoCharacteristicFamily,
  CaseBUnsupported,
  LeftWorkingBox,
  ContinuationFailure,
  NewtonDivergence,
  NoRoot,
  GlueMismatch,
  ShootingFailure,
  BranchAmbiguous,
  DataTooLarge,
  EventCapExceeded,
  CalibrationFailure,
  NoEvent,
  BadScenario,
};

inline const char* to_string(ErrCode c) {
  switch (c) {
    case ErrCode::NonHyperbolic: return "NonHyperbolic";
    case ErrCode::NormalizationFailure: return "NormalizationFailure";
    case ErrCode::MixedField: return "MixedField";
    case ErrCode::NoCharacteristicFamily: return "NoCharacteristicFamily";
    case ErrCode::CaseBUnsupported: return "CaseBUnsupported";
    case ErrCode::LeftWorkingBox: return "LeftWorkingBox";
    case ErrCode::ContinuationFailure: return "ContinuationFailure";
    case ErrCode::NewtonDivergence: return "NewtonDivergence";
    case ErrCode::NoRoot: return "NoRoot";
    case ErrCode::GlueMismatch: return "GlueMismatch";
    case ErrCode::ShootingFailure: return "ShootingFailure";
    case ErrCode::BranchAmbiguous: return "BranchAmbiguous";
    case ErrCode::DataTooLarge: return "DataTooLarge";
    case ErrCode::EventCapExceeded: return "EventCapExceeded";
    case ErrCode::CalibrationFailure: return "CalibrationFailure";
    case ErrCode::NoEvent: return "NoEvent";
    case ErrCode::BadScenario: return "BadScenario";
  }
  return "Unknown";
}

class FtError : public std::runtime_error {
 public:
  FtError(ErrCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrCode code() const { return code_; }

 private:
  ErrCode code_;
};

}  // namespace fronttrack

#endif
