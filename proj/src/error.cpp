#include "cbody/error.hpp"

namespace cbody {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroMinors: return "ZeroMinors";
    case ErrorCode::ProjectionUndefined: return "ProjectionUndefined";
    case ErrorCode::RetractionUndefined: return "RetractionUndefined";
    case ErrorCode::GeneratorUnavailable: return "GeneratorUnavailable";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::InteriorNodeSelected: return "InteriorNodeSelected";
    case ErrorCode::WrongManifold: return "WrongManifold";
    case ErrorCode::SurfaceOutsideDomain: return "SurfaceOutsideDomain";
    case ErrorCode::InadmissibleStart: return "InadmissibleStart";
    case ErrorCode::NonTangentTest: return "NonTangentTest";
    case ErrorCode::SingularCell: return "SingularCell";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ScenarioFailed: return "ScenarioFailed";
  }
  return "Unknown";
}

}  // namespace cbody
