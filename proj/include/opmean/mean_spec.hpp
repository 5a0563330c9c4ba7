#pragma once

#include <string>
#include <string_view>

#include "opmean/representing_function.hpp"

namespace opmean {

/// Parses a mean specification:
///   arithmetic:MU | geometric:MU | harmonic:MU
///   measure:PATH                 (measure JSON file)
///   barbour:(C t)^r:r=R          B((C t)^R)
///   barbour2:(C t)^r:r=R         B(B((C t)^R))
/// C defaults to 1 when written as "t^r". Errors carry the character position.
RepresentingFunction parse_mean_spec(std::string_view spec);

}  // namespace opmean
