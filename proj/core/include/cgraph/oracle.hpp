#pragma once

#include <cstddef>

#include "cgraph/types.hpp"

namespace cgraph {

inline constexpr std::size_t kOracleMaxTokens = 12;
inline constexpr std::size_t kOracleMaxSigma = 3;
inline constexpr std::size_t kOracleMaxRules = 4;

// Minimal model_dl + description_dl over every grammar of at most four binary
// Concat rules and every description, all weights 1. Throws TooLarge past the
// caps above.
double mdl_oracle(const TokenSeq& tokens, std::size_t sigma_size);

}  // namespace cgraph
