#pragma once

#include "nbaa/amplify.hpp"
#include "nbaa/bits.hpp"
#include "nbaa/errors.hpp"
#include "nbaa/fourier.hpp"
#include "nbaa/oracle.hpp"
#include "nbaa/pseudo_boolean.hpp"
#include "nbaa/statevector.hpp"

namespace nbaa {

inline constexpr const char* version = "0.1.0";

}  // namespace nbaa
