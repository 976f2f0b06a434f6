#pragma once

#include "errors.hpp"
#include "io.hpp"
#include "mobius.hpp"
#include "numeric.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "space.hpp"
#include "svg.hpp"
#include "symbol.hpp"
#include "truncation.hpp"
#include "verify.hpp"
#include "witness.hpp"
