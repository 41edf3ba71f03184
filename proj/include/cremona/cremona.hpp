#pragma once

#include "cremona/birational.hpp"
#include "cremona/chunk.hpp"
#include "cremona/error.hpp"
#include "cremona/field.hpp"
#include "cremona/format.hpp"
#include "cremona/parse.hpp"
#include "cremona/permutation.hpp"
#include "cremona/polynomial.hpp"
#include "cremona/rational_function.hpp"
#include "cremona/sofic.hpp"
#include "cremona/specialize.hpp"
#include "cremona/word.hpp"
