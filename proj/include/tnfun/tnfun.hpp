#pragma once

#include "tnfun/catalog.hpp"
#include "tnfun/constructors.hpp"
#include "tnfun/errors.hpp"
#include "tnfun/expr.hpp"
#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/measure.hpp"
#include "tnfun/membership.hpp"
#include "tnfun/quadrature.hpp"
#include "tnfun/rng.hpp"
#include "tnfun/stochastic.hpp"
