#pragma once

#include "epsforge/bound.hpp"
#include "epsforge/critical.hpp"
#include "epsforge/errors.hpp"
#include "epsforge/eval.hpp"
#include "epsforge/expr.hpp"
#include "epsforge/gen.hpp"
#include "epsforge/hprocess.hpp"
#include "epsforge/index.hpp"
#include "epsforge/ordinal.hpp"
#include "epsforge/series.hpp"
#include "epsforge/sexpr.hpp"
#include "epsforge/trace_io.hpp"
#include "epsforge/verify.hpp"
