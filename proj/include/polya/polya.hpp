#pragma once

#include "polya/analysis.hpp"
#include "polya/io.hpp"
#include "polya/kernels.hpp"
#include "polya/math.hpp"
#include "polya/params.hpp"
#include "polya/rng.hpp"
#include "polya/simplex.hpp"
#include "polya/simulate.hpp"
#include "polya/svg.hpp"
#include "polya/verify.hpp"
