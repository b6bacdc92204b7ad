#pragma once

#include "dtpt/error.hpp"
#include "dtpt/numeric.hpp"
#include "dtpt/regression.hpp"
#include "dtpt/spectrum.hpp"
#include "dtpt/thermal.hpp"
#include "dtpt/loschmidt.hpp"
#include "dtpt/geometry.hpp"
#include "dtpt/fisher.hpp"
#include "dtpt/scaling.hpp"
