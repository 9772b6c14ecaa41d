#pragma once

#include "qsw/chains.hpp"
#include "qsw/core.hpp"
#include "qsw/gsw.hpp"
#include "qsw/logreal.hpp"
#include "qsw/modified.hpp"
#include "qsw/polynomial.hpp"
#include "qsw/qseries.hpp"
#include "qsw/quadrature.hpp"
#include "qsw/recurrence.hpp"
#include "qsw/selfcheck.hpp"
#include "qsw/spectrum.hpp"
