#pragma once

// Umbrella header.

#include "cdbt/rational.hpp"
#include "cdbt/poly.hpp"
#include "cdbt/ratfn.hpp"
#include "cdbt/sturm.hpp"
#include "cdbt/gauge.hpp"
#include "cdbt/json_io.hpp"
#include "cdbt/classical.hpp"
#include "cdbt/quadrature.hpp"
#include "cdbt/spectrum.hpp"
#include "cdbt/report.hpp"
#include "cdbt/verify.hpp"
#include "cdbt/tdpt.hpp"
#include "cdbt/isotonic.hpp"
#include "cdbt/chains.hpp"
