#pragma once

// Umbrella header: cyclic representations of the quantum torus at odd roots
// of unity, the cyclic quantum dilogarithm, decomposition operators, 6j
// symbols, and the projective functor on labeled dotted triangulations.

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "groupoid.hpp"
#include "json_io.hpp"
#include "operators.hpp"
#include "qdilog.hpp"
#include "report.hpp"
#include "reps.hpp"
#include "tensorlinalg.hpp"
#include "weights.hpp"
