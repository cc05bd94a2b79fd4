#pragma once

#include "carnot/error.hpp"
#include "carnot/rational.hpp"
#include "carnot/weights.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/poly_text.hpp"
#include "carnot/exact_linalg.hpp"
#include "carnot/group.hpp"
#include "carnot/group_io.hpp"
#include "carnot/hcalc.hpp"
#include "carnot/counterexample.hpp"
#include "carnot/certificate_io.hpp"
#include "carnot/numeric_poly.hpp"
#include "carnot/sampling.hpp"
#include "carnot/gauge.hpp"
#include "carnot/acf.hpp"
#include "carnot/csv.hpp"
