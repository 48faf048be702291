#pragma once

#include "errors.hpp"
#include "config.hpp"
#include "alpha_poly.hpp"
#include "radial_expr.hpp"
#include "radial_json.hpp"
#include "coefficients.hpp"
#include "constants.hpp"
#include "quadrature.hpp"
#include "functionals.hpp"
#include "iteration.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "acceptance.hpp"
