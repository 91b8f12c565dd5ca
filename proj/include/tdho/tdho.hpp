#pragma once

#include "tdho/coefficient.hpp"
#include "tdho/comparison.hpp"
#include "tdho/csv.hpp"
#include "tdho/decoupler.hpp"
#include "tdho/ermakov.hpp"
#include "tdho/errors.hpp"
#include "tdho/gaussian.hpp"
#include "tdho/ode.hpp"
#include "tdho/oracle.hpp"
#include "tdho/propagator.hpp"
#include "tdho/quadrature.hpp"
#include "tdho/residual.hpp"
#include "tdho/scenario.hpp"
#include "tdho/system.hpp"
