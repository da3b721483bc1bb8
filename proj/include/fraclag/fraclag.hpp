#pragma once

// Caputo fractional-order Lagrange system: dynamics, equilibrium stability
// via the |arg(lambda)| > q*pi/2 test, fractional Euler integration, and the
// report/serialization layer used by the command-line tool.

#include "fraclag/core.hpp"
#include "fraclag/dynamics.hpp"
#include "fraclag/integrator.hpp"
#include "fraclag/report.hpp"
#include "fraclag/stability.hpp"
