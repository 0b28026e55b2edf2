#pragma once

#include "boundary.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "heat_oracle.hpp"
#include "monitor.hpp"
#include "operators.hpp"
#include "runner.hpp"
#include "stencil.hpp"
#include "stepper.hpp"
#include "sym_matrix.hpp"
