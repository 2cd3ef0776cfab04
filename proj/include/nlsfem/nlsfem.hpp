#pragma once

// Two-level linearly implicit finite element solver for the 1-D nonlinear
// Schrodinger equation with homogeneous Dirichlet boundary conditions,
// plus the verification harness (manufactured solutions, EOC studies,
// consistency residuals).

#include "nlsfem/assembly.hpp"
#include "nlsfem/banded.hpp"
#include "nlsfem/basis.hpp"
#include "nlsfem/errors.hpp"
#include "nlsfem/fe_space.hpp"
#include "nlsfem/fields.hpp"
#include "nlsfem/manufactured.hpp"
#include "nlsfem/mesh.hpp"
#include "nlsfem/norms.hpp"
#include "nlsfem/problem.hpp"
#include "nlsfem/projections.hpp"
#include "nlsfem/quadrature.hpp"
#include "nlsfem/report_io.hpp"
#include "nlsfem/stepper.hpp"
#include "nlsfem/time_grid.hpp"
#include "nlsfem/types.hpp"
#include "nlsfem/verification.hpp"
