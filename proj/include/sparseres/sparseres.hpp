#pragma once

// Everything in one include.

#include "sparseres/arith.hpp"
#include "sparseres/cli.hpp"
#include "sparseres/eigensolver.hpp"
#include "sparseres/error.hpp"
#include "sparseres/matrix_io.hpp"
#include "sparseres/modular.hpp"
#include "sparseres/numeric.hpp"
#include "sparseres/polynomial.hpp"
#include "sparseres/polytope.hpp"
#include "sparseres/resultant_matrix.hpp"
#include "sparseres/subdivision.hpp"
#include "sparseres/system_file.hpp"
