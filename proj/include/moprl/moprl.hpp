#ifndef MOPRL_MOPRL_HPP
#define MOPRL_MOPRL_HPP

// Mixed-type multiple orthogonal polynomials from the Gauss-Borel
// factorization of a moment matrix: index combinatorics, moment
// construction, LU factors, linear forms, the banded recursion operator,
// and both Christoffel-Darboux identities, over exact rational or
// configurable-precision float scalars.

#include "moprl/christoffel_darboux.hpp"
#include "moprl/composition.hpp"
#include "moprl/errors.hpp"
#include "moprl/factorization.hpp"
#include "moprl/jacobi.hpp"
#include "moprl/matrix.hpp"
#include "moprl/measures.hpp"
#include "moprl/polynomials.hpp"
#include "moprl/quadrature.hpp"
#include "moprl/scalar.hpp"

#endif
