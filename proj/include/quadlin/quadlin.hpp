#ifndef QUADLIN_QUADLIN_HPP
#define QUADLIN_QUADLIN_HPP

#include "errors.hpp"
#include "theta.hpp"
#include "coeffs.hpp"
#include "quadgraph.hpp"
#include "quadeq.hpp"
#include "laplace.hpp"
#include "pluri.hpp"
#include "io.hpp"

#endif
