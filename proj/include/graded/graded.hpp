#pragma once

#include "graded/coefficient_table.hpp"
#include "graded/errors.hpp"
#include "graded/graded_index.hpp"
#include "graded/gram_source.hpp"
#include "graded/matrix_kernel.hpp"
#include "graded/orthogonalizer.hpp"
#include "graded/pseudo_orthogonalizer.hpp"
#include "graded/quadrature.hpp"
