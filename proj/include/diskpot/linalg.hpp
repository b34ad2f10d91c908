#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "diskpot/rational.hpp"

namespace diskpot {

// Dense exact linear algebra over the rationals, sized for the small systems
// this library meets (questions in dimension <= 5 or so).  Row-major.
using RatMatrix = std::vector<std::vector<Rat>>;

// Reduced row echelon form in place; returns the pivot column of each pivot
// row, so rank == pivots.size().  Columns beyond `cols` (e.g. an augmented
// right-hand side) are carried along but never chosen as pivots.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols);

std::size_t rank(RatMatrix m, std::size_t cols);

Rat determinant(RatMatrix m);

// Unique solution of a square system, or nullopt when singular.
std::optional<std::vector<Rat>> solve_square(RatMatrix a,
                                             std::vector<Rat> b);

// Basis of the right nullspace of an (m x n) matrix.
std::vector<std::vector<Rat>> nullspace(RatMatrix m, std::size_t cols);

// Complex counterpart with partial pivoting, for the numeric Newton path.
using CxMatrix = std::vector<std::vector<std::complex<double>>>;
std::optional<std::vector<std::complex<double>>> solve_square(
    CxMatrix a, std::vector<std::complex<double>> b);
std::complex<double> determinant(CxMatrix m);

}  // namespace diskpot
