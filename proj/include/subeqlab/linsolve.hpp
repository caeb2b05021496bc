#ifndef SUBEQLAB_LINSOLVE_HPP
#define SUBEQLAB_LINSOLVE_HPP

#include <vector>

#include "subeqlab/cyclo.hpp"

namespace subeqlab {

enum class SolveStatus { unique, inconsistent, underdetermined };

/// Incremental exact row-echelon accumulator over Q(w).  Rows are augmented
/// (n coefficients + rhs) and reduced fraction-free against the current
/// basis as they arrive, so inconsistency is detected at the earliest row.
class EchelonSolver {
  public:
    explicit EchelonSolver(std::size_t n_unknowns) : n_(n_unknowns) {}

    /// Returns false iff the row is inconsistent with the basis (0 = nonzero).
    bool add_row(std::vector<Cyclo> row);

    std::size_t rank() const { return rows_.size(); }
    SolveStatus status() const;
    /// Valid only when status() == unique.
    std::vector<Cyclo> solution() const;

  private:
    std::size_t n_;
    std::vector<std::vector<Cyclo>> rows_;  // echelon basis, sorted by pivot column
    std::vector<std::size_t> pivots_;
    bool inconsistent_ = false;
};

}  // namespace subeqlab

#endif
