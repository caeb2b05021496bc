#include "subeqlab/linsolve.hpp"

#include <algorithm>

namespace subeqlab {

namespace {

// Clear denominators and divide by the content-ish smallest height entry so
// intermediate heights stay tame.
void normalize_row(std::vector<Cyclo>& row) {
    Int lcm_den = 1;
    for (const auto& v : row) {
        lcm_den = lcm(lcm_den, denominator(v.p));
        lcm_den = lcm(lcm_den, denominator(v.q));
    }
    Int gcd_num = 0;
    for (auto& v : row) {
        v.p *= lcm_den;
        v.q *= lcm_den;
        gcd_num = gcd(gcd_num, numerator(v.p));
        gcd_num = gcd(gcd_num, numerator(v.q));
    }
    if (gcd_num > 1)
        for (auto& v : row) {
            v.p /= gcd_num;
            v.q /= gcd_num;
        }
}

}  // namespace

bool EchelonSolver::add_row(std::vector<Cyclo> row) {
    // Reduce against the basis: fraction-free combination
    // row <- row * pivot - basis * row[pivot_col].
    for (std::size_t b = 0; b < rows_.size(); ++b) {
        const Cyclo lead = row[pivots_[b]];  // copy: row[j] below overwrites it
        if (lead.is_zero()) continue;
        const Cyclo piv = rows_[b][pivots_[b]];
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = row[j] * piv - rows_[b][j] * lead;
        normalize_row(row);
    }
    std::size_t col = 0;
    while (col < n_ && row[col].is_zero()) ++col;
    if (col == n_) {
        if (!row[n_].is_zero()) {
            inconsistent_ = true;
            return false;
        }
        return true;  // dependent row
    }
    normalize_row(row);
    // Back-reduce existing rows so the basis stays fully reduced.
    for (std::size_t b = 0; b < rows_.size(); ++b) {
        const Cyclo lead = rows_[b][col];  // copy: rows_[b][j] below overwrites it
        if (lead.is_zero()) continue;
        const Cyclo piv = row[col];
        for (std::size_t j = 0; j < rows_[b].size(); ++j)
            rows_[b][j] = rows_[b][j] * piv - row[j] * lead;
        normalize_row(rows_[b]);
    }
    std::size_t at = 0;
    while (at < rows_.size() && pivots_[at] < col) ++at;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(at), std::move(row));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(at), col);
    return true;
}

SolveStatus EchelonSolver::status() const {
    if (inconsistent_) return SolveStatus::inconsistent;
    return rows_.size() == n_ ? SolveStatus::unique : SolveStatus::underdetermined;
}

std::vector<Cyclo> EchelonSolver::solution() const {
    std::vector<Cyclo> x(n_);
    for (std::size_t b = 0; b < rows_.size(); ++b)
        x[pivots_[b]] = rows_[b][n_] / rows_[b][pivots_[b]];
    return x;
}

}  // namespace subeqlab
