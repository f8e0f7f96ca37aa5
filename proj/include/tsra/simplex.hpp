#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tsra {

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline constexpr double kSimplexPivotTol = 1e-10;
inline constexpr double kSimplexFeasTol = 1e-7;
inline constexpr int kSimplexRefactorPeriod = 64;
inline constexpr long kSimplexMaxIterations = 1000000;

template <typename Scalar>
struct SimplexResult {
    LpStatus status = LpStatus::Optimal;
    Scalar objective = Scalar(0);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solution;
    long iterations = 0;
};

// Maximize c'x subject to A x <= b, x >= 0, by revised simplex on a dense
// standard form with an explicit basis inverse. Rows with negative rhs are
// negated and given surplus plus big-M artificial variables; rows with
// non-negative rhs start from their slack. Pricing is Dantzig (most positive
// reduced cost, ties to the lowest column) switching to Bland's rule after
// 10 * (rows + columns) iterations; the leaving row breaks ratio ties by the
// lowest basic variable index. The basis inverse is rebuilt from scratch
// every kSimplexRefactorPeriod pivots.
template <typename Scalar>
SimplexResult<Scalar> simplex_solve(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (n < 1) throw std::invalid_argument("simplex: at least one variable required");
    if (b.size() != m || c.size() != n)
        throw std::invalid_argument("simplex: dimension mismatch");

    const Scalar pivot_tol = Scalar(kSimplexPivotTol);
    const Scalar feas_tol = Scalar(kSimplexFeasTol);

    int num_artificial = 0;
    for (int i = 0; i < m; ++i)
        if (b[i] < Scalar(0)) ++num_artificial;

    const int total = n + m + num_artificial;
    Mat Astd = Mat::Zero(m, total);
    Vec bstd(m);
    Vec cstd = Vec::Zero(total);
    cstd.head(n) = c;

    Scalar cmax = Scalar(1);
    for (int j = 0; j < n; ++j) cmax = std::max(cmax, std::abs(c[j]));
    const Scalar big_m = Scalar(1e8) * cmax;

    std::vector<int> basis(m);
    int art = n + m;
    for (int i = 0; i < m; ++i) {
        if (b[i] < Scalar(0)) {
            Astd.row(i).head(n) = -A.row(i);
            bstd[i] = -b[i];
            Astd(i, n + i) = Scalar(-1);  // surplus
            Astd(i, art) = Scalar(1);
            cstd[art] = -big_m;
            basis[i] = art++;
        } else {
            Astd.row(i).head(n) = A.row(i);
            bstd[i] = b[i];
            Astd(i, n + i) = Scalar(1);  // slack
            basis[i] = n + i;
        }
    }

    Mat Binv = Mat::Identity(m, m);
    Vec xB = bstd;
    std::vector<bool> in_basis(total, false);
    for (int i = 0; i < m; ++i) in_basis[basis[i]] = true;

    const long bland_after = 10L * (m + total);
    SimplexResult<Scalar> result;

    auto refactor = [&]() {
        if (m == 0) return;
        Mat B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = Astd.col(basis[i]);
        Binv = B.partialPivLu().inverse();
        xB = (Binv * bstd).cwiseMax(Scalar(0));
    };

    auto finish = [&](LpStatus status) {
        result.status = status;
        result.solution = Vec::Zero(n);
        if (status == LpStatus::Optimal) {
            for (int i = 0; i < m; ++i)
                if (basis[i] < n) result.solution[basis[i]] = std::max(xB[i], Scalar(0));
            result.objective = c.dot(result.solution);
        }
        return result;
    };

    while (true) {
        if (result.iterations >= kSimplexMaxIterations)
            throw std::runtime_error("simplex: iteration limit exceeded");

        Vec y(m);
        if (m > 0) {
            Vec cB(m);
            for (int i = 0; i < m; ++i) cB[i] = cstd[basis[i]];
            y = Binv.transpose() * cB;
        }

        const bool bland = result.iterations >= bland_after;
        int entering = -1;
        Scalar best = feas_tol;
        for (int j = 0; j < total; ++j) {
            if (in_basis[j]) continue;
            const Scalar reduced = cstd[j] - (m > 0 ? y.dot(Astd.col(j)) : Scalar(0));
            if (reduced > best) {
                entering = j;
                if (bland) break;
                best = reduced;
            }
        }
        if (entering < 0) {
            for (int i = 0; i < m; ++i)
                if (basis[i] >= n + m && xB[i] > feas_tol) return finish(LpStatus::Infeasible);
            return finish(LpStatus::Optimal);
        }

        const Vec u = m > 0 ? Vec(Binv * Astd.col(entering)) : Vec();
        int leave = -1;
        Scalar best_ratio = Scalar(0);
        for (int i = 0; i < m; ++i) {
            if (u[i] <= pivot_tol) continue;
            const Scalar ratio = std::max(xB[i], Scalar(0)) / u[i];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) {
            for (int i = 0; i < m; ++i)
                if (basis[i] >= n + m && xB[i] > feas_tol) return finish(LpStatus::Infeasible);
            return finish(LpStatus::Unbounded);
        }

        const Scalar piv = u[leave];
        Binv.row(leave) /= piv;
        const Scalar step = std::max(xB[leave], Scalar(0)) / piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            Binv.row(i) -= u[i] * Binv.row(leave);
            xB[i] -= u[i] * step;
        }
        xB[leave] = step;

        in_basis[basis[leave]] = false;
        in_basis[entering] = true;
        basis[leave] = entering;
        ++result.iterations;
        if (result.iterations % kSimplexRefactorPeriod == 0) refactor();
    }
}

}  // namespace tsra
