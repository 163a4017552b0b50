#include "morp/solve.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

#include "morp/errors.hpp"

namespace morp::solve {

namespace {

std::atomic<std::uint64_t> g_solver_calls{0};

void count_solve() { g_solver_calls.fetch_add(1, std::memory_order_relaxed); }

void require_square(const Eigen::MatrixXd& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(what) + " must be square");
    }
}

Eigen::Map<const Eigen::VectorXd> vec(const Eigen::MatrixXd& m) {
    return {m.data(), m.size()};
}

// Swaps the diagonal entries k and k+1 of the upper-triangular T by a
// unitary similarity, updating the accumulated U. The first column of the
// rotation is the (normalized) eigenvector [T(k,k+1); T(k+1,k+1)-T(k,k)]
// of the 2x2 block for its lower eigenvalue.
void swap_schur_diagonal(Eigen::MatrixXcd& t, Eigen::MatrixXcd& u, Eigen::Index k) {
    const std::complex<double> b = t(k, k + 1);
    const std::complex<double> d = t(k + 1, k + 1) - t(k, k);
    const double r = std::sqrt(std::norm(b) + std::norm(d));
    if (r == 0.0) {
        return; // equal eigenvalues, nothing to move
    }
    Eigen::Matrix2cd rot;
    rot << b / r, -std::conj(d) / r, d / r, std::conj(b) / r;
    t.middleCols(k, 2) = (t.middleCols(k, 2) * rot).eval();
    t.middleRows(k, 2) = (rot.adjoint() * t.middleRows(k, 2)).eval();
    u.middleCols(k, 2) = (u.middleCols(k, 2) * rot).eval();
    t(k + 1, k) = 0.0;
}

// Reorders a complex Schur form so that all eigenvalues with negative real
// part occupy the leading diagonal positions.
void move_stable_eigenvalues_first(Eigen::MatrixXcd& t, Eigen::MatrixXcd& u) {
    const Eigen::Index n = t.rows();
    Eigen::Index placed = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (t(j, j).real() < 0.0) {
            for (Eigen::Index i = j; i > placed; --i) {
                swap_schur_diagonal(t, u, i - 1);
            }
            ++placed;
        }
    }
}

} // namespace

std::uint64_t solver_call_count() { return g_solver_calls.load(std::memory_order_relaxed); }

void reset_solver_calls() { g_solver_calls.store(0, std::memory_order_relaxed); }

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a) {
    require_square(a, "matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw EigenFailure("eigenvalue iteration did not converge");
    }
    return solver.eigenvalues();
}

bool is_hurwitz(const Eigen::MatrixXd& a) {
    require_square(a, "matrix");
    if (a.rows() == 0) {
        return true;
    }
    return eigenvalues(a).real().maxCoeff() < -kHurwitzMargin;
}

int rank_of(const Eigen::MatrixXd& m) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double cutoff = kRankTol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) {
            ++rank;
        }
    }
    return rank;
}

int rank_of(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    const double cutoff = kRankTol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) {
            ++rank;
        }
    }
    return rank;
}

bool is_stabilizable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    require_square(a, "a");
    if (b.rows() != a.rows()) {
        throw std::invalid_argument("b must have as many rows as a");
    }
    const Eigen::Index n = a.rows();
    if (n == 0) {
        return true;
    }
    const Eigen::VectorXcd lambdas = eigenvalues(a);
    Eigen::MatrixXcd pencil(n, n + b.cols());
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
        if (lambdas(k).real() < 0.0) {
            continue;
        }
        pencil.leftCols(n) = a.cast<std::complex<double>>();
        pencil.leftCols(n).diagonal().array() -= lambdas(k);
        pencil.rightCols(b.cols()) = b.cast<std::complex<double>>();
        if (rank_of(pencil) < n) {
            return false;
        }
    }
    return true;
}

RegulatorSolution solve_regulator(const plant::FollowerModel& m, const plant::Exosystem& exo,
                                  double s) {
    const Eigen::Index n = m.state_dim();
    const Eigen::Index nu = m.input_dim();
    const Eigen::Index p = m.output_dim();
    const Eigen::Index n0 = exo.dim();

    const Eigen::MatrixXd in = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd in0 = Eigen::MatrixXd::Identity(n0, n0);
    const Eigen::MatrixXd offset = plant::output_offset(m, s);

    // vec(X A0) - vec(A X) - vec(B U) = vec(E)
    // vec(C X) + vec(D U)             = -vec(G + s F)
    Eigen::MatrixXd sys(n * n0 + p * n0, n * n0 + nu * n0);
    sys.topLeftCorner(n * n0, n * n0) =
        Eigen::kroneckerProduct(exo.a0.transpose(), in) - Eigen::kroneckerProduct(in0, m.a);
    sys.topRightCorner(n * n0, nu * n0) = -Eigen::kroneckerProduct(in0, m.b);
    sys.bottomLeftCorner(p * n0, n * n0) = Eigen::kroneckerProduct(in0, m.c);
    sys.bottomRightCorner(p * n0, nu * n0) = Eigen::kroneckerProduct(in0, m.d);

    Eigen::VectorXd rhs(n * n0 + p * n0);
    rhs.head(n * n0) = vec(m.e);
    rhs.tail(p * n0) = -vec(offset);

    count_solve();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys);
    const Eigen::VectorXd z = cod.solve(rhs);

    RegulatorSolution sol;
    sol.x = Eigen::Map<const Eigen::MatrixXd>(z.data(), n, n0);
    sol.u = Eigen::Map<const Eigen::MatrixXd>(z.data() + n * n0, nu, n0);
    const double defect_state = (sol.x * exo.a0 - m.a * sol.x - m.b * sol.u - m.e).norm();
    const double defect_output = (m.c * sol.x + m.d * sol.u + offset).norm();
    sol.residual = std::max(defect_state, defect_output);
    sol.feasible = sol.residual <= kFeasibilityTol * (1.0 + rhs.norm());
    return sol;
}

LmeSolution solve_lme(const plant::FollowerModel& m) {
    const Eigen::Index n = m.state_dim();
    const Eigen::Index p = m.output_dim();

    Eigen::MatrixXd lhs(n + p, m.input_dim());
    lhs << m.b, m.d;
    Eigen::MatrixXd rhs(n + p, m.e.cols());
    rhs << m.e, m.g;

    count_solve();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lhs);

    LmeSolution sol;
    sol.y = cod.solve(rhs);
    sol.residual = (lhs * sol.y - rhs).norm();
    sol.feasible = sol.residual <= kFeasibilityTol * (1.0 + rhs.norm());
    return sol;
}

bool lme_rank_feasible(const plant::FollowerModel& m) {
    const Eigen::Index n = m.state_dim();
    const Eigen::Index p = m.output_dim();
    const Eigen::Index nu = m.input_dim();
    const Eigen::Index n0 = m.e.cols();

    Eigen::MatrixXd channel(n + p, nu);
    channel << m.b, m.d;
    Eigen::MatrixXd augmented(n + p, nu + n0);
    augmented << m.b, m.e, m.d, m.g;
    return rank_of(augmented) == rank_of(channel);
}

bool transmission_zeros_ok(const plant::FollowerModel& m, const plant::Exosystem& exo) {
    const Eigen::Index n = m.state_dim();
    const Eigen::Index nu = m.input_dim();
    const Eigen::Index p = m.output_dim();

    const Eigen::VectorXcd lambdas = eigenvalues(exo.a0);
    Eigen::MatrixXcd rosenbrock(n + p, n + nu);
    rosenbrock.bottomLeftCorner(p, n) = m.c.cast<std::complex<double>>();
    rosenbrock.topRightCorner(n, nu) = m.b.cast<std::complex<double>>();
    rosenbrock.bottomRightCorner(p, nu) = m.d.cast<std::complex<double>>();
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
        rosenbrock.topLeftCorner(n, n) = m.a.cast<std::complex<double>>();
        rosenbrock.topLeftCorner(n, n).diagonal().array() -= lambdas(k);
        if (rank_of(rosenbrock) < n + p) {
            return false;
        }
    }
    return true;
}

double mu_lower_bound(const plant::Exosystem& exo, const graph::SpectralReport& spectral) {
    for (Eigen::Index i = 0; i < spectral.eigenvalues.size(); ++i) {
        if (spectral.eigenvalues(i).real() <= 0.0) {
            throw DomainError("observer gain bound needs every Re(lambda(H)) > 0");
        }
    }
    const Eigen::VectorXcd exo_eigs = eigenvalues(exo.a0);
    double bound = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < exo_eigs.size(); ++j) {
        for (Eigen::Index i = 0; i < spectral.eigenvalues.size(); ++i) {
            bound = std::max(bound, exo_eigs(j).real() / spectral.eigenvalues(i).real());
        }
    }
    return bound;
}

Eigen::MatrixXd observer_matrix(const plant::Exosystem& exo, const graph::SignedDigraph& g,
                                double mu) {
    const graph::SpectralReport report = h_matrix(g);
    const Eigen::Index n = g.size();
    const Eigen::Index n0 = exo.dim();
    const Eigen::MatrixXd eye_n = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd eye_n0 = Eigen::MatrixXd::Identity(n0, n0);
    return Eigen::kroneckerProduct(eye_n, exo.a0) -
           mu * Eigen::kroneckerProduct(report.h_matrix, eye_n0);
}

Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const Eigen::MatrixXd& q, const Eigen::MatrixXd& r) {
    require_square(a, "a");
    require_square(q, "q");
    require_square(r, "r");
    const Eigen::Index n = a.rows();

    Eigen::LLT<Eigen::MatrixXd> r_chol(r);
    if (r_chol.info() != Eigen::Success) {
        throw CareFailure("input weight must be positive definite");
    }

    // Hamiltonian [A, -B R^-1 B^T; -Q, -A^T]; its stable invariant subspace
    // [U1; U2] yields P = U2 U1^-1 (Laub's Schur method).
    Eigen::MatrixXd ham(2 * n, 2 * n);
    ham.topLeftCorner(n, n) = a;
    ham.topRightCorner(n, n) = -b * r_chol.solve(b.transpose());
    ham.bottomLeftCorner(n, n) = -q;
    ham.bottomRightCorner(n, n) = -a.transpose();

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(ham.cast<std::complex<double>>(),
                                                /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw CareFailure("Schur decomposition of the Hamiltonian did not converge");
    }
    Eigen::MatrixXcd t = schur.matrixT();
    Eigen::MatrixXcd u = schur.matrixU();
    move_stable_eigenvalues_first(t, u);

    Eigen::Index stable = 0;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        if (t(i, i).real() < 0.0) {
            ++stable;
        }
    }
    if (stable != n) {
        throw CareFailure("Hamiltonian does not have an n-dimensional stable subspace");
    }

    const Eigen::MatrixXcd u1 = u.topLeftCorner(n, n);
    const Eigen::MatrixXcd u2 = u.bottomLeftCorner(n, n);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(u1.transpose());
    if (!lu.isInvertible()) {
        throw CareFailure("stable subspace basis is singular");
    }
    // P = U2 U1^-1 via U1^T P^T = U2^T; symmetrize the real part.
    const Eigen::MatrixXd p = lu.solve(u2.transpose()).transpose().real();
    return 0.5 * (p + p.transpose());
}

Eigen::MatrixXd stabilizing_gain(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 double q_scale, double r_scale) {
    if (q_scale <= 0.0 || r_scale <= 0.0) {
        throw DomainError("gain design weights must be positive");
    }
    if (!is_stabilizable(a, b)) {
        throw NotStabilizable("pair (A, B) is not stabilizable");
    }
    const Eigen::Index n = a.rows();
    const Eigen::Index mu = b.cols();
    const Eigen::MatrixXd q = q_scale * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r = r_scale * Eigen::MatrixXd::Identity(mu, mu);

    const Eigen::MatrixXd p = solve_care(a, b, q, r);
    const Eigen::MatrixXd k1 = -(b.transpose() * p) / r_scale;
    if (!is_hurwitz(a + b * k1)) {
        throw CareFailure("closed loop not Hurwitz after Riccati solve");
    }
    return k1;
}

} // namespace morp::solve
