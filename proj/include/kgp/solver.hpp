// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_SOLVER_HPP
#define KGP_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>
#include "kgp/error.hpp"
#include "kgp/functional.hpp"

namespace kgp
{

enum class LineSearch
{
  None,
  Backtracking
};

enum class JacobianKind
{
  Exact,
  FiniteDifference
};

struct InitialGuess
{
  enum class Kind
  {
    Zero,
    SingleMode,  // u = v = amplitude * mode(j, k)
    FromFile     // state previously loaded from a coefficient file
  };
  Kind kind = Kind::Zero;
  ModeIndex mode{1, 0};
  double amplitude = 0.0;
  std::optional<SpectralField> u;
  std::optional<SpectralField> v;

  static InitialGuess zero() { return {}; }
  static InitialGuess single_mode(int j, int k, double amplitude);
  static InitialGuess from_state(const FieldPair &state);
};

struct SolveConfig
{
  double b = 1.0;
  double eps = 0.0;
  Truncation trunc{8, 8};
  double tol_residual = 1e-9;  // on the dual_H residual norm
  int max_newton = 50;
  LineSearch linesearch = LineSearch::Backtracking;
  InitialGuess initial_guess;
  JacobianKind jacobian = JacobianKind::Exact;
  double krylov_tol = 1e-10;
  int krylov_maxit = 500;

  // |eps| >= min(eta, b) / 2.
  bool coupling_warning() const;
  void validate() const;
};

struct SolveReport
{
  FieldPair state;
  bool converged = false;
  int iterations = 0;
  int krylov_iterations = 0;
  std::vector<double> residual_history;  // dual_H, one entry per iterate
  ResidualNorms final_residual;
  EnergyBreakdown energy;
  Decomposition decomposition;
  bool nontrivial = false;  // min(||u||_L2, ||v||_L2) > 1e-6
  bool coupling_warning = false;
  bool decoupled = false;
  std::string failure;
};

// Thrown by the iterative solvers; carries the state reached so far.
class SolveFailure : public Error
{
public:
  SolveFailure(ErrorKind kind, const std::string &message, SolveReport report);
  const SolveReport &report() const { return report_; }

private:
  SolveReport report_;
};

constexpr double kNontrivialThreshold = 1e-6;

// Newton iteration on the residual with matrix-free GMRES preconditioned by (L+b)^{-1}.
// eps = 0 splits into two independent scalar solves.
SolveReport newton_solve(const SolveConfig &cfg, const Nonlinearity &f, const Nonlinearity &g,
                         const Forcing &forcing = {});

// Picard map (u, v) <- -(L+b)^{-1}(eps v + f(u) + h1, eps u + g(v) + h2), up to
// cfg.max_newton sweeps.
SolveReport fixed_point_solve(const SolveConfig &cfg, const Nonlinearity &f,
                              const Nonlinearity &g, const Forcing &forcing = {});

using RefinementSchedule = std::vector<Truncation>;

struct RefinementStage
{
  SolveReport report;
  std::optional<double> increment;  // L2 distance to the previous stage's padded state
};

// Solve on each truncation in turn, warm-starting from the previous stage zero-padded.
std::vector<RefinementStage> refine(const RefinementSchedule &schedule, const SolveConfig &cfg,
                                    const Nonlinearity &f, const Nonlinearity &g,
                                    const Forcing &forcing = {});

struct SweepRow
{
  double eps = 0.0;
  double err_u_l2 = 0.0;  // ||u_eps - U0||_L2, NaN when the eps = 0 stage was not reached
  double err_v_l2 = 0.0;
  double phi = 0.0;
  double res_dual = 0.0;
  bool coupling_warning = false;
};

struct SweepReport
{
  std::vector<SweepRow> rows;
  std::vector<SolveReport> reports;
  bool completed = false;
  std::string failure;
  // Independent residual norms of the decoupled equations at the eps = 0 endpoint.
  std::optional<double> decoupled_residual_u;
  std::optional<double> decoupled_residual_v;
};

// eps_list must be non-increasing in |eps|; an eps = 0 endpoint is appended if absent.
SweepReport continuation_in_epsilon(const std::vector<double> &eps_list, const SolveConfig &cfg,
                                    const Nonlinearity &f, const Nonlinearity &g,
                                    const Forcing &forcing = {});

struct SearchOptions
{
  std::vector<ModeIndex> modes{{1, 1}, {2, 1}, {1, 0}, {1, 2}};
  std::vector<double> amplitudes{0.5, 1.0, 2.0};
  double dedup_distance = 1e-4;
};

struct NontrivialSearchResult
{
  std::vector<SolveReport> solutions;
  int launches = 0;
  int diverged = 0;
  int collapsed = 0;              // converged to the trivial state
  int rejected_semi_trivial = 0;  // u != 0 with v = 0 (or vice versa) at eps != 0
  bool none_found = true;
};

// Multi-start Newton on the unforced problem. At most max_solutions distinct nontrivial
// states are returned; duplicates within dedup_distance keep the lower |Phi|.
NontrivialSearchResult nontrivial_search(const SolveConfig &cfg, const Nonlinearity &f,
                                         const Nonlinearity &g, int max_solutions,
                                         const SearchOptions &options = {});

// True if exactly one of u, v is (numerically) zero.
bool is_semi_trivial(const FieldPair &state);

}  // namespace kgp

#endif  // KGP_SOLVER_HPP
