#ifndef WAVELAB_REDUCTION_HPP
#define WAVELAB_REDUCTION_HPP

#include "wavelab/waterwave.hpp"

namespace wavelab {

/// Symmetrizer pair gamma = sqrt(a lambda) (order 1/2) and q = sqrt(a/lambda)
/// (order -1/2). Requires a >= c > 0.
struct SymmetrizerPair {
    SymbolFn gamma;
    SymbolFn q;
};

SymmetrizerPair build_symmetrizer(const Field& a, const Field& eta, double rho0 = 0.4);
/// 1/q = sqrt(lambda/a), order 1/2.
SymbolFn inverse_q_symbol(const Field& a, const Field& eta, double rho0 = 0.4);
/// e = -lambda + i zeta.xi (zeta = grad eta), order 1; elliptic since
/// Re e <= -1/2 on the evaluation domain.
SymbolFn elliptic_e_symbol(const Field& eta, double rho0 = 0.4);
/// 1/e, order -1.
SymbolFn inverse_e_symbol(const Field& eta, double rho0 = 0.4);

/// The reduced unknowns of the symmetrized system:
///   zeta_s = K_eps^2 <D>^s grad eta,
///   W_s    = <D>^s K_eps^2 V + T_zeta <D>^s K_eps^2 B,
///   theta_s = T_q zeta_s.
struct ReducedState {
    double eps = 0.0;
    double s = 0.0;
    VecField W_s, theta_s, zeta_s;
};

ReducedState build_reduced(const Field& eta, const Field& B, const VecField& V, const Field& a, double eps, double s,
                           double rho0 = 0.4);

double l2_norm_vec(const VecField& v);
/// ||(W_s, theta_s)||_{L2 x L2}.
double reduced_norm(const ReducedState& r);

/// Evolution defect gamma = (d_t + V.grad) zeta - G(eta)V - zeta G(eta)B
/// evaluated at the center snapshot; d_t zeta by the centered difference of
/// the neighbor snapshots. Snapshots must carry traces.
VecField gamma_defect(const Snapshot& prev, const Snapshot& mid, const Snapshot& next, double delta,
                      DnoWorkspace& ws);

struct ResidualSample {
    double t = 0.0;
    double f1_norm = 0.0;        // ||F1||_{L2}
    double f2_norm = 0.0;        // ||F2||_{L2}
    double reduced = 0.0;        // ||(W_s, theta_s)||
    double keps_zs = 0.0;        // ||K_eps U||_{Z^s} (single mollifier)
    bool stride_warning = false;
};

/// Residuals F1 = d_t W_s + T_V.grad W_s + T_gamma theta_s and
/// F2 = d_t theta_s + T_V.grad theta_s - T_gamma W_s at the center time of
/// each consecutive snapshot triple.
std::vector<ResidualSample> symmetrized_residuals(const Trajectory& traj, double eps, double s, double rho0,
                                                  int integrator_stride = 1);

struct EnergyRateReport {
    double fitted_C = 0.0;
    double alpha = 0.0;                  // o(1) + sup ||K_eps U||
    std::vector<double> times;
    std::vector<double> norm;            // y(t)
    std::vector<double> envelope;        // Gronwall envelope from fitted C
    bool envelope_ok = true;
};

/// Fits d/dt y^2 <= C (alpha + y) y over the residual series and integrates
/// the Gronwall envelope. o1 is the fitted epsilon^kappa charge.
EnergyRateReport l2_energy_rate(const std::vector<ResidualSample>& series, double o1);

struct RecoveryReport {
    double lhs_zs = 0.0;           // ||K_eps^2 U||_{Z^s}
    double rhs_reduced = 0.0;      // ||(W_s, theta_s)||
    double control_ratio = 0.0;    // rhs / lhs: reduced unknowns controlled by the state
    double recovery_ratio = 0.0;   // lhs / (o1 + rhs): state recovered from the reduced unknowns
    double eta_defect = 0.0;       // ||zeta_s - T_{1/q} theta_s||_{H^{-1/2}} / ||zeta_s||_{H^{-1/2}}
    double b_defect = 0.0;         // ||Bs - T_{1/e} div Ws|| / ||Bs||
    double psi_norm = 0.0;         // ||K^2 grad psi||_{H^{s-1/2}}
};

/// The three recovery paths of the reduced unknowns plus both inequality
/// directions, for one state.
RecoveryReport recover_unknowns(const Field& eta, const Field& psi, const Field& B, const VecField& V, const Field& a,
                                double eps, double s, double o1, double rho0 = 0.4);

}  // namespace wavelab

#endif
