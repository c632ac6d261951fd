#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigmadamp/modulus.hpp"
#include "sigmadamp/params.hpp"
#include "sigmadamp/spectral.hpp"

namespace sigmadamp {

struct SolverConfig {
  double dt = 0.05;
  double t_end = 10.0;
  double dealias_fraction = 2.0 / 3.0;
  /// L^inf cap on the nonlinearity argument; 0 selects 1e6 x max(||u0||_inf, ||u1||_inf).
  double blowup_threshold = 0.0;
  int snapshot_stride = 1;
  bool store_fields = false;
  bool nonlinear = true;  // false drops the right-hand side (linear problem)

  /// Throws ParameterError on dt <= 0, dt >= t_end, dealias outside (0, 1] or stride < 1.
  void validate() const;
};

struct NormRow {
  double t = 0.0;
  double L2_u = 0.0;
  double Hr_u = 0.0;    // || |D|^r u ||
  double L2_ut = 0.0;
  double Hrs_ut = 0.0;  // || |D|^{[r - sigma]^+} u_t ||
  double Linf_u = 0.0;
  double energy = 0.0;  // ||u_t||^2 + || |D|^sigma u ||^2
};

enum class BlowupReason { Escape, NotFinite };
std::string to_string(BlowupReason r);

struct BlowupEvent {
  double time = 0.0;
  BlowupReason reason = BlowupReason::Escape;
  double amplitude = 0.0;  // L^inf of the nonlinearity argument when detected
};

struct Trajectory {
  GridSpec grid;
  std::vector<double> times;
  std::vector<NormRow> rows;
  std::optional<BlowupEvent> blowup;
  std::vector<FieldState> snapshots;  // filled when store_fields is set, aligned with times
  std::vector<std::string> warnings;
  double threshold = 0.0;
  double dt = 0.0;  // step actually used (t_end is split into equal steps)
};

/// |v|^p mu(|v|) pointwise, truncated to the dealias band. |v| < 1e-300 maps to 0.
Field nonlinearity(const Field& v, double p, const ModulusSpec& mu, const SpectralGrid& sgrid, double dealias_fraction);
Field nonlinearity(const Field& v, double p, const ModulusSpec& mu, const GridSpec& grid, double dealias_fraction);

/// Escape when the L^inf norm of u (OnU) or u_t (OnUt) exceeds threshold,
/// NotFinite when any sample is NaN or infinite.
std::optional<BlowupReason> blow_up_detect(const FieldState& state, Target target, double threshold);

NormRow measure(const FieldState& state, const EquationParams& params, const SpectralGrid& sgrid);

// One-step exponential trapezoid integrator holding the per-mode weights for a
// fixed dt. Not thread-safe; create one per simulation.
class DuhamelStepper {
 public:
  DuhamelStepper(const SpectralGrid& sgrid, const EquationParams& params, const ModulusSpec& mu,
                 const SolverConfig& config);

  void reset(const FieldState& state);
  /// Advances by dt. Returns the new physical state.
  const FieldState& step();
  const FieldState& state() const { return state_; }
  double dt() const { return dt_; }

 private:
  Spectrum rhs(const Field& arg) const;
  const Field& argument(const FieldState& s) const { return params_.target == Target::OnU ? s.u : s.ut; }

  const SpectralGrid& sgrid_;
  EquationParams params_;
  ModulusSpec mu_;
  SolverConfig config_;
  double dt_;
  std::vector<Multipliers> prop_;
  std::vector<DuhamelWeights> weights_;
  Spectrum u_hat_, v_hat_, f_now_;
  FieldState state_;
};

/// Single step of length config.dt from `state`.
FieldState duhamel_step(const FieldState& state, const EquationParams& params, const ModulusSpec& mu,
                        const SolverConfig& config, const GridSpec& grid);

/// Integrates to t_end or blow-up, recording norms every snapshot_stride steps.
Trajectory simulate(const Field& u0, const Field& u1, const EquationParams& params, const ModulusSpec& mu,
                    const SolverConfig& config, const GridSpec& grid);

}  // namespace sigmadamp
