#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbms/spectral.hpp"

namespace fbms {

enum class TraceSource { scalar_robin, bundle_robin };

std::string_view to_string(TraceSource source);

/// Partial heat trace k(t) = sum_l exp(-lambda_l t) over the computed eigenvalues.
struct HeatTrace {
  std::vector<double> t_grid;
  std::vector<double> values;
  /// Upper bound on the omitted terms: (reduced_dim - k) exp(-lambda_k t).
  std::vector<double> remainder;
  TraceSource source = TraceSource::bundle_robin;
  int terms = 0;
  int reduced_dim = 0;
  /// Monotonicity is only asserted when every eigenvalue is >= 0.
  bool monotone_checked = false;
  bool monotone = true;
  bool log_convex = true;
  std::string note;
};

/// 32 logarithmically spaced points in [1e-3, 1e2] unless told otherwise.
std::vector<double> default_t_grid(int count = 32, double lo = 1e-3, double hi = 1e2);

HeatTrace heat_trace(const Spectrum& spectrum, const std::vector<double>& t_grid,
                     TraceSource source = TraceSource::bundle_robin);

/// beta e^{-rho t} <= k_E(t) at every grid point.
struct TraceBoundCheck {
  std::vector<double> lower;  ///< beta e^{-rho t}
  bool pass = true;
  double worst_margin = 0.0;  ///< min over t of k_E(t) - lower
};

TraceBoundCheck trace_lower_bound_check(const HeatTrace& bundle_trace, int beta, double rho);

struct DominationPoint {
  double t = 0.0;
  /// max over vertex pairs of |K_E(x, y, t)| - K(x, y, t), the block norm being the spectral norm.
  double max_excess = 0.0;
  int worst_x = -1;
  int worst_y = -1;
  double max_row_sum = 0.0;  ///< max_x int K(x, y, t) dA(y)
  double min_row_sum = 0.0;
  double trace_bundle = 0.0;  ///< k_E(t) of the discrete generator
  double trace_scalar = 0.0;  ///< k(t)
  bool domination = true;
  bool mass_bound = true;
  bool trace_ratio = true;  ///< k_E(t) <= (n - 2) k(t)
};

struct DominationOptions {
  int max_dofs = 600;
  double slack = 1e-8;
  /// Replaces the ambient alpha in the scalar boundary condition (diagnostic only).
  std::optional<double> alpha_override;
  int ambient_dim = 3;
  AssemblyOptions assembly{};
};

struct DominationReport {
  double alpha = 0.0;
  bool alpha_overridden = false;
  double slack = 0.0;
  int scalar_dofs = 0;
  int bundle_dofs = 0;
  int trace_factor = 1;  ///< n - 2
  std::vector<DominationPoint> points;
  /// |row sum - 1| at the smallest grid time.
  double small_t_mass_error = 0.0;
  bool domination_pass = true;
  bool mass_pass = true;
  bool trace_ratio_pass = true;
};

/// Dense heat operators of the Robin bundle generator and the scalar generator
/// with boundary condition dK/deta = alpha K, compared pointwise on the grid.
DominationReport kernel_domination_check(const ImmersedSurface& immersed, const std::vector<double>& t_grid,
                                         const DominationOptions& opts = {});

}  // namespace fbms
