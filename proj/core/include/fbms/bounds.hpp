#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fbms/closed_form.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Exact nonnegative-denominator fraction in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
  /// a/b <= c
  bool at_most(std::int64_t c) const { return num <= c * den; }
};

/// 0 for chi > 0, 1 for chi = 0, 6g - 6 + 3m for chi < 0.
int upsilon(int g, int m);

struct RiemannRoch {
  int index = 0;  ///< n chi + mu
  std::optional<bool> injective_hint;   ///< mu < 0
  std::optional<bool> surjective_hint;  ///< mu + 2 chi > 0
  int maslov_antiholomorphic = 0;       ///< 2 chi
  int h0_difference = 0;                ///< 3 chi
  /// 2 h0(T^{0,1} (x) Lambda^{1,0}) implied by the h0 difference: 0 when the
  /// antiholomorphic operator is surjective (chi > 0), the Clifford cap 1 for
  /// chi = 0, and -3 chi otherwise.
  int obstruction_count = 0;
};

/// Hints are only defined for rank 1; asking for them at higher rank is a RankError.
RiemannRoch riemann_roch(int n_rank, int chi, int mu, bool with_hints = true);

/// (2g + m - 1) / 3.
Rational acs_lower_bound(int g, int m);

enum class AreaRegime { convex, concave };

struct AreaBoundInput {
  int g = 0;
  int m = 1;
  AreaRegime regime = AreaRegime::convex;
  double alpha = 1.0;  ///< convex: II >= alpha > 0; concave: II <= -alpha <= 0
  double kappa = 0.0;  ///< concave: sec <= -kappa <= 0
  double area = 0.0;
  double boundary_length = 0.0;
  double c1 = 1.0;
};

struct AreaBoundReport {
  AreaRegime regime = AreaRegime::convex;
  /// convex: c1 min{4 pi (g + m) / alpha, 16 pi floor((g + 3) / 2) / alpha}
  double cap = 0.0;
  /// concave: kappa |Sigma| + alpha |dSigma| against -2 pi chi
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool regime_inapplicable = false;
  std::string note;
};

AreaBoundReport geometric_area_bounds(const AreaBoundInput& in);

/// Classified counts of one form, tagged with the mesh they came from.
struct FormCounts {
  int index = 0;
  int nullity = 0;
  int num_vertices = 0;
};

struct BoundInputs {
  std::string surface_id;
  int num_vertices = 0;
  TopologyInvariants topology;
  FormCounts area;
  FormCounts energy;
  FormCounts tangential;
  /// Eigenvalues of the Robin bundle form at most rho.
  int beta = 0;
  int beta_vertices = 0;
  double area_measure = 0.0;
  double boundary_length = 0.0;
  double rho = 0.0;
  /// Constant c(M) for the composite area-index bound; checked only when given.
  std::optional<double> c_empirical;
  /// Whether the composite bound is asserted or only reported (estimated constants).
  bool composite_asserted = true;
  /// Ambient is a convex domain of R^3, where the lower bound (2g + m - 1) / 3 applies.
  bool convex_euclidean = false;
  /// Closed-form heat bound inputs (area and rho are taken from above).
  std::optional<ClosedFormInput> closed_form;
};

struct InequalityRecord {
  std::string name;
  std::string relation;  ///< "<=" or "=="
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs (or -|lhs - rhs| for equalities)
  double tolerance = 0.0;
  bool asserted = true;
  bool pass = false;
};

struct BoundReport {
  std::string surface_id;
  TopologyInvariants topology;
  int ind_area = 0, nul_area = 0;
  int ind_energy = 0, nul_energy = 0;
  int nul_tangential = 0;
  int beta = 0;
  int upsilon = 0;
  Rational acs_lower;
  double area = 0.0;
  double boundary_length = 0.0;
  double composite_cap = 0.0;  ///< min{4 pi (g + m), 16 pi floor((g + 3) / 2)}
  std::optional<double> composite_bound;
  /// Smallest c for which the composite bound holds with the computed area index.
  double composite_tight_c = 0.0;
  std::optional<ClosedFormResult> closed_form;
  std::vector<InequalityRecord> records;

  /// Every asserted record passes.
  bool pass() const;
};

BoundReport verify_inequalities(const BoundInputs& in);

nlohmann::json to_json(const Rational& r);
nlohmann::json to_json(const RiemannRoch& r);
nlohmann::json to_json(const AreaBoundReport& r);
nlohmann::json to_json(const BoundReport& r);
/// Fixed-width text table of the inequality records.
std::string format_table(const BoundReport& r);

}  // namespace fbms
