#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fslp/model.hpp"

namespace fslp {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ToyProblem {
  StructuredNlp nlp;
  Vector feasible_start;
  Vector known_optimum;
};

/// min -w1 on the unit circle, or min -w1 - w2 with w2 - w1 <= 0 added.
/// Starts at (0, 1), or (1, 0) for the constrained variant.
ToyProblem circle_problem(bool with_inequality);

enum class OcpSystem { DoubleIntegrator1D, PointMass2D };

const char* to_string(OcpSystem system);
OcpSystem ocp_system_from_string(const std::string& name);

struct Obstacle {
  std::vector<std::array<double, 2>> vertices;
  double r_safe = 0.0;
};

/// Rest-to-rest, free-final-time point-to-point problem. State is (p, v) with
/// p, v in R^1 or R^2; the control is the acceleration.
struct OcpSpec {
  int N = 20;
  OcpSystem system = OcpSystem::DoubleIntegrator1D;
  Vector x_start;
  Vector x_end;
  Vector u_min;
  Vector u_max;
  Vector x_min;
  Vector x_max;
  Vector mu0;
  Vector muN;
  std::optional<double> v_max;   // speed ball, PointMass2D only
  std::optional<double> u_ball;  // control-norm ball, PointMass2D only
  std::optional<Obstacle> obstacle;
  double T_min = 0.1;
  double T_max = 20.0;

  int n_x() const noexcept { return system == OcpSystem::DoubleIntegrator1D ? 2 : 4; }
  int n_u() const noexcept { return system == OcpSystem::DoubleIntegrator1D ? 1 : 2; }
  int n_pos() const noexcept { return n_u(); }

  /// Throws SpecError on any inconsistency.
  void validate() const;
};

/// Offsets of each variable block inside w; -1 marks an absent block.
struct OcpLayout {
  int n_x = 0;
  int n_u = 0;
  int N = 0;
  Index x0 = 0;
  Index u0 = 0;
  Index s0 = 0;
  Index sN = 0;
  Index T = 0;
  Index vel_slack = -1;
  Index ball_slack = -1;
  Index hyperplane = -1;  // 3 per stage: (n_a, n_b)
  Index obs_slack = -1;
  Index n_w = 0;

  Index x(int k, int i = 0) const { return x0 + static_cast<Index>(k) * n_x + i; }
  Index u(int k, int i = 0) const { return u0 + static_cast<Index>(k) * n_u + i; }
};

OcpLayout ocp_layout(const OcpSpec& spec);

/// Multiple-shooting transcription with RK4 and step T/N.
StructuredNlp build_p2p_ocp(const OcpSpec& spec);

/// x_{k+1} = RK4 step of the double integrator; exposed for tests and rollouts.
Vector rk4_step(const OcpSpec& spec, const Vector& x, const Vector& u, double step);

/// Constant-control rollout from x_start, completed with slacks and separating
/// hyperplanes so that the result lies in the feasible set.
Vector init_feasible(const OcpSpec& spec, const Vector& u_const, double T0);

/// 64-bit LCG (Knuth MMIX constants); uniform() takes the top 53 bits.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Start and end positions perturbed by U[-magnitude, magnitude], drawn per
/// problem in the order start components then end components.
std::vector<OcpSpec> perturbed_test_set(const OcpSpec& spec, int count, double magnitude,
                                        std::uint64_t seed);

/// Continuous-time minimum time for straight-line rest-to-rest motion.
double analytic_min_time(const OcpSpec& spec);

/// Default fixtures used by the CLI and the test suites.
OcpSpec double_integrator_spec(int N = 40, double distance = 1.0, double accel = 1.0,
                               std::optional<double> speed_limit = std::nullopt);
/// Rest-to-rest move to (1, 0.5), |u_i| <= 1, speed ball 0.6 when enabled.
OcpSpec point_mass_spec(bool speed_bound = true, int N = 10);

/// Initial control and horizon used to start the default fixtures.
struct OcpStart {
  Vector u_const;
  double T0 = 1.0;
};
OcpStart default_start(const OcpSpec& spec);

}  // namespace fslp
