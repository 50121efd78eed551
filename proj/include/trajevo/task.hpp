#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "trajevo/network.hpp"
#include "trajevo/rng.hpp"

namespace trajevo {

using Vec3 = std::array<double, 3>;

enum class TaskKind : std::uint8_t { planar, holonomic3d, nonholonomic3d };
enum class SegmentMode : std::uint8_t { fixed, uniform };

std::string to_string(TaskKind k);
TaskKind parse_task_kind(const std::string& s);
std::string to_string(SegmentMode m);
SegmentMode parse_segment_mode(const std::string& s);

inline std::size_t dimensions(TaskKind k) { return k == TaskKind::planar ? 2 : 3; }
inline std::size_t output_count(TaskKind k) { return k == TaskKind::planar ? 4 : 6; }
inline double max_speed(TaskKind k) { return k == TaskKind::planar ? 0.2 : 0.3; }

inline constexpr double kStepDistance = 0.1;
inline constexpr double kSurvivalRadius = 1.0;
inline constexpr std::size_t kFixedSegmentSteps = 30;
inline constexpr std::size_t kMinSegmentSteps = 10;
inline constexpr std::size_t kMaxSegmentSteps = 50;
inline constexpr double kMaxTurn = std::numbers::pi / 4.0;

/// 16 planar directions (cos k pi/8, sin k pi/8), k = 1..16, stored at k-1;
/// or the 14 spatial ones: 8 normalised cube corners then 6 face centres.
std::span<const Vec3> direction_set(std::size_t dim);

struct Segment {
  std::uint32_t direction = 0;
  std::uint32_t steps = 0;
  bool operator==(const Segment&) const = default;
};

/// Target path. Segments are append-only; start positions are cached.
class TrajectorySpec {
 public:
  TrajectorySpec(std::size_t dim, SegmentMode mode);

  std::size_t dim() const { return dim_; }
  SegmentMode mode() const { return mode_; }
  std::span<const Segment> segments() const { return segments_; }
  std::size_t total_steps() const { return total_steps_; }

  void append(Segment s);

  /// Target position after `t` elapsed steps (t = 0 is the origin).
  Vec3 position(std::size_t t) const;

  bool operator==(const TrajectorySpec& o) const {
    return dim_ == o.dim_ && mode_ == o.mode_ && segments_ == o.segments_;
  }

 private:
  friend class TargetCursor;
  std::size_t dim_;
  SegmentMode mode_;
  std::vector<Segment> segments_;
  std::vector<Vec3> starts_;
  std::vector<std::size_t> first_step_;
  std::size_t total_steps_ = 0;
};

/// Sequential walker over target positions, cheaper than position(t).
class TargetCursor {
 public:
  explicit TargetCursor(const TrajectorySpec& spec) : spec_(&spec) {}
  /// Position after one more step.
  Vec3 advance();

 private:
  const TrajectorySpec* spec_;
  std::size_t segment_ = 0;
  std::size_t into_ = 0;
};

TrajectorySpec generate_trajectory(std::size_t dim, std::size_t n_segments, SegmentMode mode, Rng& rng);
/// Appends segments drawn from `rng`; the existing prefix is untouched.
void extend_trajectory(TrajectorySpec& spec, std::size_t n_more, Rng& rng);

/// +p if only p is positive, -n if only n is positive, otherwise 0.
inline double paired_drive(double p, double n) {
  if (p > 0.0 && !(n > 0.0)) return p;
  if (n > 0.0 && !(p > 0.0)) return -n;
  return 0.0;
}

Vec3 drive_holonomic(std::span<const double> outputs, std::size_t dim);

struct Heading {
  double about_z = 0.0;
  double about_y = 0.0;
};

/// Unit vector Rz(about_z) * Ry(about_y) * (1, 0, 0).
Vec3 orientation(Heading h);

/// Updates `heading` (wrapped into [-pi, pi]) and returns the displacement
/// along the new orientation.
Vec3 drive_nonholonomic_3d(std::span<const double> outputs, Heading& heading);

struct AgentState {
  Vec3 position{0.0, 0.0, 0.0};
  Heading heading;
  double fitness = 0.0;
  bool alive = true;
  std::size_t steps_survived = 0;
};

struct EvalResult {
  double fitness = 0.0;
  std::size_t steps_survived = 0;
  bool operator==(const EvalResult&) const = default;
};

struct StepRecord {
  std::size_t step;
  Vec3 target;
  Vec3 agent;
  double distance;
  bool alive;
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Core simulation loop. `controller(t)` returns the network outputs for
/// step t (0-based). Per step: controller, move agent, move target, check
/// distance. `record` (may be null) sees every step including the fatal one.
template <typename Controller, typename Recorder>
EvalResult simulate(const TrajectorySpec& spec, TaskKind kind, std::size_t max_steps, Controller&& controller,
                    Recorder&& record) {
  AgentState agent;
  TargetCursor target(spec);
  const std::size_t dim = spec.dim();
  const std::size_t limit = std::min(max_steps, spec.total_steps());
  for (std::size_t t = 0; t < limit; ++t) {
    std::span<const double> out = controller(t);
    const Vec3 move =
        kind == TaskKind::nonholonomic3d ? drive_nonholonomic_3d(out, agent.heading) : drive_holonomic(out, dim);
    for (std::size_t d = 0; d < 3; ++d) agent.position[d] = agent.position[d] + move[d];
    const Vec3 goal = target.advance();
    const double dist = distance(agent.position, goal);
    const bool alive = dist < kSurvivalRadius;
    record(StepRecord{t + 1, goal, agent.position, dist, alive});
    if (!alive) {
      agent.alive = false;
      break;
    }
    agent.fitness += 1.0 - dist;
    ++agent.steps_survived;
  }
  return {agent.fitness, agent.steps_survived};
}

/// Resets `net`, then runs it on `spec` with bias 1.0 and the scaffolding
/// input of the current period (id 1000 + t / period) set to 1.0.
EvalResult evaluate(Phenotype& net, const TrajectorySpec& spec, TaskKind kind, std::size_t period,
                    std::size_t max_steps, std::vector<StepRecord>* trace = nullptr);

void write_trajectory_csv(std::ostream& os, std::size_t dim, std::span<const StepRecord> rows);

}  // namespace trajevo
