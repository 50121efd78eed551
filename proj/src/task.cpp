#include "trajevo/task.hpp"

#include <algorithm>
#include <ostream>

namespace trajevo {

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::planar: return "2d";
    case TaskKind::holonomic3d: return "3d-holonomic";
    case TaskKind::nonholonomic3d: return "3d-nonholonomic";
  }
  return "?";
}

TaskKind parse_task_kind(const std::string& s) {
  if (s == "2d") return TaskKind::planar;
  if (s == "3d-holonomic" || s == "3d") return TaskKind::holonomic3d;
  if (s == "3d-nonholonomic") return TaskKind::nonholonomic3d;
  throw ConfigError("unknown task '" + s + "' (expected 2d, 3d-holonomic or 3d-nonholonomic)");
}

std::string to_string(SegmentMode m) { return m == SegmentMode::fixed ? "fixed" : "uniform"; }

SegmentMode parse_segment_mode(const std::string& s) {
  if (s == "fixed") return SegmentMode::fixed;
  if (s == "uniform") return SegmentMode::uniform;
  throw ConfigError("unknown segment mode '" + s + "' (expected fixed or uniform)");
}

namespace {

std::vector<Vec3> planar_directions() {
  std::vector<Vec3> d;
  for (int k = 1; k <= 16; ++k) {
    const double a = k * std::numbers::pi / 8.0;
    d.push_back({std::cos(a), std::sin(a), 0.0});
  }
  return d;
}

std::vector<Vec3> spatial_directions() {
  std::vector<Vec3> d;
  const double c = 1.0 / std::sqrt(3.0);
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) d.push_back({sx * c, sy * c, sz * c});
  d.push_back({1.0, 0.0, 0.0});
  d.push_back({-1.0, 0.0, 0.0});
  d.push_back({0.0, 1.0, 0.0});
  d.push_back({0.0, -1.0, 0.0});
  d.push_back({0.0, 0.0, 1.0});
  d.push_back({0.0, 0.0, -1.0});
  return d;
}

Segment draw_segment(std::size_t dim, SegmentMode mode, Rng& rng) {
  Segment s;
  s.direction = static_cast<std::uint32_t>(pick(rng, direction_set(dim).size()));
  s.steps = mode == SegmentMode::fixed
                ? static_cast<std::uint32_t>(kFixedSegmentSteps)
                : static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(kMinSegmentSteps,
                                                                                     kMaxSegmentSteps)(rng));
  return s;
}

Vec3 along(const Vec3& start, const Vec3& dir, std::size_t n) {
  const double travelled = static_cast<double>(n) * kStepDistance;
  return {start[0] + travelled * dir[0], start[1] + travelled * dir[1], start[2] + travelled * dir[2]};
}

}  // namespace

std::span<const Vec3> direction_set(std::size_t dim) {
  static const std::vector<Vec3> planar = planar_directions();
  static const std::vector<Vec3> spatial = spatial_directions();
  return dim == 2 ? std::span<const Vec3>(planar) : std::span<const Vec3>(spatial);
}

TrajectorySpec::TrajectorySpec(std::size_t dim, SegmentMode mode) : dim_(dim), mode_(mode) {
  if (dim != 2 && dim != 3) throw ConfigError("trajectory dimension must be 2 or 3");
}

void TrajectorySpec::append(Segment s) {
  const auto dirs = direction_set(dim_);
  if (s.direction >= dirs.size()) throw ConfigError("segment direction index out of range");
  if (s.steps == 0) throw ConfigError("segment must have at least one step");
  Vec3 start{0.0, 0.0, 0.0};
  if (!segments_.empty()) start = along(starts_.back(), dirs[segments_.back().direction], segments_.back().steps);
  segments_.push_back(s);
  starts_.push_back(start);
  first_step_.push_back(total_steps_);
  total_steps_ += s.steps;
}

Vec3 TrajectorySpec::position(std::size_t t) const {
  if (segments_.empty()) return {0.0, 0.0, 0.0};
  t = std::min(t, total_steps_);
  auto it = std::upper_bound(first_step_.begin(), first_step_.end(), t);
  std::size_t s = static_cast<std::size_t>(it - first_step_.begin()) - 1;
  if (t == total_steps_) s = segments_.size() - 1;
  return along(starts_[s], direction_set(dim_)[segments_[s].direction], t - first_step_[s]);
}

Vec3 TargetCursor::advance() {
  const auto& segs = spec_->segments_;
  if (segment_ >= segs.size()) return spec_->position(spec_->total_steps());
  ++into_;
  const Vec3 p = along(spec_->starts_[segment_], direction_set(spec_->dim_)[segs[segment_].direction], into_);
  if (into_ == segs[segment_].steps && segment_ + 1 < segs.size()) {
    ++segment_;
    into_ = 0;
  }
  return p;
}

TrajectorySpec generate_trajectory(std::size_t dim, std::size_t n_segments, SegmentMode mode, Rng& rng) {
  TrajectorySpec spec(dim, mode);
  extend_trajectory(spec, n_segments, rng);
  return spec;
}

void extend_trajectory(TrajectorySpec& spec, std::size_t n_more, Rng& rng) {
  for (std::size_t i = 0; i < n_more; ++i) spec.append(draw_segment(spec.dim(), spec.mode(), rng));
}

Vec3 drive_holonomic(std::span<const double> outputs, std::size_t dim) {
  const double vmax = dim == 2 ? 0.2 : 0.3;
  Vec3 d{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < dim; ++k) d[k] = paired_drive(outputs[2 * k], outputs[2 * k + 1]) * vmax;
  return d;
}

Vec3 orientation(Heading h) {
  const double cz = std::cos(h.about_z), sz = std::sin(h.about_z);
  const double cy = std::cos(h.about_y), sy = std::sin(h.about_y);
  return {cz * cy, sz * cy, -sy};
}

Vec3 drive_nonholonomic_3d(std::span<const double> outputs, Heading& heading) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double speed = paired_drive(outputs[0], outputs[1]) * 0.3;
  heading.about_z = std::remainder(heading.about_z + paired_drive(outputs[2], outputs[3]) * kMaxTurn, two_pi);
  heading.about_y = std::remainder(heading.about_y + paired_drive(outputs[4], outputs[5]) * kMaxTurn, two_pi);
  const Vec3 dir = orientation(heading);
  return {speed * dir[0], speed * dir[1], speed * dir[2]};
}

EvalResult evaluate(Phenotype& net, const TrajectorySpec& spec, TaskKind kind, std::size_t period,
                    std::size_t max_steps, std::vector<StepRecord>* trace) {
  net.reset();
  std::array<int, 2> hot{net.input_slot(kBiasInput), -1};
  std::size_t current_period = static_cast<std::size_t>(-1);
  auto controller = [&](std::size_t t) {
    const std::size_t p = t / period;
    if (p != current_period) {
      current_period = p;
      hot[1] = net.input_slot(kFirstScaffoldInput + static_cast<GeneId>(p));
    }
    return net.step_with_hot_inputs(hot);
  };
  if (trace) return simulate(spec, kind, max_steps, controller, [&](const StepRecord& r) { trace->push_back(r); });
  return simulate(spec, kind, max_steps, controller, [](const StepRecord&) {});
}

void write_trajectory_csv(std::ostream& os, std::size_t dim, std::span<const StepRecord> rows) {
  static const char* axis[] = {"x", "y", "z"};
  os << "step";
  for (std::size_t d = 0; d < dim; ++d) os << ",target_" << axis[d];
  for (std::size_t d = 0; d < dim; ++d) os << ",agent_" << axis[d];
  os << ",distance,alive\n";
  const auto old_precision = os.precision(17);
  for (const auto& r : rows) {
    os << r.step;
    for (std::size_t d = 0; d < dim; ++d) os << ',' << r.target[d];
    for (std::size_t d = 0; d < dim; ++d) os << ',' << r.agent[d];
    os << ',' << r.distance << ',' << (r.alive ? 1 : 0) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace trajevo
