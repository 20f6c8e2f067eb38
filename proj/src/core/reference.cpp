#include "core/reference.hpp"

#include <algorithm>
#include <cmath>

namespace imtd {

namespace {

void require_orthonormal(const FrameTriad& triad, const char* which) {
  const Eigen::Matrix3d gram = triad.axes.transpose() * triad.axes;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6 ||
      std::abs(triad.axes.determinant() - 1.0) > 1e-6) {
    fail(Errc::invalid_argument, std::string(which) + " triad is not orthonormal");
  }
}

struct Series {
  std::vector<double> t;
  std::vector<double> v;
};

Series extract_channel(std::span<const JointState> joints, Channel c) {
  Series s;
  s.t.reserve(joints.size());
  s.v.reserve(joints.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (const JointState& q : joints) {
    if (!(q.t > prev)) fail(Errc::ordering, "series timestamps must be strictly increasing");
    prev = q.t;
    s.t.push_back(q.t);
    switch (c) {
      case Channel::phi1: s.v.push_back(q.phi1); break;
      case Channel::phi2: s.v.push_back(q.phi2); break;
      case Channel::translation: s.v.push_back(q.d); break;
    }
  }
  return s;
}

// Linear interpolation onto grid times; grid must lie inside [t.front, t.back].
std::vector<double> lerp_onto(const Series& s, const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double tg = grid[i];
    while (k + 2 < s.t.size() && s.t[k + 1] < tg) ++k;
    const double t0 = s.t[k];
    const double t1 = s.t[k + 1];
    const double a = (tg - t0) / (t1 - t0);
    out[i] = s.v[k] * (1.0 - a) + s.v[k + 1] * a;
  }
  return out;
}

struct Gridded {
  std::vector<double> t;
  std::vector<std::vector<double>> device;     // per channel
  std::vector<std::vector<double>> reference;  // per channel
};

constexpr Channel kChannels[3] = {Channel::phi1, Channel::phi2, Channel::translation};

Gridded resample(std::span<const JointState> device, std::span<const JointState> reference,
                 double grid_rate, double reference_shift) {
  if (device.size() < 2 || reference.size() < 2) {
    fail(Errc::insufficient_data, "resample_align: need at least 2 samples per series");
  }
  if (!(grid_rate > 0.0)) fail(Errc::invalid_argument, "resample_align: grid_rate must be > 0");

  Series dev[3];
  Series ref[3];
  for (int c = 0; c < 3; ++c) {
    dev[c] = extract_channel(device, kChannels[c]);
    ref[c] = extract_channel(reference, kChannels[c]);
    for (double& tv : ref[c].t) tv += reference_shift;
  }

  const double start = std::max(dev[0].t.front(), ref[0].t.front());
  const double end = std::min(dev[0].t.back(), ref[0].t.back());
  if (end - start < 1.0) {
    fail(Errc::alignment, "resample_align: overlapping time window shorter than 1 s");
  }
  const double dt = 1.0 / grid_rate;
  const std::size_t n = static_cast<std::size_t>(std::floor((end - start) * grid_rate + 1e-9)) + 1;

  Gridded g;
  g.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.t[i] = start + static_cast<double>(i) * dt;
  for (int c = 0; c < 3; ++c) {
    g.device.push_back(lerp_onto(dev[c], g.t));
    g.reference.push_back(lerp_onto(ref[c], g.t));
  }
  return g;
}

// Normalized cross-correlation of two mean-removed windows; 0 when either is flat.
double ncc(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) return 0.0;
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0.0;
  double da = 0.0;
  double db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    da += (a[i] - ma) * (a[i] - ma);
    db += (b[i] - mb) * (b[i] - mb);
  }
  if (da <= 0.0 || db <= 0.0) return 0.0;
  return num / std::sqrt(da * db);
}

// Best integer grid shift of the reference, in [-max_shift, max_shift] samples.
// Positive shift means the reference clock must be advanced (lag added).
int best_lag_steps(const Gridded& g, int max_shift) {
  int best_k = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(g.t.size());
  auto try_shift = [&](int k) {
    if (std::abs(k) >= n - 1) return;
    double score = 0.0;
    for (int c = 0; c < 3; ++c) {
      // device[i] vs reference[i - k]
      const int lo = std::max(0, k);
      const int hi = n + std::min(0, k);
      score += ncc(std::span<const double>(g.device[c]).subspan(lo, hi - lo),
                   std::span<const double>(g.reference[c]).subspan(lo - k, hi - lo));
    }
    if (score > best_score + 1e-12) {
      best_score = score;
      best_k = k;
    }
  };
  try_shift(0);
  for (int mag = 1; mag <= max_shift; ++mag) {
    try_shift(mag);
    try_shift(-mag);
  }
  return best_k;
}

}  // namespace

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::phi1: return "phi1";
    case Channel::phi2: return "phi2";
    case Channel::translation: return "translation";
  }
  return "?";
}

Transform estimate_frame_transform(const FrameTriad& static_device,
                                   const FrameTriad& static_reference) {
  require_orthonormal(static_device, "device");
  require_orthonormal(static_reference, "reference");
  Transform out;
  out.rotation = orthonormalized(static_device.axes * static_reference.axes.transpose());
  out.translation = static_device.origin - out.rotation * static_reference.origin;
  return out;
}

DerivedJoints derive_reference_joints(const MarkerStream& m, const Transform& ref_to_device,
                                      AngleConvention convention) {
  DerivedJoints out;
  out.joints.reserve(m.samples.size());
  for (const MarkerSample& s : m.samples) {
    const Eigen::Vector3d v_ref = s.tip - s.center;
    if (v_ref.norm() <= 1.0) {
      ++out.dropped_samples;
      continue;
    }
    const Eigen::Vector3d v = ref_to_device.apply_vector(v_ref);
    const VectorAngles angles = joint_angles_from_vector(v, convention);
    JointState q;
    q.phi1 = angles.phi1;
    q.phi2 = angles.phi2;
    q.phi3 = angles.phi3;
    q.d = v.norm();
    q.t = s.t;
    out.joints.push_back(q);
  }
  return out;
}

AlignmentResult resample_align(std::span<const JointState> device,
                               std::span<const JointState> reference, double grid_rate,
                               bool lag_correction) {
  Gridded g = resample(device, reference, grid_rate, 0.0);

  AlignmentResult result;
  if (lag_correction) {
    const int max_shift = static_cast<int>(std::lround(0.5 * grid_rate));
    const int k = best_lag_steps(g, max_shift);
    if (k != 0) {
      result.applied_lag = static_cast<double>(k) / grid_rate;
      g = resample(device, reference, grid_rate, result.applied_lag);
    }
  }
  for (int c = 0; c < 3; ++c) {
    AlignedPair p;
    p.channel = kChannels[c];
    p.t = g.t;
    p.device = std::move(g.device[c]);
    p.reference = std::move(g.reference[c]);
    result.channels.push_back(std::move(p));
  }
  return result;
}

double channel_mse(const AlignedPair& p) {
  if (p.device.size() != p.reference.size()) {
    fail(Errc::invalid_argument, "channel_mse: series length mismatch");
  }
  if (p.device.size() < 2) fail(Errc::insufficient_data, "channel_mse: need at least 2 samples");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.device.size(); ++i) {
    const double d = p.device[i] - p.reference[i];
    acc += d * d;
  }
  return acc / static_cast<double>(p.device.size());
}

}  // namespace imtd
