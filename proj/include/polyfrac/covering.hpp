#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyfrac/polytope.hpp"
#include "polyfrac/rng.hpp"

namespace polyfrac {

struct CoveringElement {
  enum class Shape { ball, half_ball, wedge };
  Shape shape = Shape::ball;
  Vec3 center;
  double R = 0.0;      // c * dist(center, singular feature)
  double c = 0.25, chat = 0.5;
  int generation = 0;
  bool inflated_inside = false;  // chat-scaled ball stays inside Omega

  double chat_radius() const { return R * chat / c; }
};

struct Covering {
  std::vector<CoveringElement> elements;
  NeighborhoodSpec target;
  double c = 0.25, chat = 0.5;
  int depth = 0;
  double trunc_dist = 0.0;  // feature distance below which the region is left uncovered
  double grading_scale = 0.0;
  // For kinds whose singular feature has positive dimension (e, ef, f) the
  // covered set is windowed: lateral offset from window_base along the feature
  // is capped at window_kappa * feature distance, which keeps the family size
  // bounded per generation.  window_kappa = 0 means no window.
  Vec3 window_base{0, 0, 0};
  double window_kappa = 0.0;
};

/// Singular feature the covering grades toward: 0 = vertex, 1 = edge, 2 = face.
int grading_feature_dim(RegionKind kind);

/// Distance from x to the spec's singular feature.
double feature_distance(const Polytope& P, const NeighborhoodSpec& spec, const Vec3& x);

/// Membership in the neighborhood extended to its closure trace (centers of
/// half-balls/wedges sit on the boundary, where classify() is not defined).
bool region_trace_contains(const Polytope& P, const NeighborhoodSpec& spec, const Vec3& x);

/// Dyadic-generation covering of the truncated neighborhood.  Ball elements
/// for v/e/f, half-balls centered on the face for ef/vf, wedges centered on
/// the edge for ve/vef.  Throws on inadmissible (c, chat).
Covering cover(const Polytope& P, const NeighborhoodSpec& spec, double c, double chat,
               int depth);

/// Appends extra dyadic generations toward the singular feature.
Covering refine_toward_feature(const Polytope& P, const Covering& cov, int extra_depth);

struct OverlapCertificate {
  int N_emp = 0;
  std::vector<std::uint64_t> histogram;  // histogram[k] = samples in exactly k elements
  std::uint64_t samples = 0;
};

/// Max number of chat-scaled elements containing a point of the truncated
/// region, over Monte-Carlo samples.
OverlapCertificate certify_overlap(const Polytope& P, const Covering& cov,
                                   std::uint64_t samples, const CounterRng& rng);

struct CoverageReport {
  std::uint64_t samples = 0;
  std::uint64_t misses = 0;
  double fraction() const {
    return samples == 0 ? 0.0 : 1.0 - double(misses) / double(samples);
  }
  // radius comparability over covered samples: C^-1 R_i <= r_feature(x) <= C R_i
  double C_B = 0.0;
};

CoverageReport certify_coverage(const Polytope& P, const Covering& cov,
                                std::uint64_t samples, const CounterRng& rng);

/// Uniform sample in the truncated neighborhood, by rejection from a
/// kind-specific proposal box.
Vec3 sample_region_point(const Polytope& P, const NeighborhoodSpec& spec, double trunc,
                         CounterRng& rng);

/// Membership in the set a covering targets: neighborhood membership plus
/// the truncation and lateral window.
bool covered_region_contains(const Polytope& P, const Covering& cov, const Vec3& x);

void export_jsonl(const Covering& cov, const std::string& path);

}  // namespace polyfrac
