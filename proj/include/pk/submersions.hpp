#pragma once

#include "pk/submanifolds.hpp"

#include <variant>

namespace pk {

/// Poisson submersion p : (Sigma, pi_total) -> (M, pi_base).
struct SubmersionSpec {
  SmoothMap p;
  Multivector pi_total;
  Multivector pi_base;
};

/// Rational-function basis of the vertical bundle V = ker dp (columns).
Mat<RatFunc> vertical_frame(const SubmersionSpec& spec);
Mat<Rat> vertical_frame_at(const SubmersionSpec& spec, const Point& at);

struct FiberPoint {
  Point at;
  bool fiber_pd = false;
  int fiber_rank = 0;   // rank of pi^sharp restricted to V°
  bool coupling = false;
  std::string fiber_kind;  // "trivial" | "symplectic" | "degenerate" | "none"
};

struct FiberReport {
  bool poisson_map = false;
  std::vector<FiberPoint> points;
  /// Holds iff fiber_pd everywhere and fiber_rank constant along each fiber
  /// (samples grouped by their image under p).
  Verdict coregular = Verdict::NotDetermined;
  std::optional<std::pair<Point, Point>> witness;
};

FiberReport fiber_report(const SubmersionSpec& spec, const std::vector<Point>& grid);

struct PencilDecomposition {
  Multivector pi_v, pi_h;  // pi_v + pi_h = pi_total exactly
  bool vertical_ok = false;       // pi_v^sharp image inside V, symbolically
  bool bracket_vv = false;        // [pi_v, pi_v] = 0
  bool bracket_vh = false;        // [pi_v, pi_h] = 0
  bool bracket_hh = false;        // [pi_h, pi_h] = 0
  bool horizontal_clear = false;  // pi_h image meets V trivially at samples
  bool ok() const {
    return vertical_ok && bracket_vv && bracket_vh && bracket_hh && horizontal_clear;
  }
};

struct PencilObstruction {
  std::vector<Point> witnesses;  // one sample per observed rank
  std::vector<int> ranks;
};

/// Vertical part of the family Gr(pi_total) ∩ (V ⊕ T*Σ) + V° at a point,
/// as a bivector matrix; nullopt when the family fails to be a graph there.
std::optional<Mat<Rat>> vertical_bivector_at(const SubmersionSpec& spec,
                                             const Point& at);

std::variant<PencilDecomposition, PencilObstruction> pencil_decompose(
    const SubmersionSpec& spec, const std::vector<Point>& grid);

/// Coupling data: one horizontal lift per base coordinate, a vertical
/// bivector, and a 2-form annihilating vertical insertions.
struct CouplingData {
  std::vector<Multivector> horizontal;
  Multivector pi;
  Form omega;
};

struct CouplingVerdicts {
  bool pi_poisson = false;         // [pi, pi] = 0
  bool lifts_preserve = false;     // L_{h(u)} pi = 0 for coordinate lifts
  bool omega_closed_h = false;     // d omega vanishes on horizontal triples
  bool curvature_matches = false;  // curv(u,v) = pi^sharp(d omega(h(v), h(u)))
  bool all() const {
    return pi_poisson && lifts_preserve && omega_closed_h && curvature_matches;
  }
};

CouplingVerdicts coupling_data_verify(const CouplingData& cd,
                                      const SubmersionSpec& spec,
                                      const std::vector<Point>& grid);

/// Generators pi_total^sharp(p* dy_a) of the singular horizontal foliation.
std::vector<Multivector> horizontal_generators(const SubmersionSpec& spec);
/// [H_{f∘p}, H_{g∘p}] = H_{{f,g}∘p} for coordinate functions on the base.
bool horizontal_closure(const SubmersionSpec& spec);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double conservation_error = 0.0;  // max |f(x_t) - f(x_0)|
  double richardson_error = 0.0;    // endpoint difference vs halved step
  bool completed = false;
};

/// Fixed-step RK4 integration of the Hamiltonian field of f.
Trajectory ham_flow(const Multivector& pi, const Scalar& f, const Point& x0,
                    double T, double h);

}  // namespace pk
