#pragma once

#include "pk/calculus.hpp"

#include <optional>
#include <string>

namespace pk {

/// Polytope { xi : <xi, u_i> >= c_i } with integer facet normals.
struct DelzantPolytope {
  unsigned rank = 0;                    // ambient dimension n
  std::vector<std::vector<Int>> normals;  // d vectors u_i in Z^n
  std::vector<Rat> offsets;             // c_i
  std::size_t facet_count() const { return normals.size(); }
};

/// JSON input {"rank": n, "facets": [{"u": [ints], "c": rational}, ...]}.
DelzantPolytope polytope_from_json(const std::string& text);

/// All vertices, sorted; throws mode_error when the polytope is unbounded,
/// empty, or not simple.
std::vector<std::vector<Rat>> vertices(const DelzantPolytope& dp);

struct DelzantCheck {
  bool delzant = false;
  std::optional<std::vector<Rat>> failing_vertex;  // normals not a Z-basis here
  std::string reason;
};
DelzantCheck is_delzant(const DelzantPolytope& dp);

struct KernelLattice {
  std::vector<std::vector<Int>> basis;  // Z-basis of ker(Z^d -> Z^n, e_i -> u_i)
  bool surjective = false;              // Smith diagonal all ones
};
KernelLattice kernel_lattice(const DelzantPolytope& dp);

/// Feasibility of { <xi,u_i> = c_i for i in I, <xi,u_i> >= c_i (or > when
/// strict) otherwise } by exact Fourier-Motzkin elimination.
bool face_feasible(const DelzantPolytope& dp, const std::vector<unsigned>& I,
                   bool strict);

/// Index sets I (0-based, sorted) with nonempty relatively open face F_I.
std::vector<std::vector<unsigned>> faces(const DelzantPolytope& dp);
std::size_t leaf_count_toric(const DelzantPolytope& dp);

/// mu(z) = sum (|z_i|^2/2 + c_i) e^i, taking the |z_i|^2 values as input.
std::vector<Rat> moment_map(const DelzantPolytope& dp,
                            const std::vector<Rat>& abs_sq);
/// Pairing of mu with each kernel-lattice basis vector.
std::vector<Rat> moment_map_N(const DelzantPolytope& dp,
                              const std::vector<Rat>& abs_sq);

/// Pointwise Poisson-Dirac check for the complexified subtorus orbit through
/// z in Sigma_Delta, for the bivector induced from a positive pi_A by the
/// exponential action on C^d. Chart coordinates are (x1, y1, ..., xd, yd).
bool git_coregular_sample(const DelzantPolytope& dp, const Mat<Rat>& pi_A,
                          const Point& z);

/// Is factorwise complex conjugation an anti-Poisson automorphism of pi?
bool totally_real(const Multivector& pi);

struct AssociatedLeafSpec {
  std::size_t base_count = 0;
  std::size_t fiber_count = 0;
  std::string hypothesis_tag;  // "principal-fibers-zero" | "isotropic-orbits"
};
std::size_t associated_leaf_count(const AssociatedLeafSpec& spec);

}  // namespace pk
