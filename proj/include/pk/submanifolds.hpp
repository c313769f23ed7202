#pragma once

#include "pk/dirac.hpp"

namespace pk {

/// Embedded submanifold given by a parametrization i : X -> M.
struct SubmanifoldSpec {
  SmoothMap embedding;
};

enum class Verdict { Holds, Fails, NotDetermined };

/// Tangent and conormal frames at a point of X. TX columns are the Jacobian
/// columns (so TX-basis coordinates agree with X-chart coordinates); NstarX
/// is a canonical basis of the annihilator of TX.
struct FramePair {
  Mat<Rat> TX;
  Mat<Rat> NstarX;
};

FramePair frames(const SubmanifoldSpec& spec, const Point& at);

/// Induced bivector at a point, in the given TX-basis coordinates (k x k
/// antisymmetric matrix), when pi^sharp(N*X) meets TX trivially; nullopt
/// otherwise. pi is the ambient component matrix at the point.
std::optional<Mat<Rat>> pointwise_induce(const Mat<Rat>& pi, const Mat<Rat>& TX,
                                         const Mat<Rat>& NstarX);

struct HierarchyReport {
  std::vector<Point> samples;
  std::vector<bool> pointwise_pd;
  std::vector<int> q_rank;
  Verdict coregular = Verdict::NotDetermined;
  std::optional<Point> coregular_witness;
  std::vector<bool> coisotropic, poisson_submanifold, poisson_transversal;
  bool coisotropic_all = false, poisson_submanifold_all = false,
       poisson_transversal_all = false;
  std::optional<Multivector> induced;  // on the X chart, rational coefficients
  std::vector<Point> pole_witnesses;   // sample points where induced has a pole
  /// "coregular" when the coregular certificate (hence split) holds.
  std::string split_certificate = "none";
};

HierarchyReport classify(const SubmanifoldSpec& spec, const Multivector& pi,
                         const std::vector<Point>& grid);

/// Symbolic induced bivector on the X chart via the extension recipe over the
/// rational function field; nullopt when the defining linear system is
/// inconsistent (Poisson-Dirac fails generically).
std::optional<Multivector> induced_bivector_symbolic(const SubmanifoldSpec& spec,
                                                     const Multivector& pi);

}  // namespace pk
