#include <cmath>

#include "tnrg/diagnostics.hpp"
#include "tnrg/masks.hpp"

namespace tnrg {

ConditionReport condition_report(const Tensor& a, double eps_ref, double k) {
  ConditionReport rep;
  rep.eps_ref = eps_ref;
  rep.k = k;
  const Decomposition dec = decompose(a);
  rep.delta = delta(a);
  rep.single_leg_norm = pattern_norm(a, masks::single_leg());
  rep.one_circle_norm = hs_norm(dec.one_circle);
  rep.two_circle_norm = hs_norm(dec.two_circle);
  const double e2 = eps_ref * eps_ref;
  rep.a1 = rep.delta <= k * eps_ref;
  rep.a2 = rep.a1 && rep.single_leg_norm <= k * e2;
  rep.a3 = rep.a2 && rep.one_circle_norm <= k * eps_ref && rep.two_circle_norm <= k * e2;
  return rep;
}

}  // namespace tnrg
