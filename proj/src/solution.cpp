#include "tdg/solution.hpp"

namespace tdg {

DofMap build_dof_map(const Mesh& mesh) {
  DofMap map;
  map.offset.assign(mesh.id_count(), -1);
  map.count.assign(mesh.id_count(), 0);
  for (ElementId id : mesh.leaves()) {
    map.offset[id] = map.size;
    map.count[id] = mesh.plane_wave_count(id);
    const Element& e = mesh.element(id);
    if (!e.explicit_directions.empty())
      map.count[id] = static_cast<Eigen::Index>(e.explicit_directions.size());
    map.size += map.count[id];
  }
  return map;
}

DiscreteSolution::DiscreteSolution(std::shared_ptr<const Mesh> m, Eigen::VectorXcd c)
    : mesh(std::move(m)), bases(build_bases(*mesh)), dofs(build_dof_map(*mesh)),
      coeffs(std::move(c)) {
  if (coeffs.size() != dofs.size)
    throw Error("coefficient vector has " + std::to_string(coeffs.size()) +
                " entries, expected " + std::to_string(dofs.size));
}

Complex DiscreteSolution::value(ElementId id, const Vec3& x) const {
  return bases[id].values_at(x).transpose() * local(id);
}

CVec3 DiscreteSolution::gradient(ElementId id, const Vec3& x) const {
  const BasisEval ev = eval_basis(bases[id], x, 1);
  return ev.gradient.transpose() * local(id);
}

Eigen::Matrix3cd DiscreteSolution::hessian(ElementId id, const Vec3& x) const {
  const BasisEval ev = eval_basis(bases[id], x, 2);
  const auto c = local(id);
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  for (Eigen::Index l = 0; l < c.size(); ++l) h += c[l] * ev.hessian[l];
  return h;
}

}  // namespace tdg
