#include "harnack/geometry.hpp"

#include "detail/spectral.hpp"
#include "detail/sphere_ops.hpp"
#include "harnack/field.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace harnack {

namespace {

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Point normalized(const Point& p) {
  const double r = std::sqrt(dot(p, p));
  return {p[0] / r, p[1] / r, p[2] / r};
}

SphereMesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  SphereMesh m;
  const Point raw[12] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& p : raw)
    m.positions.push_back(normalized(p));
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

void subdivide(SphereMesh& m) {
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end())
      return it->second;
    const Point& pa = m.positions[a];
    const Point& pb = m.positions[b];
    m.positions.push_back(normalized({pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2]}));
    const int idx = static_cast<int>(m.positions.size()) - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> refined;
  refined.reserve(m.triangles.size() * 4);
  for (const auto& t : m.triangles) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    refined.push_back({t[0], ab, ca});
    refined.push_back({t[1], bc, ab});
    refined.push_back({t[2], ca, bc});
    refined.push_back({ab, bc, ca});
  }
  m.triangles = std::move(refined);
}

} // namespace

const SphereMesh& Manifold::mesh() const {
  if (!mesh_)
    throw std::logic_error("mesh() requested on a flat torus");
  return *mesh_;
}

Point Manifold::point(std::size_t node) const {
  if (is_sphere())
    return mesh_->positions[node];
  const auto idx = grid_index(node);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dimension_; ++a)
    p[a] = idx[a] * lengths_[a] / resolutions_[a];
  return p;
}

std::array<int, 3> Manifold::grid_index(std::size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dimension_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(node % static_cast<std::size_t>(resolutions_[a]));
    node /= static_cast<std::size_t>(resolutions_[a]);
  }
  return idx;
}

const detail::TorusSpectral& Manifold::spectral() const {
  if (!spectral_)
    throw std::logic_error("spectral() requested on a sphere mesh");
  return *spectral_;
}

const detail::SphereOperators& Manifold::sphere_operators() const {
  if (!sphere_ops_)
    throw std::logic_error("sphere_operators() requested on a flat torus");
  return *sphere_ops_;
}

ManifoldPtr build_flat_torus(int dimension, std::vector<double> lengths,
                             std::vector<int> resolutions) {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("torus dimension must be 1, 2 or 3, got " +
                                std::to_string(dimension));
  if (lengths.size() != static_cast<std::size_t>(dimension) ||
      resolutions.size() != static_cast<std::size_t>(dimension))
    throw std::invalid_argument("torus needs one length and one resolution per axis");
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("torus side lengths must be positive");
  for (int n : resolutions)
    if (n < 8 || n % 2 != 0)
      throw std::invalid_argument("torus resolutions must be even and >= 8, got " +
                                  std::to_string(n));

  auto m = std::make_shared<Manifold>();
  m->kind_ = ManifoldKind::flat_torus;
  m->dimension_ = dimension;
  m->lengths_ = std::move(lengths);
  m->resolutions_ = std::move(resolutions);

  std::size_t count = 1;
  double volume = 1.0;
  double cell = 1.0;
  for (int a = 0; a < dimension; ++a) {
    count *= static_cast<std::size_t>(m->resolutions_[a]);
    volume *= m->lengths_[a];
    cell *= m->lengths_[a] / m->resolutions_[a];
  }
  m->volume_ = volume;
  m->weights_.assign(count, cell);
  m->spectral_ = std::make_shared<detail::TorusSpectral>(m->resolutions_, m->lengths_);
  return m;
}

ManifoldPtr build_unit_sphere_mesh(int subdivision) {
  if (subdivision < 2)
    throw std::invalid_argument("icosphere subdivision must be >= 2, got " +
                                std::to_string(subdivision));
  SphereMesh mesh = icosahedron();
  for (int s = 0; s < subdivision; ++s)
    subdivide(mesh);

  mesh.triangle_areas.resize(mesh.triangles.size());
  mesh.vertex_areas.assign(mesh.positions.size(), 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point& p0 = mesh.positions[tri[0]];
    const Point n = cross(sub(mesh.positions[tri[1]], p0), sub(mesh.positions[tri[2]], p0));
    const double area = 0.5 * std::sqrt(dot(n, n));
    mesh.triangle_areas[t] = area;
    for (int v : tri)
      mesh.vertex_areas[v] += area / 3.0;
  }

  auto m = std::make_shared<Manifold>();
  m->kind_ = ManifoldKind::unit_sphere_mesh;
  m->dimension_ = 2;
  m->subdivision_ = subdivision;
  m->weights_ = mesh.vertex_areas;
  double total = 0.0;
  for (double a : m->weights_)
    total += a;
  m->volume_ = total;
  auto shared_mesh = std::make_shared<const SphereMesh>(std::move(mesh));
  m->sphere_ops_ = std::make_shared<detail::SphereOperators>(shared_mesh);
  m->mesh_ = std::move(shared_mesh);
  return m;
}

double integrate(const ScalarField& f) {
  const auto w = f.manifold().weights();
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += w[i] * v[i];
  return s;
}

namespace detail {

SphereOperators::SphereOperators(std::shared_ptr<const SphereMesh> mesh) : mesh_(std::move(mesh)) {
  const auto& m = *mesh_;
  const auto n = static_cast<Eigen::Index>(m.positions.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(m.triangles.size() * 12);
  basis_gradients_.resize(m.triangles.size());

  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& tri = m.triangles[t];
    const Point normal = cross(sub(m.positions[tri[1]], m.positions[tri[0]]),
                               sub(m.positions[tri[2]], m.positions[tri[0]]));
    const double twice_area = std::sqrt(dot(normal, normal));
    const Point unit_normal{normal[0] / twice_area, normal[1] / twice_area,
                            normal[2] / twice_area};
    for (int k = 0; k < 3; ++k) {
      const int i = tri[(k + 1) % 3];
      const int j = tri[(k + 2) % 3];
      // Angle at vertex k is opposite edge (i, j).
      const Point e1 = sub(m.positions[i], m.positions[tri[k]]);
      const Point e2 = sub(m.positions[j], m.positions[tri[k]]);
      const Point c = cross(e1, e2);
      const double cot = dot(e1, e2) / std::sqrt(dot(c, c));
      const double w = 0.5 * cot;
      entries.emplace_back(i, j, w);
      entries.emplace_back(j, i, w);
      entries.emplace_back(i, i, -w);
      entries.emplace_back(j, j, -w);

      // grad phi_k = (n x e_k) / (2 A) with e_k = p_j - p_i opposite vertex k.
      const Point g = cross(unit_normal, sub(m.positions[j], m.positions[i]));
      basis_gradients_[t][k] = {g[0] / twice_area, g[1] / twice_area, g[2] / twice_area};
    }
  }
  stiffness_.resize(n, n);
  stiffness_.setFromTriplets(entries.begin(), entries.end());
  stiffness_.makeCompressed();
}

Point SphereOperators::triangle_gradient(std::size_t t, std::span<const double> f) const {
  const auto& tri = mesh_->triangles[t];
  Point g{0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k)
    for (int c = 0; c < 3; ++c)
      g[c] += f[tri[k]] * basis_gradients_[t][k][c];
  return g;
}

std::vector<double> SphereOperators::gradient_inner(std::span<const double> f,
                                                    std::span<const double> g) const {
  const auto& m = *mesh_;
  std::vector<double> out(m.positions.size(), 0.0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const double product = dot(triangle_gradient(t, f), triangle_gradient(t, g));
    for (int v : m.triangles[t])
      out[v] += m.triangle_areas[t] / 3.0 * product;
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] /= m.vertex_areas[i];
  return out;
}

std::vector<double> SphereOperators::apply_laplacian(std::span<const double> f) const {
  Eigen::Map<const Eigen::VectorXd> x(f.data(), static_cast<Eigen::Index>(f.size()));
  Eigen::VectorXd y = stiffness_ * x;
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = y[static_cast<Eigen::Index>(i)] / mesh_->vertex_areas[i];
  return out;
}

} // namespace detail

} // namespace harnack
