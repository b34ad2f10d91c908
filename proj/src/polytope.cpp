#include "diskpot/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "diskpot/errors.hpp"
#include "diskpot/linalg.hpp"

namespace diskpot {

namespace {

long long gcd_ll(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rat dot(const std::vector<long long>& normal, const std::vector<Rat>& u) {
  Rat acc(0);
  for (std::size_t i = 0; i < normal.size(); ++i) {
    acc += Rat(normal[i]) * u[i];
  }
  return acc;
}

// All size-k index subsets of {0, ..., n-1}, visited in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t j = k;
    bool advanced = false;
    while (j-- > 0) {
      if (idx[j] != j + n - k) {
        ++idx[j];
        for (std::size_t l = j + 1; l < k; ++l) idx[l] = idx[l - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) return;
  }
}

}  // namespace

Polytope::Polytope(int dim, std::vector<Facet> facets)
    : dim_(dim), facets_(std::move(facets)) {
  if (dim_ < 1) {
    fail("bad_facet", "polytope dimension must be positive");
  }
  if (facets_.empty()) {
    fail("bad_facet", "a polytope needs at least one facet");
  }
  std::set<std::string> labels;
  for (const Facet& f : facets_) {
    if (static_cast<int>(f.normal.size()) != dim_) {
      fail("bad_facet", "facet normal has wrong dimension");
    }
    long long g = 0;
    for (long long c : f.normal) g = gcd_ll(g, c);
    if (g == 0) {
      fail("bad_facet", "facet normal is zero");
    }
    if (g != 1) {
      fail("bad_facet", "facet normal is not primitive: gcd = " +
                            std::to_string(g));
    }
    if (f.label.empty() || !labels.insert(f.label).second) {
      fail("bad_facet", "facet labels must be nonempty and distinct");
    }
  }
}

int Polytope::facet_index(const std::string& label) const {
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (facets_[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

std::vector<Rat> Polytope::facet_distances(
    const std::vector<Rat>& point) const {
  if (static_cast<int>(point.size()) != dim_) {
    fail("invalid_problem", "point has wrong dimension");
  }
  std::vector<Rat> out;
  out.reserve(facets_.size());
  for (const Facet& f : facets_) {
    out.push_back(dot(f.normal, point) - f.offset);
  }
  return out;
}

bool Polytope::contains(const std::vector<Rat>& point) const {
  for (const Rat& d : facet_distances(point)) {
    if (d < 0) return false;
  }
  return true;
}

std::vector<Rat> FiberLocus::at(const Rat& s) const {
  std::vector<Rat> u(base);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += s * direction[i];
  return u;
}

FiberLocus monotone_fiber_locus(const Polytope& p,
                                const std::vector<std::string>& labels) {
  if (labels.size() < 2) {
    fail("invalid_problem",
         "equal-distance locus needs at least two facets");
  }
  const std::size_t dim = static_cast<std::size_t>(p.dim());
  // Unknowns (u_1, ..., u_dim, t); one row <nu_i, u> - t = c_i per facet.
  RatMatrix m;
  for (const std::string& label : labels) {
    const int idx = p.facet_index(label);
    if (idx < 0) {
      fail("invalid_problem", "unknown facet label '" + label + "'");
    }
    const Facet& f = p.facets()[static_cast<std::size_t>(idx)];
    std::vector<Rat> row(dim + 2, Rat(0));
    for (std::size_t i = 0; i < dim; ++i) row[i] = Rat(f.normal[i]);
    row[dim] = -1;
    row[dim + 1] = f.offset;
    m.push_back(std::move(row));
  }
  const std::vector<std::size_t> pivots = rref(m, dim + 1);
  for (const auto& row : m) {
    bool zero_lhs = true;
    for (std::size_t c = 0; c <= dim; ++c) {
      if (row[c] != 0) zero_lhs = false;
    }
    if (zero_lhs && row[dim + 1] != 0) {
      fail("no_solution", "the chosen facets admit no equal-distance point");
    }
  }
  const std::size_t freedom = dim + 1 - pivots.size();
  if (freedom > 1) {
    fail("underdetermined_locus",
         "equal-distance family has " + std::to_string(freedom) +
             " parameters; expected a line or a point");
  }

  // Particular solution with free variables set to zero.
  std::vector<Rat> particular(dim + 1, Rat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    particular[pivots[r]] = m[r][dim + 1];
  }
  FiberLocus locus;
  locus.base.assign(particular.begin(), particular.begin() + dim);
  locus.t_base = particular[dim];
  locus.direction.assign(dim, Rat(0));
  locus.t_direction = 0;
  locus.is_point = (freedom == 0);
  if (locus.is_point) return locus;

  RatMatrix lhs;
  for (const auto& row : m) {
    lhs.emplace_back(row.begin(), row.begin() + dim + 1);
  }
  const auto basis = nullspace(std::move(lhs), dim + 1);
  std::vector<Rat> dir = basis.front();
  if (dir[dim] != 0) {
    // Reparametrize so the family parameter is the common distance t.
    const Rat dt = dir[dim];
    for (Rat& v : dir) v /= dt;
    for (std::size_t i = 0; i < dim; ++i) {
      locus.base[i] -= locus.t_base * dir[i];
    }
    locus.t_base = 0;
    locus.t_direction = 1;
  }
  locus.direction.assign(dir.begin(), dir.begin() + dim);
  if (dir[dim] == 0) locus.t_direction = 0;
  return locus;
}

namespace {

bool is_recession_direction(const Polytope& p, const std::vector<Rat>& d) {
  bool nonneg = true;
  bool nonpos = true;
  bool nonzero = false;
  for (const Rat& v : d) {
    if (v != 0) nonzero = true;
  }
  if (!nonzero) return false;
  for (const Facet& f : p.facets()) {
    Rat acc(0);
    for (std::size_t i = 0; i < d.size(); ++i) acc += Rat(f.normal[i]) * d[i];
    if (acc < 0) nonneg = false;
    if (acc > 0) nonpos = false;
  }
  return nonneg || nonpos;
}

}  // namespace

std::vector<std::vector<Rat>> vertices(const Polytope& p) {
  const std::size_t dim = static_cast<std::size_t>(p.dim());
  const std::size_t nf = p.facets().size();
  if (dim > 4 || nf > 32) {
    fail("invalid_problem",
         "vertex enumeration is limited to dimension <= 4 and <= 32 facets");
  }

  // Recession check.  A nonzero vector with <nu_i, d> = 0 for all i spans a
  // line inside the recession cone; otherwise any extreme recession ray is
  // cut out by dim-1 independent facet normals.
  {
    RatMatrix all;
    for (const Facet& f : p.facets()) {
      std::vector<Rat> row;
      for (long long c : f.normal) row.emplace_back(c);
      all.push_back(std::move(row));
    }
    for (const auto& d : nullspace(all, dim)) {
      if (is_recession_direction(p, d)) {
        fail("unbounded_polytope", "polytope has a recession line");
      }
    }
  }
  bool found_ray = false;
  for_each_subset(nf, dim - 1, [&](const std::vector<std::size_t>& idx) {
    if (found_ray) return;
    RatMatrix m;
    for (std::size_t i : idx) {
      std::vector<Rat> row;
      for (long long c : p.facets()[i].normal) row.emplace_back(c);
      m.push_back(std::move(row));
    }
    const auto basis = nullspace(std::move(m), dim);
    if (basis.size() != 1) return;
    if (is_recession_direction(p, basis.front())) found_ray = true;
  });
  if (found_ray) {
    fail("unbounded_polytope", "polytope has a recession ray");
  }

  std::set<std::vector<Rat>> seen;
  for_each_subset(nf, dim, [&](const std::vector<std::size_t>& idx) {
    RatMatrix a;
    std::vector<Rat> b;
    for (std::size_t i : idx) {
      std::vector<Rat> row;
      for (long long c : p.facets()[i].normal) row.emplace_back(c);
      a.push_back(std::move(row));
      b.push_back(p.facets()[i].offset);
    }
    const auto solution = solve_square(std::move(a), std::move(b));
    if (!solution) return;
    if (p.contains(*solution)) seen.insert(*solution);
  });
  return {seen.begin(), seen.end()};
}

std::string PiValue::str() const {
  if (coefficient == 0) return "0";
  if (coefficient == 1) return "π";
  if (coefficient == -1) return "-π";
  return rat_to_string(coefficient) + "π";
}

HoferReport hofer_norms(const Polytope& p, const LinearHamiltonian& h,
                        const std::optional<std::vector<Rat>>& fiber) {
  if (static_cast<int>(h.gradient.size()) != p.dim()) {
    fail("invalid_problem", "Hamiltonian gradient has wrong dimension");
  }
  const auto verts = vertices(p);
  if (verts.empty()) {
    fail("invalid_problem", "polytope has no vertices");
  }
  auto value = [&](const std::vector<Rat>& u) {
    Rat acc(0);
    for (std::size_t i = 0; i < u.size(); ++i) acc += h.gradient[i] * u[i];
    return acc;
  };
  Rat lo = value(verts.front());
  Rat hi = lo;
  for (const auto& v : verts) {
    const Rat val = value(v);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  HoferReport report;
  report.norm_ambient = PiValue{(hi - lo) * h.pi_scale};
  if (fiber) {
    if (!p.contains(*fiber)) {
      fail("invalid_problem", "fiber point lies outside the polytope");
    }
    // H depends on the moment coordinates only, so its oscillation over a
    // single fiber is zero by construction; computed as max - min over the
    // one-point image all the same.
    const Rat at_fiber = value(*fiber);
    report.norm_fiber = PiValue{(at_fiber - at_fiber) * h.pi_scale};
  }
  return report;
}

}  // namespace diskpot
