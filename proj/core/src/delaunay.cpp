#include <meshcert/mesh.hpp>
#include <meshcert/predicates.hpp>

#include <algorithm>
#include <cstring>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace meshcert {

namespace {

constexpr int kInf = -1;

struct Cell {
  SimplexVerts verts;      // d+1 ids; kInf occurs at most once (kept last)
  std::vector<int> neigh;  // neighbor across the facet opposite verts[i]
  bool alive = true;

  bool infinite() const { return !verts.empty() && verts.back() == kInf; }
};

// Incremental insertion into the triangulation of the current hull plus one
// infinite cell per hull facet. The conflict rule: a finite cell conflicts
// with q when q is strictly inside its circumsphere; an infinite cell
// conflicts when q is strictly beyond its hull facet, or lies on the facet
// hyperplane and the adjacent finite cell conflicts. Points exactly on a
// circumsphere never conflict, so cospherical ties resolve by insertion
// order.
class Triangulator {
 public:
  Triangulator(const std::vector<Vec>& points, int dim)
      : pts_(points), d_(dim) {}

  void build() {
    check_duplicates();
    std::vector<int> seed = initial_simplex_vertices();
    make_first_cells(seed);
    std::vector<char> used(pts_.size(), 0);
    for (int id : seed) used[static_cast<size_t>(id)] = 1;
    for (size_t i = 0; i < pts_.size(); ++i)
      if (!used[i]) insert(static_cast<int>(i));
  }

  Mesh result() const {
    Mesh mesh;
    mesh.dim = d_;
    mesh.points = pts_;
    for (const Cell& c : cells_)
      if (c.alive && !c.infinite()) mesh.simplices.push_back(c.verts);
    mesh.canonicalize();
    return mesh;
  }

 private:
  const std::vector<Vec>& pts_;
  int d_;
  std::vector<Cell> cells_;
  std::vector<int> conflict_stamp_;  // insertion counter when cached
  std::vector<char> conflict_value_;
  int stamp_ = 0;
  int hint_ = 0;

  void check_duplicates() {
    std::unordered_map<std::string, int> seen;
    seen.reserve(pts_.size() * 2);
    for (size_t i = 0; i < pts_.size(); ++i) {
      std::string key(reinterpret_cast<const char*>(pts_[i].data()),
                      sizeof(double) * static_cast<size_t>(d_));
      auto [it, fresh] = seen.emplace(std::move(key), static_cast<int>(i));
      if (!fresh)
        throw std::invalid_argument("delaunay: duplicate points at indices " +
                                    std::to_string(it->second) + " and " +
                                    std::to_string(i));
    }
  }

  std::vector<int> initial_simplex_vertices() {
    std::vector<int> chosen{0};
    std::vector<Vec> sel{pts_[0]};
    for (size_t i = 1; i < pts_.size() && chosen.size() < static_cast<size_t>(d_) + 1; ++i) {
      sel.push_back(pts_[i]);
      if (pred::affine_rank(sel) == static_cast<int>(chosen.size())) {
        chosen.push_back(static_cast<int>(i));
      } else {
        sel.pop_back();
      }
    }
    if (chosen.size() != static_cast<size_t>(d_) + 1)
      throw std::invalid_argument(
          "delaunay: all points lie on a common hyperplane");
    return chosen;
  }

  std::vector<Vec> cell_points(const Cell& c) const {
    std::vector<Vec> out;
    out.reserve(c.verts.size());
    for (int v : c.verts) out.push_back(pts_[static_cast<size_t>(v)]);
    return out;
  }

  int new_cell(SimplexVerts verts) {
    Cell c;
    c.verts = std::move(verts);
    c.neigh.assign(static_cast<size_t>(d_) + 1, -1);
    cells_.push_back(std::move(c));
    conflict_stamp_.push_back(0);
    conflict_value_.push_back(0);
    return static_cast<int>(cells_.size()) - 1;
  }

  void make_first_cells(const std::vector<int>& seed) {
    SimplexVerts verts(seed.begin(), seed.end());
    std::vector<Vec> sp;
    for (int v : verts) sp.push_back(pts_[static_cast<size_t>(v)]);
    if (pred::orientation(sp) < 0) std::swap(verts[0], verts[1]);
    const int fin = new_cell(verts);

    // One infinite cell per facet of the first simplex.
    std::map<std::vector<int>, std::pair<int, int>> half;
    for (int k = 0; k <= d_; ++k) {
      SimplexVerts iv;
      for (int i = 0; i <= d_; ++i)
        if (i != k) iv.push_back(cells_[static_cast<size_t>(fin)].verts[static_cast<size_t>(i)]);
      iv.push_back(kInf);
      const int inf = new_cell(iv);
      cells_[static_cast<size_t>(fin)].neigh[static_cast<size_t>(k)] = inf;
      cells_[static_cast<size_t>(inf)].neigh[static_cast<size_t>(d_)] = fin;
      // Lateral facets of the infinite cell (they contain kInf).
      wire_pending(half, inf);
    }
    hint_ = fin;
  }

  // Register all not-yet-wired facets of a cell in `half`; when a facet
  // appears the second time, connect the two cells.
  void wire_pending(std::map<std::vector<int>, std::pair<int, int>>& half,
                    int ci) {
    const Cell& c = cells_[static_cast<size_t>(ci)];
    for (int k = 0; k <= d_; ++k) {
      if (c.neigh[static_cast<size_t>(k)] >= 0) continue;
      std::vector<int> facet;
      for (int i = 0; i <= d_; ++i)
        if (i != k) facet.push_back(c.verts[static_cast<size_t>(i)]);
      std::sort(facet.begin(), facet.end());
      auto it = half.find(facet);
      if (it == half.end()) {
        half.emplace(std::move(facet), std::make_pair(ci, k));
      } else {
        const auto [cj, kj] = it->second;
        cells_[static_cast<size_t>(ci)].neigh[static_cast<size_t>(k)] = cj;
        cells_[static_cast<size_t>(cj)].neigh[static_cast<size_t>(kj)] = ci;
        half.erase(it);
      }
    }
  }

  bool in_conflict(int ci, const Vec& q) {
    if (conflict_stamp_[static_cast<size_t>(ci)] == stamp_)
      return conflict_value_[static_cast<size_t>(ci)] != 0;
    const Cell& c = cells_[static_cast<size_t>(ci)];
    bool value = false;
    if (!c.infinite()) {
      value = pred::insphere(cell_points(c), q) > 0;
    } else {
      // Finite facet of the infinite cell, then the cell inside it.
      std::vector<Vec> facet;
      for (int i = 0; i < d_; ++i)
        facet.push_back(pts_[static_cast<size_t>(c.verts[static_cast<size_t>(i)])]);
      const int inner = c.neigh[static_cast<size_t>(d_)];
      const Cell& fin = cells_[static_cast<size_t>(inner)];
      int apex = -1;
      for (int v : fin.verts)
        if (std::find(c.verts.begin(), c.verts.end() - 1, v) == c.verts.end() - 1)
          apex = v;
      std::vector<Vec> with_q = facet;
      with_q.push_back(q);
      std::vector<Vec> with_apex = facet;
      with_apex.push_back(pts_[static_cast<size_t>(apex)]);
      const int oq = pred::orientation(with_q);
      const int oa = pred::orientation(with_apex);
      if (oq == 0)
        value = in_conflict(inner, q);
      else
        value = (oq != oa);
    }
    conflict_stamp_[static_cast<size_t>(ci)] = stamp_;
    conflict_value_[static_cast<size_t>(ci)] = value ? 1 : 0;
    return value;
  }

  // Visibility walk toward q through finite cells; exhaustive fallback.
  int find_conflict_seed(const Vec& q, std::mt19937_64& rng) {
    int current = hint_;
    if (!cells_[static_cast<size_t>(current)].alive ||
        cells_[static_cast<size_t>(current)].infinite())
      current = -1;
    int steps_left = 200 + static_cast<int>(cells_.size() / 4);
    while (current >= 0 && steps_left-- > 0) {
      const Cell& c = cells_[static_cast<size_t>(current)];
      std::vector<int> order(static_cast<size_t>(d_) + 1);
      for (int i = 0; i <= d_; ++i) order[static_cast<size_t>(i)] = i;
      std::shuffle(order.begin(), order.end(), rng);
      int next = -2;
      for (int k : order) {
        std::vector<Vec> facet;
        int apex = c.verts[static_cast<size_t>(k)];
        for (int i = 0; i <= d_; ++i)
          if (i != k)
            facet.push_back(pts_[static_cast<size_t>(c.verts[static_cast<size_t>(i)])]);
        std::vector<Vec> with_q = facet;
        with_q.push_back(q);
        const int oq = pred::orientation(with_q);
        if (oq == 0) continue;
        std::vector<Vec> with_apex = facet;
        with_apex.push_back(pts_[static_cast<size_t>(apex)]);
        if (oq != pred::orientation(with_apex)) {
          next = c.neigh[static_cast<size_t>(k)];
          break;
        }
      }
      if (next == -2) return current;  // q inside this cell
      if (cells_[static_cast<size_t>(next)].infinite()) {
        if (in_conflict(next, q)) return next;
        break;  // on-hull degeneracy: fall back to the scan
      }
      current = next;
    }
    for (size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].alive && in_conflict(static_cast<int>(i), q))
        return static_cast<int>(i);
    throw std::logic_error("delaunay: no conflicting cell found");
  }

  void insert(int pi) {
    const Vec& q = pts_[static_cast<size_t>(pi)];
    ++stamp_;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(pi));
    const int seed = find_conflict_seed(q, rng);

    // Flood the conflict region.
    std::vector<int> region{seed};
    std::vector<int> queue{seed};
    std::vector<char> in_region(cells_.size(), 0);
    in_region[static_cast<size_t>(seed)] = 1;
    std::vector<std::pair<int, int>> boundary;  // (conflict cell, facet idx)
    while (!queue.empty()) {
      const int ci = queue.back();
      queue.pop_back();
      const Cell& c = cells_[static_cast<size_t>(ci)];
      for (int k = 0; k <= d_; ++k) {
        const int nb = c.neigh[static_cast<size_t>(k)];
        if (in_region[static_cast<size_t>(nb)]) continue;
        if (in_conflict(nb, q)) {
          in_region[static_cast<size_t>(nb)] = 1;
          region.push_back(nb);
          queue.push_back(nb);
        } else {
          boundary.emplace_back(ci, k);
        }
      }
    }

    // Retriangulate the cavity: one new cell per boundary facet.
    std::map<std::vector<int>, std::pair<int, int>> half;
    int first_new = -1;
    for (const auto& [ci, k] : boundary) {
      const Cell dead = cells_[static_cast<size_t>(ci)];  // copy: vector may grow
      SimplexVerts verts;
      for (int i = 0; i <= d_; ++i)
        if (i != k) verts.push_back(dead.verts[static_cast<size_t>(i)]);
      const bool infinite = !verts.empty() && verts.back() == kInf;
      if (infinite)
        verts.insert(verts.end() - 1, pi);
      else
        verts.push_back(pi);

      if (!infinite) {
        std::vector<Vec> sp;
        for (int v : verts) sp.push_back(pts_[static_cast<size_t>(v)]);
        if (pred::orientation(sp) < 0) std::swap(verts[0], verts[1]);
      }
      const int fresh = new_cell(std::move(verts));
      in_region.push_back(0);
      if (first_new < 0 && !cells_[static_cast<size_t>(fresh)].infinite())
        first_new = fresh;

      // Facet shared with the outside survivor.
      const int outside = dead.neigh[static_cast<size_t>(k)];
      std::vector<int> shared;
      for (int i = 0; i <= d_; ++i)
        if (i != k) shared.push_back(dead.verts[static_cast<size_t>(i)]);
      std::sort(shared.begin(), shared.end());
      int fresh_k = -1;
      {
        const Cell& fc = cells_[static_cast<size_t>(fresh)];
        for (int i = 0; i <= d_; ++i)
          if (fc.verts[static_cast<size_t>(i)] == pi) fresh_k = i;
      }
      cells_[static_cast<size_t>(fresh)].neigh[static_cast<size_t>(fresh_k)] = outside;
      Cell& oc = cells_[static_cast<size_t>(outside)];
      for (int i = 0; i <= d_; ++i) {
        std::vector<int> of;
        for (int j = 0; j <= d_; ++j)
          if (j != i) of.push_back(oc.verts[static_cast<size_t>(j)]);
        std::sort(of.begin(), of.end());
        if (of == shared) {
          oc.neigh[static_cast<size_t>(i)] = fresh;
          break;
        }
      }
      wire_pending(half, fresh);
    }
    if (!half.empty())
      throw std::logic_error("delaunay: cavity boundary failed to close");

    for (int ci : region) cells_[static_cast<size_t>(ci)].alive = false;
    if (first_new >= 0) hint_ = first_new;
  }
};

}  // namespace

Mesh delaunay(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("delaunay: empty point set");
  const int d = static_cast<int>(points.front().size());
  if (d < 1) throw std::invalid_argument("delaunay: dimension must be >= 1");
  for (const Vec& p : points) {
    if (p.size() != d)
      throw std::invalid_argument("delaunay: dimension mismatch among points");
    if (!p.allFinite())
      throw std::invalid_argument("delaunay: non-finite coordinate");
  }
  if (static_cast<int>(points.size()) < d + 1)
    throw std::invalid_argument("delaunay: need at least d+1 points");

  Triangulator tri(points, d);
  tri.build();
  return tri.result();
}

}  // namespace meshcert
