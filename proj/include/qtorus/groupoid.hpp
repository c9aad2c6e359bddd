#pragma once

// Labeled dotted triangulations, elementary moves (dot rotation, diagonal
// flip, relabeling), the projective functor into tensor operators, loop
// verification, and breadth-first exploration of components.
//
// Slot convention per triangle: slots are counterclockwise with slot 3 the
// side opposite the dot.  A triangle is sane when w(slot1) w(slot2) = w(slot3)
// and all three weights are non-singular.  Edge ids are bookkeeping: object
// equality relabels internal edges by first occurrence.

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "tensorlinalg.hpp"
#include "weights.hpp"

namespace qtorus {

struct TriangleRecord {
  std::array<int, 3> edges{};  // slot 1, 2, 3
};

struct EdgeRecord {
  Weight weight;
  bool boundary = false;
};

struct LDTriangulation {
  std::map<int, TriangleRecord> triangles;
  std::map<int, EdgeRecord> edges;
};

inline std::map<int, std::vector<std::pair<int, int>>> edge_incidences(
    const LDTriangulation& t) {
  std::map<int, std::vector<std::pair<int, int>>> inc;
  for (const auto& [label, tri] : t.triangles)
    for (int s = 0; s < 3; ++s) inc[tri.edges[s]].push_back({label, s + 1});
  return inc;
}

// Structural validity: referenced edges exist, boundary edges have one
// incidence, internal edges exactly two, no unreferenced edges.
inline void validate_combinatorics(const LDTriangulation& t) {
  if (t.triangles.empty())
    fail(errc::invalid_combinatorics, "triangulation has no triangles");
  const auto inc = edge_incidences(t);
  for (const auto& [label, tri] : t.triangles) {
    for (int s = 0; s < 3; ++s)
      if (t.edges.find(tri.edges[s]) == t.edges.end())
        fail(errc::invalid_combinatorics,
             "triangle " + std::to_string(label) + " references missing edge " +
                 std::to_string(tri.edges[s]));
  }
  for (const auto& [id, rec] : t.edges) {
    const auto it = inc.find(id);
    const int count = it == inc.end() ? 0 : static_cast<int>(it->second.size());
    if (count == 0)
      fail(errc::invalid_combinatorics,
           "edge " + std::to_string(id) + " is unreferenced");
    const int want = rec.boundary ? 1 : 2;
    if (count != want)
      fail(errc::invalid_combinatorics,
           "edge " + std::to_string(id) + " has " + std::to_string(count) +
               " incidences, expected " + std::to_string(want));
  }
}

inline const Weight& edge_weight(const LDTriangulation& t, int edge_id) {
  const auto it = t.edges.find(edge_id);
  if (it == t.edges.end())
    fail(errc::invalid_combinatorics, "missing edge " + std::to_string(edge_id));
  return it->second.weight;
}

inline std::vector<std::string> sanity_failures(const LDTriangulation& t,
                                                double tol = 1e-8) {
  std::vector<std::string> out;
  for (const auto& [label, tri] : t.triangles) {
    const Weight& w1 = edge_weight(t, tri.edges[0]);
    const Weight& w2 = edge_weight(t, tri.edges[1]);
    const Weight& w3 = edge_weight(t, tri.edges[2]);
    if (w1.is_singular() || w2.is_singular() || w3.is_singular()) {
      out.push_back("triangle " + std::to_string(label) +
                    " carries a singular weight");
      continue;
    }
    if (!weight_close(weight_mul(w1, w2), w3, tol))
      out.push_back("triangle " + std::to_string(label) +
                    " violates w1 w2 = w3");
  }
  return out;
}

inline bool is_sane(const LDTriangulation& t, double tol = 1e-8) {
  return sanity_failures(t, tol).empty();
}

// ---------------------------------------------------------------------------
// Moves

enum class MoveKind { A, T, Tinv, P };

struct Move {
  MoveKind kind = MoveKind::A;
  std::vector<std::pair<int, int>> flips;  // A: (triangle label, eps)
  int s = 0;                               // T / Tinv
  int t = 0;
  std::map<int, int> gamma;                // P: label permutation
};

inline Move move_A(int t, int eps) { return Move{MoveKind::A, {{t, eps}}, 0, 0, {}}; }
inline Move move_A_multi(std::vector<std::pair<int, int>> flips) {
  return Move{MoveKind::A, std::move(flips), 0, 0, {}};
}
inline Move move_T(int s, int t) { return Move{MoveKind::T, {}, s, t, {}}; }
inline Move move_Tinv(int s, int t) { return Move{MoveKind::Tinv, {}, s, t, {}}; }
inline Move move_P(std::map<int, int> gamma) {
  return Move{MoveKind::P, {}, 0, 0, std::move(gamma)};
}

inline std::string describe_move(const Move& m) {
  switch (m.kind) {
    case MoveKind::A: {
      std::string out = "A(";
      bool first = true;
      for (const auto& [t, e] : m.flips) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(t) + (e > 0 ? ":+1" : ":-1");
      }
      return out + ")";
    }
    case MoveKind::T:
      return "T(" + std::to_string(m.s) + "," + std::to_string(m.t) + ")";
    case MoveKind::Tinv:
      return "Tinv(" + std::to_string(m.s) + "," + std::to_string(m.t) + ")";
    case MoveKind::P: {
      std::string out = "P(";
      bool first = true;
      for (const auto& [a, b] : m.gamma) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(a) + ">" + std::to_string(b);
      }
      return out + ")";
    }
  }
  return "?";
}

inline Move inverse_move(const Move& m) {
  switch (m.kind) {
    case MoveKind::A: {
      Move out = m;
      for (auto& [t, e] : out.flips) e = -e;
      return out;
    }
    case MoveKind::T: return move_Tinv(m.s, m.t);
    case MoveKind::Tinv: return move_T(m.s, m.t);
    case MoveKind::P: {
      std::map<int, int> inv;
      for (const auto& [a, b] : m.gamma) inv[b] = a;
      return move_P(std::move(inv));
    }
  }
  return m;
}

namespace detail {

inline const TriangleRecord& tri_at(const LDTriangulation& t, int label) {
  const auto it = t.triangles.find(label);
  if (it == t.triangles.end())
    fail(errc::unknown_triangle, "no triangle labeled " + std::to_string(label));
  return it->second;
}

inline void dualize_edge(LDTriangulation& t, int edge_id) {
  auto& rec = t.edges.at(edge_id);
  rec.weight = weight_dual(rec.weight);
}

inline bool nearly_self_dual(const Weight& w, double tol) {
  if (std::abs(w.x) < kSingularThreshold) return false;
  return weight_close(w, weight_dual(w), tol);
}

inline std::array<int, 3> rotate_slots(const std::array<int, 3>& e, int eps) {
  if (eps > 0) return {e[1], e[2], e[0]};
  return {e[2], e[0], e[1]};
}

}  // namespace detail

// Raw dot rotation at one triangle: rotate the slots and dualize the two
// affected edge labels globally.  Always succeeds on an existing triangle.
inline LDTriangulation move_a(const LDTriangulation& t, int label, int eps) {
  if (eps != 1 && eps != -1)
    fail(errc::constraint_violation, "dot rotation direction must be +1 or -1");
  LDTriangulation out = t;
  const TriangleRecord rec = detail::tri_at(out, label);
  const int d1 = eps > 0 ? rec.edges[0] : rec.edges[1];
  const int d2 = rec.edges[2];
  detail::dualize_edge(out, d1);
  if (d2 != d1) detail::dualize_edge(out, d2);
  out.triangles[label].edges = detail::rotate_slots(rec.edges, eps);
  return out;
}

// Simultaneous dot rotations with the identified-edge consistency rule: an
// edge asked to dualize by one incidence and keep by another is a conflict,
// rejected by name unless the weight is self-dual within tol.
inline LDTriangulation move_a_multi(const LDTriangulation& t,
                                    const std::vector<std::pair<int, int>>& flips,
                                    double self_dual_tol = 1e-9) {
  if (flips.empty())
    fail(errc::constraint_violation, "empty dot-rotation set");
  std::set<int> moved;
  for (const auto& [label, eps] : flips) {
    if (eps != 1 && eps != -1)
      fail(errc::constraint_violation, "dot rotation direction must be +1 or -1");
    detail::tri_at(t, label);
    if (!moved.insert(label).second)
      fail(errc::constraint_violation,
           "triangle " + std::to_string(label) + " rotated twice in one move");
  }
  std::map<int, std::pair<bool, bool>> demand;  // edge -> (dual, keep)
  for (const auto& [label, tri] : t.triangles) {
    const auto it =
        std::find_if(flips.begin(), flips.end(),
                     [&, l = label](const auto& p) { return p.first == l; });
    if (it == flips.end()) {
      for (int s = 0; s < 3; ++s) demand[tri.edges[s]].second = true;
    } else if (it->second > 0) {
      demand[tri.edges[0]].first = true;
      demand[tri.edges[1]].second = true;
      demand[tri.edges[2]].first = true;
    } else {
      demand[tri.edges[0]].second = true;
      demand[tri.edges[1]].first = true;
      demand[tri.edges[2]].first = true;
    }
  }
  LDTriangulation out = t;
  for (const auto& [edge, d] : demand) {
    if (!d.first) continue;
    if (d.second && !detail::nearly_self_dual(edge_weight(t, edge), self_dual_tol))
      fail(errc::constraint_violation,
           "edge " + std::to_string(edge) +
               " must keep and dualize its label at once");
    detail::dualize_edge(out, edge);
  }
  for (const auto& [label, eps] : flips)
    out.triangles[label].edges =
        detail::rotate_slots(t.triangles.at(label).edges, eps);
  return out;
}

// Diagonal flip: requires the shared edge at slot 3 of s and slot 1 of t,
// and the weight triple (w(s1), w(s2), w(t2)) regular.  The new diagonal
// carries w(s2) w(t2).
inline LDTriangulation move_t(const LDTriangulation& t, int s_label, int t_label) {
  if (s_label == t_label)
    fail(errc::constraint_violation, "diagonal flip needs two distinct triangles");
  const TriangleRecord s_rec = detail::tri_at(t, s_label);
  const TriangleRecord t_rec = detail::tri_at(t, t_label);
  const int diag = s_rec.edges[2];
  if (diag != t_rec.edges[0]) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (s_rec.edges[a] == t_rec.edges[b])
          fail(errc::bad_dot_configuration,
               "shared edge " + std::to_string(s_rec.edges[a]) +
                   " is not at slot 3 of s and slot 1 of t");
    fail(errc::not_adjacent, "triangles share no edge");
  }
  const Weight w1 = edge_weight(t, s_rec.edges[0]);
  const Weight w2 = edge_weight(t, s_rec.edges[1]);
  const Weight w3 = edge_weight(t, t_rec.edges[1]);
  if (!is_regular_seq({w1, w2, w3}))
    fail(errc::regularity_violation, "flip weight triple is not regular");
  LDTriangulation out = t;
  out.triangles[s_label].edges = {s_rec.edges[0], diag, t_rec.edges[2]};
  out.triangles[t_label].edges = {s_rec.edges[1], t_rec.edges[1], diag};
  out.edges.at(diag).weight = weight_mul(w2, w3);
  return out;
}

// Inverse diagonal flip: exact undo of move_t with the same (s, t) arguments.
inline LDTriangulation move_t_inv(const LDTriangulation& t, int s_label,
                                  int t_label) {
  if (s_label == t_label)
    fail(errc::constraint_violation, "diagonal flip needs two distinct triangles");
  const TriangleRecord y_rec = detail::tri_at(t, s_label);
  const TriangleRecord x_rec = detail::tri_at(t, t_label);
  const int diag = y_rec.edges[1];
  if (diag != x_rec.edges[2]) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (y_rec.edges[a] == x_rec.edges[b])
          fail(errc::bad_dot_configuration,
               "shared edge " + std::to_string(y_rec.edges[a]) +
                   " is not at slot 2 of s and slot 3 of t");
    fail(errc::not_adjacent, "triangles share no edge");
  }
  const Weight w1 = edge_weight(t, y_rec.edges[0]);
  const Weight w2 = edge_weight(t, x_rec.edges[0]);
  const Weight w3 = edge_weight(t, x_rec.edges[1]);
  if (!is_regular_seq({w1, w2, w3}))
    fail(errc::regularity_violation, "flip weight triple is not regular");
  LDTriangulation out = t;
  out.triangles[t_label].edges = {diag, x_rec.edges[1], y_rec.edges[2]};
  out.triangles[s_label].edges = {y_rec.edges[0], x_rec.edges[0], diag};
  out.edges.at(diag).weight = weight_mul(w1, w2);
  return out;
}

inline LDTriangulation move_p(const LDTriangulation& t,
                              const std::map<int, int>& gamma) {
  std::set<int> labels, images;
  for (const auto& [label, tri] : t.triangles) labels.insert(label);
  for (const auto& [a, b] : gamma) {
    if (labels.find(a) == labels.end())
      fail(errc::constraint_violation,
           "relabeling references unknown triangle " + std::to_string(a));
    images.insert(b);
  }
  if (gamma.size() != labels.size() || images != labels)
    fail(errc::constraint_violation,
         "relabeling must permute the triangle labels");
  LDTriangulation out = t;
  out.triangles.clear();
  for (const auto& [label, tri] : t.triangles)
    out.triangles[gamma.at(label)] = tri;
  return out;
}

inline LDTriangulation apply_move(const LDTriangulation& t, const Move& m) {
  switch (m.kind) {
    case MoveKind::A: return move_a_multi(t, m.flips);
    case MoveKind::T: return move_t(t, m.s, m.t);
    case MoveKind::Tinv: return move_t_inv(t, m.s, m.t);
    case MoveKind::P: return move_p(t, m.gamma);
  }
  fail(errc::constraint_violation, "unhandled move kind");
}

// ---------------------------------------------------------------------------
// Canonical form and equality up to internal edge renaming

namespace detail {

struct CanonicalKey {
  std::string shape;            // labels, slot tokens, boundary markers
  std::vector<Weight> weights;  // first-occurrence order
};

inline CanonicalKey canonical_key(const LDTriangulation& t) {
  CanonicalKey key;
  std::map<int, int> internal_rank;
  for (const auto& [label, tri] : t.triangles) {
    key.shape += "t" + std::to_string(label) + "[";
    for (int s = 0; s < 3; ++s) {
      const int id = tri.edges[s];
      const EdgeRecord& rec = t.edges.at(id);
      if (rec.boundary) {
        key.shape += "b" + std::to_string(id);
        if (internal_rank.find(-id) == internal_rank.end()) {
          internal_rank[-id] = 1;  // mark first occurrence of this boundary id
          key.weights.push_back(rec.weight);
        }
      } else {
        auto it = internal_rank.find(id);
        if (it == internal_rank.end()) {
          const int rank = static_cast<int>(internal_rank.size());
          it = internal_rank.insert({id, rank}).first;
          key.weights.push_back(rec.weight);
        }
        key.shape += "i" + std::to_string(it->second);
      }
      key.shape += s == 2 ? "]" : ",";
    }
  }
  return key;
}

inline double round12(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // normalize -0
}

}  // namespace detail

// Objects are equal when their shapes agree after renaming internal edges by
// first occurrence and the weights match slot-wise within tol.
inline bool equivalent(const LDTriangulation& a, const LDTriangulation& b,
                       double tol = 1e-8) {
  const auto ka = detail::canonical_key(a);
  const auto kb = detail::canonical_key(b);
  if (ka.shape != kb.shape || ka.weights.size() != kb.weights.size())
    return false;
  for (size_t i = 0; i < ka.weights.size(); ++i)
    if (!weight_close(ka.weights[i], kb.weights[i], tol)) return false;
  return true;
}

// Hash string for breadth-first dedup: canonical shape plus rounded weights.
inline std::string canonical_hash(const LDTriangulation& t) {
  const auto key = detail::canonical_key(t);
  std::string out = key.shape;
  char buf[128];
  for (const Weight& w : key.weights) {
    std::snprintf(buf, sizeof buf, "|%.12f,%.12f,%.12f,%.12f",
                  detail::round12(w.x.real()), detail::round12(w.x.imag()),
                  detail::round12(w.y.real()), detail::round12(w.y.imag()));
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The projective functor

namespace detail {

inline std::vector<int> sorted_labels(const LDTriangulation& t) {
  std::vector<int> labels;
  for (const auto& [label, tri] : t.triangles) labels.push_back(label);
  return labels;  // std::map iterates in increasing order
}

inline int factor_pos(const std::vector<int>& labels, int label) {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label)
    fail(errc::unknown_triangle, "no triangle labeled " + std::to_string(label));
  return static_cast<int>(it - labels.begin()) + 1;
}

}  // namespace detail

// Operator assigned to one move at the current state, acting on the ordered
// tensor product over triangle labels in increasing order.
inline TensorOperator functor_op(const RootContext& ctx, const Move& m,
                                 const LDTriangulation& t) {
  const std::vector<int> labels = detail::sorted_labels(t);
  const int r = static_cast<int>(labels.size());
  switch (m.kind) {
    case MoveKind::A: {
      TensorOperator total = identity_op(ctx.N, r);
      for (const auto& [label, eps] : m.flips) {
        const TriangleRecord& tri = detail::tri_at(t, label);
        const int pos = detail::factor_pos(labels, label);
        TensorOperator local =
            eps > 0
                ? a_canonical(ctx, edge_weight(t, tri.edges[0]),
                              edge_weight(t, tri.edges[1]))
                : op_inverse(a_canonical(
                      ctx, weight_dual(edge_weight(t, tri.edges[2])),
                      edge_weight(t, tri.edges[0])));
        total = embed(local, {pos}, r) * total;
      }
      return total;
    }
    case MoveKind::T: {
      const TriangleRecord& s_rec = detail::tri_at(t, m.s);
      const TriangleRecord& t_rec = detail::tri_at(t, m.t);
      const TensorOperator op = t_compositional(
          ctx, edge_weight(t, s_rec.edges[0]), edge_weight(t, s_rec.edges[1]),
          edge_weight(t, t_rec.edges[1]));
      return embed(op, {detail::factor_pos(labels, m.t),
                        detail::factor_pos(labels, m.s)}, r);
    }
    case MoveKind::Tinv: {
      const TriangleRecord& s_rec = detail::tri_at(t, m.s);
      const TriangleRecord& t_rec = detail::tri_at(t, m.t);
      const TensorOperator op = t_compositional(
          ctx, edge_weight(t, s_rec.edges[0]), edge_weight(t, t_rec.edges[0]),
          edge_weight(t, t_rec.edges[1]));
      return op_inverse(embed(op, {detail::factor_pos(labels, m.t),
                                   detail::factor_pos(labels, m.s)}, r));
    }
    case MoveKind::P: {
      std::vector<int> perm(r);
      for (const auto& [a, b] : m.gamma)
        perm[detail::factor_pos(labels, a) - 1] = detail::factor_pos(labels, b);
      return perm_op(ctx.N, perm, r);
    }
  }
  fail(errc::constraint_violation, "unhandled move kind");
}

// Compose the functor along a closed path and verify the composite is a
// scalar multiple of the identity.  strict keeps every intermediate sane;
// the permissive mode relaxes only sanity, never A-conflicts or regularity.
inline RelationReport verify_loop(const RootContext& ctx,
                                  const LDTriangulation& start,
                                  const std::vector<Move>& moves,
                                  bool strict = true,
                                  const std::string& name = "loop") {
  validate_combinatorics(start);
  if (strict && !is_sane(start))
    fail(errc::constraint_violation, "start object is not sane");
  const int r = static_cast<int>(start.triangles.size());
  TensorOperator total = identity_op(ctx.N, r);
  LDTriangulation state = start;
  int step = 0;
  for (const Move& m : moves) {
    ++step;
    const TensorOperator op = functor_op(ctx, m, state);
    state = apply_move(state, m);
    if (strict && !is_sane(state))
      fail(errc::constraint_violation,
           "object is not sane after move " + std::to_string(step) + " (" +
               describe_move(m) + ")");
    total = op * total;
  }
  if (!equivalent(state, start))
    fail(errc::not_a_loop, "path does not return to the start object");
  const auto [c, res] = proportionality(total, identity_op(ctx.N, r));
  RelationReport rep{name, res, c, res <= tau(ctx, power_of(ctx.N, r)),
                     {}, ctx.N};
  return rep;
}

// ---------------------------------------------------------------------------
// Builders

// Fan triangulation of the n-gon on vertices 0..n-1: triangle j = (v0, vj,
// v{j+1}) labeled j for j = 1..n-2.  Edge ids: boundary (vi, v{i+1}) = i+1,
// diagonal (v0, vj) = n + (j-1).  dots[j] is the corner of triangle j holding
// the dot: 0 = v0, 1 = vj, 2 = v{j+1}.
inline LDTriangulation build_ngon(int n, const std::map<int, int>& dots,
                                  const std::map<int, Weight>& weights) {
  if (n < 3) fail(errc::invalid_combinatorics, "polygon needs at least 3 sides");
  LDTriangulation t;
  for (int i = 0; i < n; ++i) {
    const auto it = weights.find(i + 1);
    if (it == weights.end())
      fail(errc::invalid_combinatorics,
           "missing weight for boundary edge " + std::to_string(i + 1));
    if (it->second.is_singular())
      fail(errc::singular_weight,
           "boundary edge " + std::to_string(i + 1) + " has a singular weight");
    t.edges[i + 1] = EdgeRecord{it->second, true};
  }
  for (int j = 2; j <= n - 2; ++j) {
    const int id = n + (j - 1);
    const auto it = weights.find(id);
    if (it == weights.end())
      fail(errc::invalid_combinatorics,
           "missing weight for diagonal edge " + std::to_string(id));
    if (it->second.is_singular())
      fail(errc::singular_weight,
           "diagonal edge " + std::to_string(id) + " has a singular weight");
    t.edges[id] = EdgeRecord{it->second, false};
  }
  for (int j = 1; j <= n - 2; ++j) {
    const int left = j == 1 ? 1 : n + (j - 1);
    const int outer = j + 1;
    const int right = j == n - 2 ? n : n + j;
    const std::array<int, 3> sides = {left, outer, right};  // S0, S1, S2
    const auto it = dots.find(j);
    const int corner = it == dots.end() ? 1 : it->second;
    if (corner < 0 || corner > 2)
      fail(errc::invalid_combinatorics, "dot corner must be 0, 1, or 2");
    t.triangles[j].edges = {sides[(corner + 2) % 3], sides[corner],
                            sides[(corner + 1) % 3]};
  }
  validate_combinatorics(t);
  return t;
}

// Sane fan: boundary weights w1..w{n-1} on edges (v{i-1}, vi), diagonals and
// the closing edge filled with the prefix products, dots at the middle
// vertices so that every triangle reads prefix * next = longer prefix.
inline LDTriangulation build_fan(const std::vector<Weight>& boundary) {
  const int n = static_cast<int>(boundary.size()) + 1;
  if (n < 3) fail(errc::invalid_combinatorics, "fan needs at least 2 weights");
  std::map<int, Weight> weights;
  Weight prefix = boundary[0];
  weights[1] = boundary[0];
  for (int j = 2; j <= n - 1; ++j) {
    weights[j] = boundary[j - 1];
    if (j <= n - 2) {
      prefix = weight_mul(prefix, boundary[j - 1]);
      weights[n + (j - 1)] = prefix;
    }
  }
  Weight total = boundary[0];
  for (int i = 1; i < n - 1; ++i) total = weight_mul(total, boundary[i]);
  weights[n] = total;
  std::map<int, int> dots;
  for (int j = 1; j <= n - 2; ++j) dots[j] = 1;
  LDTriangulation t = build_ngon(n, dots, weights);
  if (!is_sane(t))
    fail(errc::constraint_violation, "fan construction produced a non-sane object");
  return t;
}

// Once-punctured torus: one square with both pairs of opposite sides
// identified, cut by a diagonal.  Edges 1, 2, 3 with weights l1, l2, l1 l2;
// triangle 1 = (3, 1, 2), triangle 2 = (1, 2, 3); every edge is internal.
enum class TorusBranch { pos, neg };

inline LDTriangulation build_torus(double alpha, double beta,
                                   TorusBranch branch = TorusBranch::pos) {
  if (alpha == 0.0 || beta == 0.0)
    fail(errc::constraint_violation, "torus seed needs nonzero parameters");
  Weight l1, l2;
  if (branch == TorusBranch::pos) {
    if (alpha == beta)
      fail(errc::constraint_violation,
           "torus seed with equal parameters has a singular diagonal");
    l1 = Weight::unchecked(cd(1, 0), cd(alpha, 0));
    l2 = Weight::unchecked(cd(-1, 0), cd(beta, 0));
  } else {
    if (alpha == beta)
      fail(errc::constraint_violation,
           "torus seed with equal parameters has a singular diagonal");
    if (alpha == 2 * beta)
      fail(errc::constraint_violation,
           "alternative torus branch needs alpha distinct from 2 beta");
    const double x2 = 1.0 - 2.0 * beta / alpha;
    l1 = Weight::unchecked(cd(-1, 0), cd(alpha, 0));
    l2 = Weight::unchecked(cd(x2, 0), cd(beta, 0));
  }
  const Weight l3 = weight_mul(l1, l2);
  if (l3.is_singular())
    fail(errc::constraint_violation, "torus diagonal weight is singular");
  LDTriangulation t;
  t.edges[1] = EdgeRecord{l1, false};
  t.edges[2] = EdgeRecord{l2, false};
  t.edges[3] = EdgeRecord{l3, false};
  t.triangles[1].edges = {3, 1, 2};
  t.triangles[2].edges = {1, 2, 3};
  validate_combinatorics(t);
  if (!is_sane(t))
    fail(errc::constraint_violation, "torus seed is not sane");
  return t;
}

// ---------------------------------------------------------------------------
// Canonical loop instances

struct LoopCase {
  std::string name;
  LDTriangulation start;
  std::vector<Move> moves;
  cd expected_scalar{1.0, 0.0};
};

// Triple dot rotation on a lone sane triangle; composite q^{-2 m_{x,x'}} id.
inline LoopCase loop_a3(const RootContext& ctx, const Weight& l1,
                        const Weight& l2) {
  if (!is_regular_pair(l1, l2))
    fail(errc::regularity_violation, "loop needs a regular pair");
  LDTriangulation t;
  t.edges[1] = EdgeRecord{l1, true};
  t.edges[2] = EdgeRecord{l2, true};
  t.edges[3] = EdgeRecord{weight_mul(l1, l2), true};
  t.triangles[1].edges = {1, 2, 3};
  LoopCase c;
  c.name = "loop_a3";
  c.start = std::move(t);
  c.moves = {move_A(1, 1), move_A(1, 1), move_A(1, 1)};
  c.expected_scalar = q_power(ctx, -2 * cocycle_m(ctx, l1.x, l2.x));
  return c;
}

// Pentagon of five flips on the fan of a 5-gon; composite is the identity.
inline LoopCase loop_pentagon(const RootContext& ctx, const Weight& l1,
                              const Weight& l2, const Weight& l3,
                              const Weight& l4) {
  (void)ctx;
  if (!is_regular_seq({l1, l2, l3, l4}))
    fail(errc::regularity_violation, "loop needs a regular quadruple");
  LoopCase c;
  c.name = "loop_pentagon";
  c.start = build_fan({l1, l2, l3, l4});
  c.moves = {move_T(2, 3), move_T(1, 2), move_Tinv(2, 3), move_Tinv(1, 3),
             move_Tinv(1, 2)};
  c.expected_scalar = cd(1.0, 0.0);
  return c;
}

// Square loop mixing dot rotations and flips; composite q^{2(m_{x1,x2} -
// m_{x1, x2 x3})} id.
inline LoopCase loop_ata(const RootContext& ctx, const Weight& l1,
                         const Weight& l2, const Weight& l3) {
  if (!is_regular_seq({l1, l2, l3}))
    fail(errc::regularity_violation, "loop needs a regular triple");
  const Weight l4 = weight_mul(l1, l2);
  const Weight l0 = weight_mul(l4, l3);
  LoopCase c;
  c.name = "loop_ata";
  c.start = build_ngon(4, {{1, 0}, {2, 2}},
                       {{1, l3}, {2, l0}, {3, l1}, {4, l2}, {5, l4}});
  c.moves = {move_A_multi({{1, 1}, {2, -1}}), move_T(1, 2),
             move_A_multi({{1, -1}, {2, 1}}), move_Tinv(2, 1)};
  c.expected_scalar = q_power(
      ctx, 2 * (cocycle_m(ctx, l1.x, l2.x) - cocycle_m(ctx, l1.x, l2.x * l3.x)));
  return c;
}

// Square loop whose composite realizes flip-rotate-flip = rotate-rotate-swap;
// scalar one.
inline LoopCase loop_tat(const RootContext& ctx, const Weight& l1,
                         const Weight& l2, const Weight& l3) {
  (void)ctx;
  if (!is_regular_seq({l1, l2, l3}))
    fail(errc::regularity_violation, "loop needs a regular triple");
  const Weight l4 = weight_mul(l1, l2);
  const Weight l0 = weight_mul(l4, l3);
  LoopCase c;
  c.name = "loop_tat";
  c.start = build_ngon(4, {{1, 1}, {2, 1}},
                       {{1, l1}, {2, l2}, {3, l3}, {4, l0}, {5, l4}});
  c.moves = {move_T(1, 2), move_A(1, 1), move_T(2, 1),
             move_P({{1, 2}, {2, 1}}), move_A_multi({{1, -1}, {2, -1}})};
  c.expected_scalar = cd(1.0, 0.0);
  return c;
}

// Flips with disjoint supports commute; two variants on the fan of a 6-gon.
inline LoopCase loop_commute(const RootContext& ctx,
                             const std::vector<Weight>& ws, bool with_rotation) {
  (void)ctx;
  if (ws.size() != 5)
    fail(errc::constraint_violation, "commuting loop needs five weights");
  if (!is_regular_seq(ws))
    fail(errc::regularity_violation, "loop needs a regular sequence");
  LoopCase c;
  c.name = with_rotation ? "loop_commute_mixed" : "loop_commute";
  c.start = build_fan(ws);
  if (with_rotation)
    c.moves = {move_A(4, -1), move_T(1, 2), move_A(4, 1), move_Tinv(1, 2)};
  else
    c.moves = {move_T(1, 2), move_T(3, 4), move_Tinv(1, 2), move_Tinv(3, 4)};
  c.expected_scalar = cd(1.0, 0.0);
  return c;
}

// Generator-inverse pairs; composite exactly the identity.
inline std::vector<LoopCase> loops_trivial(const RootContext& ctx,
                                           const std::vector<Weight>& ws) {
  if (ws.size() != 5)
    fail(errc::constraint_violation, "trivial loops need five weights");
  if (!is_regular_seq(ws))
    fail(errc::regularity_violation, "loops need a regular sequence");
  std::vector<LoopCase> out;
  {
    LoopCase c;
    c.name = "loop_flip_unflip";
    c.start = build_fan(ws);
    c.moves = {move_T(1, 2), move_Tinv(1, 2)};
    out.push_back(std::move(c));
  }
  {
    LoopCase c;
    c.name = "loop_rotate_unrotate";
    c.start = loop_a3(ctx, ws[0], ws[1]).start;
    c.moves = {move_A(1, 1), move_A(1, -1)};
    out.push_back(std::move(c));
  }
  {
    LoopCase c;
    c.name = "loop_relabel_unrelabel";
    c.start = build_fan(ws);
    c.moves = {move_P({{1, 2}, {2, 3}, {3, 4}, {4, 1}}),
               move_P({{2, 1}, {3, 2}, {4, 3}, {1, 4}})};
    out.push_back(std::move(c));
  }
  return out;
}

// All canonical loop families on one sampled regular 5-tuple.
inline std::vector<LoopCase> canonical_loops(const RootContext& ctx,
                                             std::mt19937_64& rng) {
  const std::vector<Weight> ws = sample_weights_until(
      rng, 5, [](const std::vector<Weight>& v) { return is_regular_seq(v); });
  std::vector<LoopCase> out;
  out.push_back(loop_a3(ctx, ws[0], ws[1]));
  out.push_back(loop_pentagon(ctx, ws[0], ws[1], ws[2], ws[3]));
  out.push_back(loop_ata(ctx, ws[0], ws[1], ws[2]));
  out.push_back(loop_tat(ctx, ws[0], ws[1], ws[2]));
  out.push_back(loop_commute(ctx, ws, false));
  out.push_back(loop_commute(ctx, ws, true));
  for (LoopCase& c : loops_trivial(ctx, ws)) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// Exploration

struct MoveCandidate {
  Move move;
  bool admissible = false;
  std::string reason;  // empty when admissible
};

// Enumerate flip configurations (forward and inverse) and all simultaneous
// dot-rotation assignments; relabelings are omitted.
inline std::vector<MoveCandidate> enumerate_moves(const LDTriangulation& t,
                                                  double sane_tol = 1e-8,
                                                  bool strict = true) {
  std::vector<Move> candidates;
  const std::vector<int> labels = detail::sorted_labels(t);
  for (int s : labels)
    for (int tt : labels) {
      if (s == tt) continue;
      const TriangleRecord& s_rec = t.triangles.at(s);
      const TriangleRecord& t_rec = t.triangles.at(tt);
      if (s_rec.edges[2] == t_rec.edges[0]) candidates.push_back(move_T(s, tt));
      if (s_rec.edges[1] == t_rec.edges[2]) candidates.push_back(move_Tinv(s, tt));
    }
  const int r = static_cast<int>(labels.size());
  const long combos = power_of(3, r);
  for (long code = 1; code < combos; ++code) {
    std::vector<std::pair<int, int>> flips;
    long rest = code;
    for (int i = 0; i < r; ++i) {
      const int trit = static_cast<int>(rest % 3);
      rest /= 3;
      if (trit == 1) flips.push_back({labels[i], 1});
      if (trit == 2) flips.push_back({labels[i], -1});
    }
    candidates.push_back(move_A_multi(std::move(flips)));
  }
  std::vector<MoveCandidate> out;
  for (Move& m : candidates) {
    MoveCandidate c;
    c.move = std::move(m);
    try {
      const LDTriangulation next = apply_move(t, c.move);
      if (strict && !is_sane(next, sane_tol)) {
        c.admissible = false;
        c.reason = "result not sane";
      } else {
        c.admissible = true;
      }
    } catch (const qt_error& e) {
      c.admissible = false;
      c.reason = std::string(errc_name(e.code())) + ": " + e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct BlockedMove {
  std::string at_node;
  std::string move;
  std::string reason;
};

struct ExploreResult {
  std::vector<long> cumulative_by_depth;  // index d: distinct objects, depth <= d
  long nodes = 0;
  bool truncated = false;
  std::vector<BlockedMove> blocked;
  std::vector<LDTriangulation> objects;   // discovery order
  std::vector<int> object_depth;
  std::vector<std::vector<Move>> object_path;
  std::vector<std::tuple<int, int, std::string>> graph_edges;  // object indices
};

inline ExploreResult explore(const LDTriangulation& seed, int max_depth,
                             long max_nodes = 4000, double sane_tol = 1e-8,
                             bool strict = true) {
  validate_combinatorics(seed);
  if (strict && !is_sane(seed, sane_tol))
    fail(errc::constraint_violation, "seed object is not sane");
  ExploreResult res;
  std::map<std::string, int> visited;  // canonical hash -> object index
  std::queue<int> frontier;
  visited[canonical_hash(seed)] = 0;
  res.objects.push_back(seed);
  res.object_depth.push_back(0);
  res.object_path.push_back({});
  frontier.push(0);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    const int depth = res.object_depth[u];
    if (depth >= max_depth) continue;
    const LDTriangulation state = res.objects[u];
    for (MoveCandidate& c : enumerate_moves(state, sane_tol, strict)) {
      if (!c.admissible) {
        res.blocked.push_back(BlockedMove{std::to_string(u),
                                          describe_move(c.move), c.reason});
        continue;
      }
      const LDTriangulation next = apply_move(state, c.move);
      const std::string h = canonical_hash(next);
      auto it = visited.find(h);
      if (it == visited.end()) {
        if (static_cast<long>(res.objects.size()) >= max_nodes) {
          res.truncated = true;
          continue;
        }
        const int v = static_cast<int>(res.objects.size());
        visited[h] = v;
        res.objects.push_back(next);
        res.object_depth.push_back(depth + 1);
        std::vector<Move> path = res.object_path[u];
        path.push_back(c.move);
        res.object_path.push_back(std::move(path));
        res.graph_edges.push_back({u, v, describe_move(c.move)});
        frontier.push(v);
      } else {
        res.graph_edges.push_back({u, it->second, describe_move(c.move)});
      }
    }
  }
  res.nodes = static_cast<long>(res.objects.size());
  res.cumulative_by_depth.assign(max_depth + 1, 0);
  for (int d : res.object_depth)
    for (int k = d; k <= max_depth; ++k) ++res.cumulative_by_depth[k];
  return res;
}

struct TorusReport {
  ExploreResult explore;
  bool x_pattern_ok = true;       // every node: x components are {+1, -1, -1}
  bool flip_pattern_ok = true;    // every flip config sits on an x = -1 edge
  bool flips_all_admissible = true;
  bool counts_strictly_monotone = true;
  std::vector<std::string> notes;
};

// Breadth-first exploration of the once-punctured torus component with the
// structural invariants of the positive branch checked at every node.
inline TorusReport opt_torus_explore(double alpha, double beta, int depth,
                                     TorusBranch branch = TorusBranch::pos,
                                     long max_nodes = 4000) {
  const LDTriangulation seed = build_torus(alpha, beta, branch);
  TorusReport rep;
  rep.explore = explore(seed, depth, max_nodes);
  const bool check_pattern = branch == TorusBranch::pos;
  for (size_t i = 0; i < rep.explore.objects.size(); ++i) {
    const LDTriangulation& t = rep.explore.objects[i];
    if (check_pattern) {
      int plus = 0, minus = 0;
      for (const auto& [id, rec] : t.edges) {
        if (std::abs(rec.weight.x - cd(1, 0)) < 1e-9) ++plus;
        else if (std::abs(rec.weight.x - cd(-1, 0)) < 1e-9) ++minus;
      }
      if (plus != 1 || minus != 2) {
        rep.x_pattern_ok = false;
        rep.notes.push_back("node " + std::to_string(i) +
                            " breaks the {+1,-1,-1} pattern");
      }
    }
    for (const MoveCandidate& c : enumerate_moves(t)) {
      const bool is_flip =
          c.move.kind == MoveKind::T || c.move.kind == MoveKind::Tinv;
      if (!is_flip) continue;
      const int diag = c.move.kind == MoveKind::T
                           ? t.triangles.at(c.move.s).edges[2]
                           : t.triangles.at(c.move.t).edges[2];
      if (check_pattern &&
          std::abs(edge_weight(t, diag).x - cd(-1, 0)) >= 1e-9) {
        rep.flip_pattern_ok = false;
        rep.notes.push_back("node " + std::to_string(i) + ": flip " +
                            describe_move(c.move) + " sits on an x != -1 edge");
      }
      if (!c.admissible) {
        rep.flips_all_admissible = false;
        rep.notes.push_back("node " + std::to_string(i) + ": flip " +
                            describe_move(c.move) + " blocked: " + c.reason);
      }
    }
  }
  for (size_t d = 1; d < rep.explore.cumulative_by_depth.size(); ++d)
    if (rep.explore.cumulative_by_depth[d] <=
        rep.explore.cumulative_by_depth[d - 1])
      rep.counts_strictly_monotone = false;
  return rep;
}

// Verify the loops formed by pairs of breadth-first discovery paths meeting
// at a non-tree edge, up to max_len moves total.
inline std::vector<RelationReport> verify_component_loops(
    const RootContext& ctx, const LDTriangulation& seed, int max_len,
    long max_nodes = 600, int max_loops = 64) {
  const int radius = (max_len + 1) / 2;
  ExploreResult res = explore(seed, radius, max_nodes);
  std::vector<RelationReport> out;
  std::set<std::string> seen;
  for (const auto& [u, v, label] : res.graph_edges) {
    if (static_cast<int>(out.size()) >= max_loops) break;
    const int len =
        res.object_depth[u] + 1 + res.object_depth[v];
    if (len > max_len || len < 2) continue;
    std::string key = std::to_string(std::min(u, v)) + "/" +
                      std::to_string(std::max(u, v)) + "/" + label;
    if (!seen.insert(key).second) continue;
    std::vector<Move> loop = res.object_path[u];
    Move crossing;
    bool found = false;
    for (const MoveCandidate& c : enumerate_moves(res.objects[u]))
      if (c.admissible && describe_move(c.move) == label) {
        crossing = c.move;
        found = true;
        break;
      }
    if (!found) continue;
    loop.push_back(crossing);
    const std::vector<Move>& back = res.object_path[v];
    for (auto it = back.rbegin(); it != back.rend(); ++it)
      loop.push_back(inverse_move(*it));
    out.push_back(verify_loop(ctx, seed, loop, true,
                              "cycle_len" + std::to_string(len)));
  }
  return out;
}

// DOT rendering of an explored component.
inline std::string dot_export(const ExploreResult& res) {
  std::string out = "digraph component {\n  rankdir=LR;\n";
  for (size_t i = 0; i < res.objects.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + std::to_string(i) +
           " (d" + std::to_string(res.object_depth[i]) + ")\"];\n";
  std::set<std::string> emitted;
  for (const auto& [u, v, label] : res.graph_edges) {
    std::string line = "  n" + std::to_string(u) + " -> n" + std::to_string(v) +
                       " [label=\"" + label + "\"];\n";
    if (emitted.insert(line).second) out += line;
  }
  out += "}\n";
  return out;
}

}  // namespace qtorus
