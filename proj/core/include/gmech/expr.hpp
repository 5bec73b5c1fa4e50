#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gmech/bundles.hpp"

namespace gmech {

/// Expression tree for scalar observables on a bundle space.
///
/// Grammar: sums of products of coordinate tokens (mu[i], nu[i], xi[i]),
/// real literals, and the built-ins quadratic_form(slot,[d...]),
/// pair(slot,slot), trace_g, entry_g(i,j). Group dependence only through the
/// whitelisted matrix functionals.
struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { NUM, COORD, ADD, MUL, NEG, QFORM, PAIR, TRACE_G, ENTRY_G };
  Kind kind;
  double num = 0.0;
  SlotName slot = SlotName::MU;   // COORD / QFORM / PAIR first slot
  SlotName slot2 = SlotName::MU;  // PAIR second slot
  int index = 0;                  // COORD index / ENTRY_G row
  int index2 = 0;                 // ENTRY_G col
  std::vector<double> weights;    // QFORM diagonal
  NodePtr a, b;
};

NodePtr nd_num(double v);
NodePtr nd_coord(SlotName slot, int i);
NodePtr nd_add(NodePtr a, NodePtr b);
NodePtr nd_sub(NodePtr a, NodePtr b);
NodePtr nd_mul(NodePtr a, NodePtr b);
NodePtr nd_neg(NodePtr a);

bool node_equal(const NodePtr& a, const NodePtr& b);

/// Exact derivative with respect to the i-th coordinate of a fiber slot.
NodePtr diff_node(const NodePtr& n, SlotName slot, int i);

/// Scalar observable with slot-wise functional derivatives.
class Observable {
 public:
  Observable() = default;
  Observable(SpaceId space, GroupId group, NodePtr root);

  SpaceId space() const { return space_; }
  GroupId group() const { return group_; }
  const NodePtr& root() const { return root_; }

  double eval(const BundlePoint& p) const;

  /// Exact (symbolic) gradient with respect to a fiber slot. The result is
  /// algebra-valued for dual slots and dual-valued for algebra slots; the
  /// raw coordinate vector is returned.
  Vec grad_fiber(SlotName slot, const BundlePoint& p) const;

  /// Right-trivialized gradient with respect to the group slot,
  /// T*_e R_g (dH/dg), analytic for the whitelisted functionals.
  Vec grad_group(const BundlePoint& p) const;

  bool depends_on(SlotName slot) const;
  bool has_group_dependence() const;
  bool polynomial() const { return !has_group_dependence(); }

  std::string print() const;

 private:
  SpaceId space_ = SpaceId::DUAL;
  GroupId group_ = GroupId::SO3;
  NodePtr root_;
};

/// Parse an observable; throws usage_error with a column position on bad
/// syntax and rejects slots absent from the space.
Observable parse(const std::string& source, SpaceId space, GroupId group);

Observable observable_product(const Observable& f, const Observable& g);
Observable observable_from_node(SpaceId space, GroupId group, NodePtr n);

/// Re-home an observable on another space, renaming fiber slots through the
/// given (old slot -> new slot) pairs. Unmapped referenced slots are errors.
Observable rename_slots(const Observable& f, SpaceId new_space,
                        const std::vector<std::pair<SlotName, SlotName>>& mapping);

}  // namespace gmech
