#include "gmech/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace gmech {

namespace {

NodePtr mk(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_zero(const NodePtr& n) { return n->kind == Node::Kind::NUM && n->num == 0.0; }
bool is_one(const NodePtr& n) { return n->kind == Node::Kind::NUM && n->num == 1.0; }

}  // namespace

NodePtr nd_num(double v) {
  Node n;
  n.kind = Node::Kind::NUM;
  n.num = v;
  return mk(std::move(n));
}

NodePtr nd_coord(SlotName slot, int i) {
  Node n;
  n.kind = Node::Kind::COORD;
  n.slot = slot;
  n.index = i;
  return mk(std::move(n));
}

NodePtr nd_add(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  Node n;
  n.kind = Node::Kind::ADD;
  n.a = std::move(a);
  n.b = std::move(b);
  return mk(std::move(n));
}

NodePtr nd_neg(NodePtr a) {
  if (is_zero(a)) return a;
  Node n;
  n.kind = Node::Kind::NEG;
  n.a = std::move(a);
  return mk(std::move(n));
}

NodePtr nd_sub(NodePtr a, NodePtr b) { return nd_add(std::move(a), nd_neg(std::move(b))); }

NodePtr nd_mul(NodePtr a, NodePtr b) {
  if (is_zero(a)) return a;
  if (is_zero(b)) return b;
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  Node n;
  n.kind = Node::Kind::MUL;
  n.a = std::move(a);
  n.b = std::move(b);
  return mk(std::move(n));
}

bool node_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::Kind::NUM: return a->num == b->num;
    case Node::Kind::COORD: return a->slot == b->slot && a->index == b->index;
    case Node::Kind::ADD:
    case Node::Kind::MUL: return node_equal(a->a, b->a) && node_equal(a->b, b->b);
    case Node::Kind::NEG: return node_equal(a->a, b->a);
    case Node::Kind::QFORM: return a->slot == b->slot && a->weights == b->weights;
    case Node::Kind::PAIR: return a->slot == b->slot && a->slot2 == b->slot2;
    case Node::Kind::TRACE_G: return true;
    case Node::Kind::ENTRY_G: return a->index == b->index && a->index2 == b->index2;
  }
  return false;
}

NodePtr diff_node(const NodePtr& n, SlotName slot, int i) {
  switch (n->kind) {
    case Node::Kind::NUM:
    case Node::Kind::TRACE_G:
    case Node::Kind::ENTRY_G:
      return nd_num(0.0);
    case Node::Kind::COORD:
      return nd_num(n->slot == slot && n->index == i ? 1.0 : 0.0);
    case Node::Kind::ADD:
      return nd_add(diff_node(n->a, slot, i), diff_node(n->b, slot, i));
    case Node::Kind::NEG:
      return nd_neg(diff_node(n->a, slot, i));
    case Node::Kind::MUL:
      return nd_add(nd_mul(diff_node(n->a, slot, i), n->b),
                    nd_mul(n->a, diff_node(n->b, slot, i)));
    case Node::Kind::QFORM:
      if (n->slot != slot) return nd_num(0.0);
      return nd_mul(nd_num(2.0 * n->weights[i]), nd_coord(slot, i));
    case Node::Kind::PAIR: {
      NodePtr d = nd_num(0.0);
      if (n->slot == slot) d = nd_add(d, nd_coord(n->slot2, i));
      if (n->slot2 == slot) d = nd_add(d, nd_coord(n->slot, i));
      return d;
    }
  }
  return nd_num(0.0);
}

namespace {

double eval_node(const Node& n, const BundlePoint& p) {
  switch (n.kind) {
    case Node::Kind::NUM: return n.num;
    case Node::Kind::COORD: return p.fiber(n.slot)[n.index];
    case Node::Kind::ADD: return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Node::Kind::MUL: return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Node::Kind::NEG: return -eval_node(*n.a, p);
    case Node::Kind::QFORM: {
      const Vec& v = p.fiber(n.slot);
      double s = 0.0;
      for (int i = 0; i < v.size(); ++i) s += n.weights[i] * v[i] * v[i];
      return s;
    }
    case Node::Kind::PAIR: return p.fiber(n.slot).dot(p.fiber(n.slot2));
    case Node::Kind::TRACE_G: return p.g->m.trace();
    case Node::Kind::ENTRY_G: return p.g->m(n.index, n.index2);
  }
  return 0.0;
}

// d/dt f(exp(t B) g) at t = 0 for the group-functional leaves.
double dir_node(const Node& n, const BundlePoint& p, const Mat& bg) {
  switch (n.kind) {
    case Node::Kind::NUM:
    case Node::Kind::COORD:
    case Node::Kind::QFORM:
    case Node::Kind::PAIR:
      return 0.0;
    case Node::Kind::ADD: return dir_node(*n.a, p, bg) + dir_node(*n.b, p, bg);
    case Node::Kind::NEG: return -dir_node(*n.a, p, bg);
    case Node::Kind::MUL:
      return dir_node(*n.a, p, bg) * eval_node(*n.b, p) +
             eval_node(*n.a, p) * dir_node(*n.b, p, bg);
    case Node::Kind::TRACE_G: return bg.trace();
    case Node::Kind::ENTRY_G: return bg(n.index, n.index2);
  }
  return 0.0;
}

bool uses_slot(const Node& n, SlotName slot) {
  switch (n.kind) {
    case Node::Kind::COORD: return n.slot == slot;
    case Node::Kind::QFORM: return n.slot == slot;
    case Node::Kind::PAIR: return n.slot == slot || n.slot2 == slot;
    case Node::Kind::ADD:
    case Node::Kind::MUL: return uses_slot(*n.a, slot) || uses_slot(*n.b, slot);
    case Node::Kind::NEG: return uses_slot(*n.a, slot);
    default: return false;
  }
}

bool uses_group(const Node& n) {
  switch (n.kind) {
    case Node::Kind::TRACE_G:
    case Node::Kind::ENTRY_G: return true;
    case Node::Kind::ADD:
    case Node::Kind::MUL: return uses_group(*n.a) || uses_group(*n.b);
    case Node::Kind::NEG: return uses_group(*n.a);
    default: return false;
  }
}

void print_node(const Node& n, std::ostringstream& os) {
  switch (n.kind) {
    case Node::Kind::NUM: os << n.num; return;
    case Node::Kind::COORD: os << to_string(n.slot) << "[" << n.index << "]"; return;
    case Node::Kind::ADD: {
      os << "(";
      print_node(*n.a, os);
      os << " + ";
      print_node(*n.b, os);
      os << ")";
      return;
    }
    case Node::Kind::MUL: {
      os << "(";
      print_node(*n.a, os);
      os << " * ";
      print_node(*n.b, os);
      os << ")";
      return;
    }
    case Node::Kind::NEG: {
      os << "(-";
      print_node(*n.a, os);
      os << ")";
      return;
    }
    case Node::Kind::QFORM: {
      os << "quadratic_form(" << to_string(n.slot) << ", [";
      for (size_t i = 0; i < n.weights.size(); ++i) {
        if (i) os << ", ";
        os << n.weights[i];
      }
      os << "])";
      return;
    }
    case Node::Kind::PAIR:
      os << "pair(" << to_string(n.slot) << ", " << to_string(n.slot2) << ")";
      return;
    case Node::Kind::TRACE_G: os << "trace_g"; return;
    case Node::Kind::ENTRY_G: os << "entry_g(" << n.index << ", " << n.index2 << ")"; return;
  }
}

class Parser {
 public:
  Parser(const std::string& src, SpaceId space, GroupId group)
      : src_(src), space_(space), group_(group), n_(Group::get(group).dim()) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ != src_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw usage_error("parse error at line 1, column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    skip();
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    NodePtr t = term();
    if (neg) t = nd_neg(t);
    for (;;) {
      skip();
      if (eat('+')) t = nd_add(t, term());
      else if (eat('-')) t = nd_sub(t, term());
      else return t;
    }
  }

  NodePtr term() {
    NodePtr f = factor();
    for (;;) {
      skip();
      if (eat('*')) f = nd_mul(f, factor());
      else return f;
    }
  }

  NodePtr factor() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      return nd_neg(factor());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_node();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident_node();
    fail("unexpected character");
  }

  NodePtr number_node() { return nd_num(number()); }

  double number() {
    skip();
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
            src_[pos_] == 'e' || src_[pos_] == 'E' ||
            ((src_[pos_] == '+' || src_[pos_] == '-') && pos_ > start &&
             (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
      ++pos_;
    if (start == pos_) fail("expected a number");
    try {
      return std::stod(src_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      fail("malformed number");
    }
  }

  int integer() {
    skip();
    bool neg = eat('-');
    size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    int v = std::stoi(src_.substr(start, pos_ - start));
    return neg ? -v : v;
  }

  std::string ident() {
    skip();
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected an identifier");
    return src_.substr(start, pos_ - start);
  }

  SlotName slot_name(const std::string& s) {
    SlotName n;
    if (s == "mu") n = SlotName::MU;
    else if (s == "nu") n = SlotName::NU;
    else if (s == "xi") n = SlotName::XI;
    else fail("unknown slot '" + s + "'");
    if (!has_slot(space_, n)) fail("slot '" + s + "' absent from space " + to_string(space_));
    return n;
  }

  NodePtr ident_node() {
    std::string id = ident();
    if (id == "mu" || id == "nu" || id == "xi") {
      expect('[');
      int i = integer();
      expect(']');
      if (i < 0 || i >= n_) fail("coordinate index out of range");
      return nd_coord(slot_name(id), i);
    }
    if (id == "trace_g") {
      if (!has_slot(space_, SlotName::G)) fail("trace_g on a space without a group slot");
      if (eat('(')) expect(')');
      Node n;
      n.kind = Node::Kind::TRACE_G;
      return mk(std::move(n));
    }
    if (id == "entry_g") {
      if (!has_slot(space_, SlotName::G)) fail("entry_g on a space without a group slot");
      expect('(');
      int r = integer();
      expect(',');
      int c = integer();
      expect(')');
      int m = Group::get(group_).mat_size();
      if (r < 0 || r >= m || c < 0 || c >= m) fail("entry index out of range");
      Node n;
      n.kind = Node::Kind::ENTRY_G;
      n.index = r;
      n.index2 = c;
      return mk(std::move(n));
    }
    if (id == "quadratic_form") {
      expect('(');
      SlotName s = slot_name(ident());
      expect(',');
      expect('[');
      std::vector<double> w;
      w.push_back(number());
      while (eat(',')) w.push_back(number());
      expect(']');
      expect(')');
      if (static_cast<int>(w.size()) != n_) fail("quadratic_form needs one weight per coordinate");
      Node n;
      n.kind = Node::Kind::QFORM;
      n.slot = s;
      n.weights = std::move(w);
      return mk(std::move(n));
    }
    if (id == "pair") {
      expect('(');
      SlotName a = slot_name(ident());
      expect(',');
      SlotName b = slot_name(ident());
      expect(')');
      Node n;
      n.kind = Node::Kind::PAIR;
      n.slot = a;
      n.slot2 = b;
      return mk(std::move(n));
    }
    fail("unknown token '" + id + "'");
  }

  const std::string& src_;
  SpaceId space_;
  GroupId group_;
  int n_;
  size_t pos_ = 0;
};

}  // namespace

Observable::Observable(SpaceId space, GroupId group, NodePtr root)
    : space_(space), group_(group), root_(std::move(root)) {}

double Observable::eval(const BundlePoint& p) const { return eval_node(*root_, p); }

Vec Observable::grad_fiber(SlotName slot, const BundlePoint& p) const {
  const int n = Group::get(group_).dim();
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = eval_node(*diff_node(root_, slot, i), p);
  return out;
}

Vec Observable::grad_group(const BundlePoint& p) const {
  const Group& gr = Group::get(group_);
  Vec out(gr.dim());
  for (int i = 0; i < gr.dim(); ++i) out[i] = dir_node(*root_, p, gr.basis(i) * p.g->m);
  return out;
}

bool Observable::depends_on(SlotName slot) const { return uses_slot(*root_, slot); }
bool Observable::has_group_dependence() const { return uses_group(*root_); }

std::string Observable::print() const {
  std::ostringstream os;
  os.precision(17);
  print_node(*root_, os);
  return os.str();
}

Observable parse(const std::string& source, SpaceId space, GroupId group) {
  return Observable(space, group, Parser(source, space, group).run());
}

Observable observable_product(const Observable& f, const Observable& g) {
  if (f.space() != g.space() || f.group() != g.group())
    throw usage_error("observable_product: mismatched observables");
  return Observable(f.space(), f.group(), nd_mul(f.root(), g.root()));
}

Observable observable_from_node(SpaceId space, GroupId group, NodePtr n) {
  return Observable(space, group, std::move(n));
}

namespace {

SlotName map_slot(SlotName s, const std::vector<std::pair<SlotName, SlotName>>& mapping) {
  for (const auto& [from, to] : mapping)
    if (from == s) return to;
  throw usage_error(std::string("rename_slots: slot ") + to_string(s) + " is not mapped");
}

NodePtr rename_node(const NodePtr& n,
                    const std::vector<std::pair<SlotName, SlotName>>& mapping) {
  switch (n->kind) {
    case Node::Kind::COORD:
      return nd_coord(map_slot(n->slot, mapping), n->index);
    case Node::Kind::ADD:
      return nd_add(rename_node(n->a, mapping), rename_node(n->b, mapping));
    case Node::Kind::MUL:
      return nd_mul(rename_node(n->a, mapping), rename_node(n->b, mapping));
    case Node::Kind::NEG:
      return nd_neg(rename_node(n->a, mapping));
    case Node::Kind::QFORM: {
      Node m = *n;
      m.slot = map_slot(n->slot, mapping);
      m.a = m.b = nullptr;
      return std::make_shared<const Node>(std::move(m));
    }
    case Node::Kind::PAIR: {
      Node m = *n;
      m.slot = map_slot(n->slot, mapping);
      m.slot2 = map_slot(n->slot2, mapping);
      return std::make_shared<const Node>(std::move(m));
    }
    default:
      return n;
  }
}

}  // namespace

Observable rename_slots(const Observable& f, SpaceId new_space,
                        const std::vector<std::pair<SlotName, SlotName>>& mapping) {
  if (f.has_group_dependence() && !has_slot(new_space, SlotName::G))
    throw usage_error("rename_slots: group functionals on a space without a group slot");
  return Observable(new_space, f.group(), rename_node(f.root(), mapping));
}

}  // namespace gmech
