#include "oclone/kind.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "oclone/io.hpp"
#include "oclone/random_gen.hpp"

namespace oclone {

namespace {

const Letter kA{"a", 2};
const Letter kB{"b", 2};

bool is_ab(const Letter& l) { return l == kA || l == kB; }

void require_ab(const FiniteTerm& t) {
  for_each_node(t, [](const FiniteTerm::NodePtr& n) {
    if (!n->is_port() && !is_ab(n->label()))
      fail(Errc::WrongAlphabet,
           "letters must come from {a:2, b:2}; got " + n->label().name + ":" +
               std::to_string(n->label().rank));
  });
}

void require_ab(const TermGraph& g) {
  for (int v = 0; v < g.size(); ++v) {
    const auto& vx = g.at(v);
    if (!vx.is_port() && !is_ab(vx.lab()))
      fail(Errc::WrongAlphabet,
           "letters must come from {a:2, b:2}; got " + vx.lab().name + ":" +
               std::to_string(vx.lab().rank));
  }
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

// ============================================================================
// KindElement
// ============================================================================

KindElement KindElement::tag(int kind, int rank) {
  if (kind < 1 || kind > 3)
    fail(Errc::Malformed, "tags exist for kinds 1..3; got " + std::to_string(kind));
  if (rank < 0) fail(Errc::Malformed, "negative rank " + std::to_string(rank));
  if (kind == 3 && rank == 0)
    fail(Errc::Kind3RankZero, "a kind-3 tree repeats some port, so its rank is at least 1");
  return KindElement(kind, rank, std::nullopt);
}

KindElement KindElement::kind4(FiniteTerm t) {
  require_ab(t);
  for (int c : port_counts_saturated(t))
    if (c != 1) fail(Errc::Malformed, "kind-4 elements use every port exactly once");
  const int r = t.rank();
  return KindElement(4, r, std::move(t));
}

const FiniteTerm& KindElement::term() const {
  if (!term_) fail(Errc::Malformed, "tag elements carry no term");
  return *term_;
}

bool operator==(const KindElement& x, const KindElement& y) {
  if (x.kind_ != y.kind_ || x.rank_ != y.rank_) return false;
  if (x.kind_ != 4) return true;
  return *x.term_ == *y.term_;
}

bool operator<(const KindElement& x, const KindElement& y) {
  if (x.kind_ != y.kind_) return x.kind_ < y.kind_;
  if (x.rank_ != y.rank_) return x.rank_ < y.rank_;
  if (x.kind_ != 4) return false;
  return compare(*x.term_, *y.term_) < 0;
}

// ============================================================================
// Element and CA-term text
// ============================================================================

std::string print_kind_element(const KindElement& e) {
  if (e.is_term()) return "K4 " + print_term(e.term());
  return "T" + std::to_string(e.kind()) + "/" + std::to_string(e.rank());
}

namespace {

KindElement parse_tag_token(const std::string& s) {
  if (s.size() >= 4 && s[0] == 'T' && std::isdigit(static_cast<unsigned char>(s[1])) &&
      s[2] == '/' && all_digits(s.substr(3)))
    return KindElement::tag(s[1] - '0', std::stoi(s.substr(3)));
  fail(Errc::ParseError, "kind elements read T<kind>/<rank> or K4 <term>; got '" + s + "'");
}

}  // namespace

KindElement parse_kind_element(const std::string& text) {
  const std::string s = trim(text);
  if (s.rfind("K4", 0) == 0 &&
      (s.size() == 2 || s[2] == ' ' || s[2] == '\t' || s[2] == '(')) {
    const std::string rest = trim(s.substr(2));
    if (rest.empty() || rest[0] != '(')
      fail(Errc::ParseError, "K4 must be followed by a parenthesized term");
    return KindElement::kind4(parse_term_sexpr(rest, RankedAlphabet::ab()));
  }
  return parse_tag_token(s);
}

namespace {

struct CATok {
  char kind;  // '(' or ')' or 'a' for atoms
  std::string text;
};

std::vector<CATok> lex_ca(const std::string& s) {
  std::vector<CATok> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      out.push_back({c, std::string(1, c)});
      ++i;
    } else {
      size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
             s[j] != ')')
        ++j;
      out.push_back({'a', s.substr(i, j - i)});
      i = j;
    }
  }
  return out;
}

class CaParser {
 public:
  explicit CaParser(std::vector<CATok> toks) : toks_(std::move(toks)) {}

  CATerm::NodePtr ca_node() {
    const CATok tk = peek();
    if (tk.kind == 'a') {
      if (!all_digits(tk.text))
        fail(Errc::ParseError, "expected a port number or '('; got '" + tk.text + "'");
      ++pos_;
      return CATerm::Node::make_port(std::stoi(tk.text));
    }
    if (tk.kind != '(') fail(Errc::ParseError, "expected '('");
    ++pos_;
    const CATok head = peek();
    if (head.kind != 'a') fail(Errc::ParseError, "expected an element after '('");
    ++pos_;
    KindElement e = head.text == "K4"
                        ? KindElement::kind4(FiniteTerm::adopt(letter_node()))
                        : parse_tag_token(head.text);
    std::vector<CATerm::NodePtr> kids;
    while (peek().kind != ')') kids.push_back(ca_node());
    ++pos_;
    if (static_cast<int>(kids.size()) != e.rank())
      fail(Errc::WrongArity, "element " + print_kind_element(e) + " has rank " +
                                 std::to_string(e.rank()) + " but " +
                                 std::to_string(kids.size()) + " children");
    return CATerm::Node::make(std::move(e), std::move(kids));
  }

  bool done() const { return pos_ == toks_.size(); }

 private:
  const CATok& peek() {
    if (pos_ >= toks_.size()) fail(Errc::ParseError, "unexpected end of input");
    return toks_[pos_];
  }

  FiniteTerm::NodePtr letter_node() {
    const CATok tk = peek();
    if (tk.kind == 'a') {
      if (!all_digits(tk.text))
        fail(Errc::ParseError, "expected a port number or '(' in the term; got '" + tk.text + "'");
      ++pos_;
      return FiniteTerm::Node::make_port(std::stoi(tk.text));
    }
    if (tk.kind != '(') fail(Errc::ParseError, "expected a term");
    ++pos_;
    const CATok name = peek();
    if (name.kind != 'a' || all_digits(name.text))
      fail(Errc::ParseError, "expected a letter name");
    ++pos_;
    std::vector<FiniteTerm::NodePtr> kids;
    while (peek().kind != ')') kids.push_back(letter_node());
    ++pos_;
    const int arity = static_cast<int>(kids.size());
    return FiniteTerm::Node::make(Letter{name.text, arity}, std::move(kids));
  }

  std::vector<CATok> toks_;
  size_t pos_ = 0;
};

void print_ca_node(const CATerm::NodePtr& n, std::ostringstream& out) {
  if (n->is_port()) {
    out << n->port();
    return;
  }
  out << '(' << print_kind_element(n->label());
  for (const auto& c : n->children()) {
    out << ' ';
    print_ca_node(c, out);
  }
  out << ')';
}

}  // namespace

std::string print_ca_term(const CATerm& t) {
  std::ostringstream out;
  print_ca_node(t.root(), out);
  return out.str();
}

CATerm parse_ca_term(const std::string& text) {
  CaParser p(lex_ca(text));
  CATerm::NodePtr root = p.ca_node();
  if (!p.done()) fail(Errc::ParseError, "trailing text after the term");
  return CATerm::adopt(std::move(root));
}

// ============================================================================
// CA-graph text
// ============================================================================

std::string print_ca_graph_file(const CAGraph& g) {
  std::ostringstream out;
  out << "rank " << g.rank() << "\n";
  for (int v = 0; v < g.size(); ++v) {
    const auto& vx = g.at(v);
    out << v << ": ";
    if (vx.is_port()) {
      out << "port " << vx.port();
    } else {
      out << print_kind_element(vx.lab());
      for (int s : vx.succ) out << ' ' << s;
    }
    out << "\n";
  }
  return out.str();
}

CAGraph parse_ca_graph_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto err = [&lineno](const std::string& m) {
    fail(Errc::ParseError, "line " + std::to_string(lineno) + ": " + m);
  };

  bool have_rank = false;
  int declared = 0;
  std::vector<CAGraph::Vertex> vs;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (!have_rank) {
      std::istringstream ls(s);
      std::string kw, extra;
      int n = -1;
      if (!(ls >> kw) || kw != "rank" || !(ls >> n) || n < 0 || (ls >> extra))
        err("expected 'rank <n>' first");
      declared = n;
      have_rank = true;
      continue;
    }
    const size_t colon = s.find(':');
    if (colon == std::string::npos) err("expected '<id>: <label> <successors>'");
    const std::string id_text = trim(s.substr(0, colon));
    if (!all_digits(id_text)) err("vertex id must be a number");
    if (std::stoi(id_text) != static_cast<int>(vs.size()))
      err("vertex ids must be 0, 1, 2, ... in order");
    std::string rest = trim(s.substr(colon + 1));
    if (rest.rfind("port", 0) == 0 &&
        (rest.size() == 4 || std::isspace(static_cast<unsigned char>(rest[4])))) {
      std::istringstream ls(rest.substr(4));
      int p = 0;
      std::string extra;
      if (!(ls >> p) || (ls >> extra)) err("expected 'port <i>'");
      vs.push_back({p, {}});
      continue;
    }
    KindElement e = KindElement::tag(1, 0);
    std::string tail;
    if (rest.rfind("K4", 0) == 0) {
      const std::string after = trim(rest.substr(2));
      if (after.empty() || after[0] != '(') err("K4 must be followed by a parenthesized term");
      int depth = 0;
      size_t end = std::string::npos;
      for (size_t i = 0; i < after.size(); ++i) {
        if (after[i] == '(') ++depth;
        if (after[i] == ')' && --depth == 0) {
          end = i;
          break;
        }
      }
      if (end == std::string::npos) err("unbalanced parentheses in the K4 term");
      e = KindElement::kind4(parse_term_sexpr(after.substr(0, end + 1), RankedAlphabet::ab()));
      tail = after.substr(end + 1);
    } else {
      std::istringstream ls(rest);
      std::string tok;
      ls >> tok;
      e = parse_tag_token(tok);
      std::getline(ls, tail);
    }
    std::vector<int> succ;
    std::istringstream ss(tail);
    std::string tok;
    while (ss >> tok) {
      if (!all_digits(tok)) err("successors must be vertex ids; got '" + tok + "'");
      succ.push_back(std::stoi(tok));
    }
    if (static_cast<int>(succ.size()) != e.rank())
      fail(Errc::WrongArity, "line " + std::to_string(lineno) + ": element " +
                                 print_kind_element(e) + " has rank " +
                                 std::to_string(e.rank()) + " but " +
                                 std::to_string(succ.size()) + " successors");
    vs.push_back({std::move(e), std::move(succ)});
  }
  if (!have_rank) err("expected 'rank <n>'");
  CAGraph g = CAGraph::adopt(std::move(vs));
  if (g.rank() != declared)
    err("declared rank " + std::to_string(declared) + " but the ports give rank " +
        std::to_string(g.rank()));
  return g;
}

// ============================================================================
// classify
// ============================================================================

KindElement classify(const FiniteTerm& t) {
  require_ab(t);
  for (int c : port_counts_saturated(t))
    if (c >= 2) return KindElement::tag(3, t.rank());
  return KindElement::kind4(t);
}

KindElement classify(const TermGraph& g) {
  require_ab(g);
  // A port-free subtree of a regular tree is regular, and a regular tree has
  // finitely many distinct subtrees while infinitely many nodes, so none of
  // its subtrees is antiregular: the port-free region settles kind 1.
  if (!every_subtree_has_port(g)) return KindElement::tag(1, g.rank());
  for (int name = 1; name <= g.rank(); ++name)
    if (port_multiplicity(g, name) == Multiplicity::Many) return KindElement::tag(3, g.rank());
  // Portful with every port hit once forces acyclicity: a vertex on a cycle
  // reaches some port both around and past the loop, inflating that port's
  // multiplicity. graph_to_term is therefore safe.
  return KindElement::kind4(graph_to_term(g));
}

// ============================================================================
// classify_lazy
// ============================================================================

PartialVerdict classify_lazy(const LazyTree& t, int depth_budget, int witness_budget) {
  if (depth_budget <= 0 || witness_budget <= 0)
    fail(Errc::BudgetZero, "both exploration budgets must be positive");
  if (t.rank < 0) fail(Errc::Malformed, "negative rank");
  if (!t.label_at) fail(Errc::Malformed, "missing label oracle");

  struct Item {
    Address addr;
    int depth;
  };
  std::deque<Item> queue;
  queue.push_back({Address{}, 0});
  std::map<Address, std::variant<int, Letter>> seen;
  std::map<int, int> port_seen;  // name -> count, saturated at 2
  int queries = 0;
  bool cut = false;

  while (!queue.empty()) {
    if (queries == witness_budget) break;
    Item it = std::move(queue.front());
    queue.pop_front();
    std::variant<int, Letter> l = t.label_at(it.addr);
    ++queries;
    if (std::holds_alternative<int>(l)) {
      const int name = std::get<int>(l);
      if (name < 1) fail(Errc::Malformed, "port names start at 1");
      if (name > t.rank)
        fail(Errc::Malformed, "port " + std::to_string(name) + " exceeds the declared rank " +
                                  std::to_string(t.rank));
      int& c = port_seen[name];
      c = std::min(2, c + 1);
      seen.emplace(std::move(it.addr), std::move(l));
    } else {
      const Letter& letter = std::get<Letter>(l);
      if (!is_ab(letter))
        fail(Errc::WrongAlphabet, "letters must come from {a:2, b:2}; got " + letter.name + ":" +
                                      std::to_string(letter.rank));
      if (it.depth == depth_budget) {
        cut = true;
        continue;
      }
      for (int i = 0; i < letter.rank; ++i) {
        Address a = it.addr;
        a.push_back(i);
        queue.push_back({std::move(a), it.depth + 1});
      }
      seen.emplace(std::move(it.addr), std::move(l));
    }
  }
  cut = cut || !queue.empty();

  PartialVerdict out;
  if (!cut) {
    // Every branch ended in a port: the tree is finite and fully known.
    std::function<FiniteTerm::NodePtr(Address&)> build = [&](Address& a) -> FiniteTerm::NodePtr {
      const auto& v = seen.at(a);
      if (std::holds_alternative<int>(v)) return FiniteTerm::Node::make_port(std::get<int>(v));
      const Letter& l = std::get<Letter>(v);
      std::vector<FiniteTerm::NodePtr> kids;
      kids.reserve(static_cast<size_t>(l.rank));
      for (int i = 0; i < l.rank; ++i) {
        a.push_back(i);
        kids.push_back(build(a));
        a.pop_back();
      }
      return FiniteTerm::Node::make(l, std::move(kids));
    };
    Address root;
    FiniteTerm whole = FiniteTerm::adopt(build(root));
    if (whole.rank() != t.rank)
      fail(Errc::Malformed, "declared rank " + std::to_string(t.rank) +
                                " but the ports give rank " + std::to_string(whole.rank()));
    KindElement e = classify(whole);
    out.status = PartialVerdict::Status::Definite;
    out.candidates = {e.kind()};
    out.element = std::move(e);
    out.fully_explored = true;
    out.evidence = "fully explored " + std::to_string(queries) + " labels; the tree is finite";
    return out;
  }

  std::vector<int> cands = {1, 2, 3, 4};
  auto erase_kind = [&cands](int k) {
    const auto it = std::find(cands.begin(), cands.end(), k);
    if (it == cands.end()) return false;
    cands.erase(it);
    return true;
  };

  // Rank arithmetic alone: kind 3 repeats a port and kind 4 uses each of its
  // ports once but at least two of them (binary letters), so low ranks
  // exclude them without any inspection.
  if (t.rank == 0) {
    erase_kind(3);
    erase_kind(4);
  } else if (t.rank == 1) {
    erase_kind(4);
  }

  bool refuted = false;
  bool reuse = false;
  for (const auto& [name, count] : port_seen) reuse = reuse || count >= 2;
  if (reuse) refuted = erase_kind(4) || refuted;
  if (t.certified(kCertPortsEverywhere)) {
    refuted = erase_kind(1) || refuted;
    refuted = erase_kind(2) || refuted;
  }
  if (t.certified(kCertAntiregular)) refuted = erase_kind(1) || refuted;

  std::ostringstream ev;
  ev << "explored " << queries << " labels within depth " << depth_budget;
  if (reuse) ev << "; some port occurs twice";
  if (t.certificate) ev << "; certificate '" << *t.certificate << "'";

  if (cands.empty())
    fail(Errc::Malformed, "certificate contradicts the declared rank or the observed structure");
  out.candidates = cands;
  out.evidence = ev.str();
  if (cands.size() == 1) {
    if (cands[0] == 4)
      fail(Errc::Malformed, "a bounded inspection cannot pin kind 4 without the whole tree");
    out.status = PartialVerdict::Status::Definite;
    out.element = KindElement::tag(cands[0], t.rank);
  } else {
    out.status = refuted ? PartialVerdict::Status::RefutedCandidates
                         : PartialVerdict::Status::Unknown;
  }
  return out;
}

// ============================================================================
// hom_h and recognition
// ============================================================================

namespace {
constexpr int kLazyDepthBudget = 32;
constexpr int kLazyWitnessBudget = 50000;
}  // namespace

KindElement hom_h(const FiniteTerm& t) { return classify(t); }
KindElement hom_h(const TermGraph& g) { return classify(g); }

KindElement hom_h(const LazyTree& t) {
  PartialVerdict v = classify_lazy(t, kLazyDepthBudget, kLazyWitnessBudget);
  if (v.status != PartialVerdict::Status::Definite)
    fail(Errc::Undetermined, "bounded exploration cannot settle the kind (" + v.evidence + ")");
  return *v.element;
}

bool is_accepting_element(const KindElement& e) { return e.kind() == 2 && e.rank() == 0; }

bool recognizes_densely_antiregular(const TermGraph& g) {
  if (g.rank() != 0)
    fail(Errc::NonZeroRank, "recognition reads rank-0 inputs; rank is " + std::to_string(g.rank()));
  return is_accepting_element(hom_h(g));
}

bool recognizes_densely_antiregular(const LazyTree& t) {
  if (t.rank != 0)
    fail(Errc::NonZeroRank, "recognition reads rank-0 inputs; rank is " + std::to_string(t.rank));
  return is_accepting_element(hom_h(t));
}

// ============================================================================
// The product
// ============================================================================

const char* diagram_case_name(DiagramCase c) {
  switch (c) {
    case DiagramCase::Kind1Label: return "kind-1-label";
    case DiagramCase::UnguardedPortFree: return "unguarded-port-free";
    case DiagramCase::GuardedPortFree: return "guarded-port-free";
    case DiagramCase::Kind2Label: return "kind-2-label";
    case DiagramCase::Kind3Label: return "kind-3-label";
    case DiagramCase::RepeatedPort: return "repeated-port";
    case DiagramCase::Flattened: return "flattened";
  }
  return "?";
}

PrOutcome pr_A_traced(const CATerm& t) {
  const int n = t.rank();
  bool k1 = false, k2 = false, k3 = false;
  for_each_node(t, [&](const CATerm::NodePtr& nd) {
    if (nd->is_port()) return;
    const int k = nd->label().kind();
    k1 = k1 || k == 1;
    k2 = k2 || k == 2;
    k3 = k3 || k == 3;
  });
  // A kind-1 label contributes a port-free subtree with no antiregular
  // subtree below some node, and plugging children cannot repair density.
  if (k1) return {KindElement::tag(1, n), DiagramCase::Kind1Label};

  // has_port: the node's subtree mentions a port. sees_k2: some node of the
  // subtree carries a kind-2 label. A port-free subtree of the flattening
  // either sits inside a kind-2 element (densely antiregular by that
  // element) or corresponds to a port-free subtree here, whose density is
  // exactly "a kind-2 label occurs inside".
  std::unordered_map<const CATerm::Node*, bool> has_port, sees_k2;
  bool all_portful = true;
  bool guarded = true;
  for_each_node(t, [&](const CATerm::NodePtr& nd) {
    bool hp = nd->is_port();
    bool sk = !nd->is_port() && nd->label().kind() == 2;
    if (!nd->is_port())
      for (const auto& c : nd->children()) {
        hp = hp || has_port.at(c.get());
        sk = sk || sees_k2.at(c.get());
      }
    has_port[nd.get()] = hp;
    sees_k2[nd.get()] = sk;
    all_portful = all_portful && hp;
    guarded = guarded && (hp || sk);
  });
  if (!all_portful) {
    if (!guarded) return {KindElement::tag(1, n), DiagramCase::UnguardedPortFree};
    return {KindElement::tag(2, n), DiagramCase::GuardedPortFree};
  }
  if (k2) return {KindElement::tag(2, n), DiagramCase::Kind2Label};
  if (k3) return {KindElement::tag(3, n), DiagramCase::Kind3Label};
  // All labels kind 4 use their ports once, so the flattening repeats a port
  // exactly when this term does.
  for (int c : port_counts_saturated(t))
    if (c >= 2) return {KindElement::tag(3, n), DiagramCase::RepeatedPort};
  FiniteTerm flat = flatten(map_labels(t, [](const KindElement& e) { return e.term(); }));
  return {KindElement::kind4(std::move(flat)), DiagramCase::Flattened};
}

PrOutcome pr_A_traced(const CAGraph& g) {
  const int n = g.rank();
  bool k1 = false, k2 = false, k3 = false;
  for (int v = 0; v < g.size(); ++v) {
    if (g.at(v).is_port()) continue;
    const int k = g.at(v).lab().kind();
    k1 = k1 || k == 1;
    k2 = k2 || k == 2;
    k3 = k3 || k == 3;
  }
  if (k1) return {KindElement::tag(1, n), DiagramCase::Kind1Label};

  const std::vector<bool> rp = reaches_port(g);
  bool all_portful = true;
  for (int v = 0; v < g.size(); ++v) all_portful = all_portful && rp[static_cast<size_t>(v)];
  if (!all_portful) {
    // Port-free vertices unfold to the port-free subtrees of the flattening
    // (kind-3/4 element regions above them stay portful). Density holds
    // exactly when every such vertex reaches a kind-2 label: kind-3/4
    // regions contribute no antiregular subtrees of their own on a regular
    // input, an infinite all-kind-4 gluing being regular here.
    std::vector<std::vector<int>> pred(static_cast<size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v)
      for (int s : g.at(v).succ) pred[static_cast<size_t>(s)].push_back(v);
    std::vector<bool> hit(static_cast<size_t>(g.size()), false);
    std::deque<int> q;
    for (int v = 0; v < g.size(); ++v)
      if (!g.at(v).is_port() && g.at(v).lab().kind() == 2) {
        hit[static_cast<size_t>(v)] = true;
        q.push_back(v);
      }
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int p : pred[static_cast<size_t>(u)])
        if (!hit[static_cast<size_t>(p)]) {
          hit[static_cast<size_t>(p)] = true;
          q.push_back(p);
        }
    }
    for (int v = 0; v < g.size(); ++v)
      if (!rp[static_cast<size_t>(v)] && !hit[static_cast<size_t>(v)])
        return {KindElement::tag(1, n), DiagramCase::UnguardedPortFree};
    return {KindElement::tag(2, n), DiagramCase::GuardedPortFree};
  }
  if (k2) return {KindElement::tag(2, n), DiagramCase::Kind2Label};
  if (k3) return {KindElement::tag(3, n), DiagramCase::Kind3Label};
  for (int name = 1; name <= n; ++name)
    if (port_multiplicity(g, name) == Multiplicity::Many)
      return {KindElement::tag(3, n), DiagramCase::RepeatedPort};
  // All labels kind 4 and every port hit once: acyclic, as in classify.
  CATerm t = graph_to_term(g);
  FiniteTerm flat = flatten(map_labels(t, [](const KindElement& e) { return e.term(); }));
  return {KindElement::kind4(std::move(flat)), DiagramCase::Flattened};
}

KindElement pr_A(const CATerm& t) { return pr_A_traced(t).value; }
KindElement pr_A(const CAGraph& g) { return pr_A_traced(g).value; }

// ============================================================================
// Clone laws
// ============================================================================

namespace {

std::string print_nested_ca(const Term<CATerm>::NodePtr& n) {
  if (n->is_port()) return std::to_string(n->port());
  std::string out = "([" + print_ca_term(n->label()) + "]";
  for (const auto& c : n->children()) out += " " + print_nested_ca(c);
  return out + ")";
}

}  // namespace

LawReport check_clone_laws(uint64_t seed, int trials) {
  return check_clone_laws(seed, trials, [](const CATerm& t) { return pr_A(t); });
}

LawReport check_clone_laws(uint64_t seed, int trials,
                           const std::function<KindElement(const CATerm&)>& product) {
  LawReport rep;
  Rng rng(seed);

  // Axiom 1: pr(unit(a)) = a. Tags of rank <= 6 exhaustively, then sampled
  // kind-4 elements up to the trial count.
  std::vector<KindElement> elems;
  for (int kind = 1; kind <= 3; ++kind)
    for (int rank = 0; rank <= 6; ++rank) {
      if (kind == 3 && rank == 0) continue;
      elems.push_back(KindElement::tag(kind, rank));
    }
  while (static_cast<int>(elems.size()) < trials)
    elems.push_back(KindElement::kind4(random_kind4_term(rng, rng.range(2, 5))));
  for (const KindElement& a : elems) {
    ++rep.unit_trials;
    const KindElement got = product(unit(a));
    if (!(got == a)) {
      ++rep.unit_failures;
      if (rep.first_failure.empty())
        rep.first_failure = "product of the unit of " + print_kind_element(a) + " came back as " +
                            print_kind_element(got);
    }
  }

  // Axiom 2: pr(flatten(s)) = pr(s with the product applied to each label).
  for (int i = 0; i < trials; ++i) {
    const Term<CATerm> s = random_nested_ca_term(rng, rng.range(0, 3), rng.range(1, 2));
    ++rep.flatten_trials;
    const KindElement lhs = product(flatten(s));
    const KindElement rhs =
        product(map_labels(s, [&](const CATerm& inner) { return product(inner); }));
    if (!(lhs == rhs)) {
      ++rep.flatten_failures;
      if (rep.first_failure.empty())
        rep.first_failure = "flatten route " + print_kind_element(lhs) + ", pointwise route " +
                            print_kind_element(rhs) + " on " + print_nested_ca(s.root());
    }
  }
  return rep;
}

// ============================================================================
// Finite generation
// ============================================================================

namespace {

std::vector<KindElement> make_generators() {
  std::vector<KindElement> g;
  for (int kind = 1; kind <= 3; ++kind)
    for (int rank = 0; rank <= 2; ++rank) {
      if (kind == 3 && rank == 0) continue;
      g.push_back(KindElement::tag(kind, rank));
    }
  for (const Letter& l : {kA, kB}) {
    g.push_back(KindElement::kind4(unit(l)));
    g.push_back(KindElement::kind4(
        FiniteTerm::adopt(FiniteTerm::Node::make(l, {FiniteTerm::Node::make_port(2), FiniteTerm::Node::make_port(1)}))));
  }
  return g;
}

// A layout is a generator-labeled tree whose ports are placeholders (all
// named 1); slot values are assigned by a DFS walk at materialization time.
struct Layout {
  CATerm::NodePtr root;
  int slots = 0;
};

const std::vector<Layout>& layouts_with(int node_count) {
  static std::vector<std::vector<Layout>> cache(1);
  while (static_cast<int>(cache.size()) <= node_count) {
    const int k = static_cast<int>(cache.size());
    std::vector<Layout> out;
    const auto slot = [] { return CATerm::Node::make_port(1); };
    for (const KindElement& e : GeneratorSearch::generators()) {
      switch (e.rank()) {
        case 0:
          if (k == 1) out.push_back({CATerm::Node::make(e, {}), 0});
          break;
        case 1:
          if (k == 1) {
            out.push_back({CATerm::Node::make(e, {slot()}), 1});
          } else {
            for (const Layout& sub : cache[static_cast<size_t>(k - 1)])
              out.push_back({CATerm::Node::make(e, {sub.root}), sub.slots});
          }
          break;
        case 2:
          if (k == 1) {
            out.push_back({CATerm::Node::make(e, {slot(), slot()}), 2});
          } else {
            for (const Layout& sub : cache[static_cast<size_t>(k - 1)]) {
              out.push_back({CATerm::Node::make(e, {slot(), sub.root}), sub.slots + 1});
              out.push_back({CATerm::Node::make(e, {sub.root, slot()}), sub.slots + 1});
            }
            for (int k1 = 1; k1 <= k - 2; ++k1)
              for (const Layout& l1 : cache[static_cast<size_t>(k1)])
                for (const Layout& l2 : cache[static_cast<size_t>(k - 1 - k1)])
                  out.push_back({CATerm::Node::make(e, {l1.root, l2.root}), l1.slots + l2.slots});
          }
          break;
        default:
          break;
      }
    }
    cache.push_back(std::move(out));
  }
  return cache[static_cast<size_t>(node_count)];
}

CATerm::NodePtr materialize(const CATerm::NodePtr& n, const std::vector<int>& names, int& next) {
  if (n->is_port()) return CATerm::Node::make_port(names[static_cast<size_t>(next++)]);
  std::vector<CATerm::NodePtr> kids;
  kids.reserve(n->children().size());
  for (const auto& c : n->children()) kids.push_back(materialize(c, names, next));
  return CATerm::Node::make(n->label(), std::move(kids));
}

// Surjections [0, slots) -> {1..rank} in lexicographic order.
void for_each_surjection(int slots, int rank, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> names(static_cast<size_t>(slots));
  std::vector<int> uses(static_cast<size_t>(rank) + 1, 0);
  int missing = rank;
  std::function<void(int)> rec = [&](int i) {
    if (missing > slots - i) return;
    if (i == slots) {
      f(names);
      return;
    }
    for (int v = 1; v <= rank; ++v) {
      names[static_cast<size_t>(i)] = v;
      if (++uses[static_cast<size_t>(v)] == 1) --missing;
      rec(i + 1);
      if (--uses[static_cast<size_t>(v)] == 0) ++missing;
    }
  };
  rec(0);
  return;
}

}  // namespace

GeneratorSearch::GeneratorSearch() = default;

const std::vector<KindElement>& GeneratorSearch::generators() {
  static const std::vector<KindElement> gs = make_generators();
  return gs;
}

void GeneratorSearch::fill_level(int node_count, int rank) {
  // The first witness in size-then-lexicographic order is the minimum under
  // term comparison within this size class; terms compare by rank first, so
  // only terms of the target rank need materializing.
  std::map<KindElement, CATerm> best;
  const auto consider = [&](const CATerm& cand) {
    const KindElement v = pr_A(cand);
    if (v.is_term()) return;
    const auto it = best.find(v);
    if (it == best.end())
      best.emplace(v, cand);
    else if (compare(cand, it->second) < 0)
      it->second = cand;
  };
  for (const Layout& layout : layouts_with(node_count)) {
    if (rank == 0) {
      if (layout.slots == 0) consider(CATerm::adopt(layout.root));
      continue;
    }
    if (layout.slots < rank) continue;
    for_each_surjection(layout.slots, rank, [&](const std::vector<int>& names) {
      int next = 0;
      consider(CATerm::adopt(materialize(layout.root, names, next)));
    });
  }
  for (auto& [e, t] : best) found_.emplace(e, std::move(t));
}

CATerm GeneratorSearch::decompose(const KindElement& target, int rank_bound) {
  if (target.rank() > rank_bound)
    fail(Errc::TooLarge, "element rank " + std::to_string(target.rank()) +
                             " exceeds the bound " + std::to_string(rank_bound));
  if (target.is_term()) {
    // Mirror the term node by node; the flattening rule reassembles it.
    CATerm witness =
        map_labels(target.term(), [](const Letter& l) { return KindElement::kind4(unit(l)); });
    if (!(pr_A(witness) == target))
      fail(Errc::Malformed, "mirror witness failed product verification");
    return witness;
  }
  const int budget = std::max(1, rank_bound - 1);
  int& filled = filled_[target.rank()];
  for (int k = 1; k <= budget; ++k) {
    if (k > filled) {
      fill_level(k, target.rank());
      filled = k;
    }
    const auto it = found_.find(target);
    if (it != found_.end()) return it->second;
  }
  fail(Errc::SearchExhausted, "no generator witness with at most " + std::to_string(budget) +
                                  " nodes (rank bound " + std::to_string(rank_bound) + ")");
}

CATerm generator_decompose(const KindElement& target, int rank_bound) {
  static GeneratorSearch search;
  return search.decompose(target, rank_bound);
}

}  // namespace oclone
