#include "oclone/anti.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <variant>

#include "oclone/error.hpp"
#include "oclone/random_gen.hpp"

namespace oclone {

namespace {

bool is_palindrome(const std::string& w) {
  for (size_t i = 0, j = w.size(); i + 1 < j; ++i, --j)
    if (w[i] != w[j - 1]) return false;
  return true;
}

void check_word(const std::string& w) {
  for (char c : w)
    if (c != '0' && c != '1')
      fail(Errc::Malformed, std::string("words are over {0,1}; got '") + c + "'");
}

}  // namespace

// ============================================================================
// Built-in predicates and the expression sublanguage
// ============================================================================

WordLanguagePredicate builtin_predicate(const std::string& name) {
  if (name == "palindromes")
    return {[](const std::string& w) { return is_palindrome(w); }, "palindromes", true};
  if (name == "all") return {[](const std::string&) { return true; }, "all", false};
  if (name == "empty") return {[](const std::string&) { return false; }, "empty", false};
  if (name == "zeros-star")
    return {[](const std::string& w) { return w.find('1') == std::string::npos; }, "zeros-star",
            false};
  fail(Errc::ParseError,
       "unknown predicate '" + name + "'; built-ins are palindromes, all, empty, zeros-star");
}

namespace {

struct PredNode {
  enum class Op { True, False, Palindrome, Is, Begins, Ends, Has, Length, Not, And, Or };
  enum class Cmp { Eq, Ne, Le, Ge, Lt, Gt };

  Op op = Op::True;
  std::string word;
  Cmp cmp = Cmp::Eq;
  int bound = 0;
  std::shared_ptr<const PredNode> lhs, rhs;
};

using PredPtr = std::shared_ptr<const PredNode>;

bool eval_pred(const PredNode& n, const std::string& w) {
  using Op = PredNode::Op;
  switch (n.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Palindrome: return is_palindrome(w);
    case Op::Is: return w == n.word;
    case Op::Begins:
      return w.size() >= n.word.size() && w.compare(0, n.word.size(), n.word) == 0;
    case Op::Ends:
      return w.size() >= n.word.size() &&
             w.compare(w.size() - n.word.size(), n.word.size(), n.word) == 0;
    case Op::Has: return w.find(n.word) != std::string::npos;
    case Op::Length: {
      const long long len = static_cast<long long>(w.size());
      switch (n.cmp) {
        case PredNode::Cmp::Eq: return len == n.bound;
        case PredNode::Cmp::Ne: return len != n.bound;
        case PredNode::Cmp::Le: return len <= n.bound;
        case PredNode::Cmp::Ge: return len >= n.bound;
        case PredNode::Cmp::Lt: return len < n.bound;
        case PredNode::Cmp::Gt: return len > n.bound;
      }
      return false;
    }
    case Op::Not: return !eval_pred(*n.lhs, w);
    case Op::And: return eval_pred(*n.lhs, w) && eval_pred(*n.rhs, w);
    case Op::Or: return eval_pred(*n.lhs, w) || eval_pred(*n.rhs, w);
  }
  return false;
}

enum class PTok { Ident, Word, Nat, Cmp, LParen, RParen };

struct PToken {
  PTok kind;
  std::string text;
};

std::vector<PToken> lex_predicate(const std::string& s) {
  std::vector<PToken> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({PTok::LParen, "("});
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back({PTok::RParen, ")"});
      ++i;
      continue;
    }
    if (c == '"') {
      const size_t j = s.find('"', i + 1);
      if (j == std::string::npos) fail(Errc::ParseError, "unterminated word literal");
      std::string w = s.substr(i + 1, j - i - 1);
      for (char d : w)
        if (d != '0' && d != '1')
          fail(Errc::ParseError, std::string("word literals are over {0,1}; got '") + d + "'");
      out.push_back({PTok::Word, std::move(w)});
      i = j + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j - i > 9) fail(Errc::ParseError, "number too large: " + s.substr(i, j - i));
      out.push_back({PTok::Nat, s.substr(i, j - i)});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({PTok::Ident, s.substr(i, j - i)});
      i = j;
      continue;
    }
    if (c == '=' || c == '!' || c == '<' || c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({PTok::Cmp, s.substr(i, 2)});
        i += 2;
        continue;
      }
      if (c == '<' || c == '>') {
        out.push_back({PTok::Cmp, std::string(1, c)});
        ++i;
        continue;
      }
      fail(Errc::ParseError, std::string("stray '") + c + "'");
    }
    fail(Errc::ParseError, std::string("stray character '") + c + "'");
  }
  return out;
}

class PredParser {
 public:
  explicit PredParser(std::vector<PToken> ts) : ts_(std::move(ts)) {}

  PredPtr parse() {
    PredPtr p = parse_or();
    if (i_ < ts_.size())
      fail(Errc::ParseError, "unexpected '" + ts_[i_].text + "' after the expression");
    return p;
  }

 private:
  bool at_ident(const std::string& kw) const {
    return i_ < ts_.size() && ts_[i_].kind == PTok::Ident && ts_[i_].text == kw;
  }

  const PToken& take(PTok kind, const std::string& what) {
    if (i_ >= ts_.size()) fail(Errc::ParseError, "expected " + what + " at the end of input");
    if (ts_[i_].kind != kind)
      fail(Errc::ParseError, "expected " + what + ", got '" + ts_[i_].text + "'");
    return ts_[i_++];
  }

  PredPtr parse_or() {
    PredPtr lhs = parse_and();
    while (at_ident("or")) {
      ++i_;
      auto n = std::make_shared<PredNode>();
      n->op = PredNode::Op::Or;
      n->lhs = std::move(lhs);
      n->rhs = parse_and();
      lhs = std::move(n);
    }
    return lhs;
  }

  PredPtr parse_and() {
    PredPtr lhs = parse_not();
    while (at_ident("and")) {
      ++i_;
      auto n = std::make_shared<PredNode>();
      n->op = PredNode::Op::And;
      n->lhs = std::move(lhs);
      n->rhs = parse_not();
      lhs = std::move(n);
    }
    return lhs;
  }

  PredPtr parse_not() {
    if (at_ident("not")) {
      ++i_;
      auto n = std::make_shared<PredNode>();
      n->op = PredNode::Op::Not;
      n->lhs = parse_not();
      return n;
    }
    return parse_atom();
  }

  PredPtr parse_atom() {
    if (i_ >= ts_.size()) fail(Errc::ParseError, "expected a test at the end of input");
    if (ts_[i_].kind == PTok::LParen) {
      ++i_;
      PredPtr p = parse_or();
      take(PTok::RParen, "')'");
      return p;
    }
    const PToken& t = take(PTok::Ident, "a test");
    auto n = std::make_shared<PredNode>();
    if (t.text == "true") {
      n->op = PredNode::Op::True;
    } else if (t.text == "false") {
      n->op = PredNode::Op::False;
    } else if (t.text == "palindrome") {
      n->op = PredNode::Op::Palindrome;
    } else if (t.text == "is" || t.text == "begins" || t.text == "ends" || t.text == "has") {
      n->op = t.text == "is"       ? PredNode::Op::Is
              : t.text == "begins" ? PredNode::Op::Begins
              : t.text == "ends"   ? PredNode::Op::Ends
                                   : PredNode::Op::Has;
      n->word = take(PTok::Word, "a quoted word").text;
    } else if (t.text == "length") {
      n->op = PredNode::Op::Length;
      const std::string c = take(PTok::Cmp, "a comparison").text;
      n->cmp = c == "==" ? PredNode::Cmp::Eq
               : c == "!=" ? PredNode::Cmp::Ne
               : c == "<=" ? PredNode::Cmp::Le
               : c == ">=" ? PredNode::Cmp::Ge
               : c == "<"  ? PredNode::Cmp::Lt
                           : PredNode::Cmp::Gt;
      n->bound = std::stoi(take(PTok::Nat, "a number").text);
    } else {
      fail(Errc::ParseError, "unknown test '" + t.text + "'");
    }
    return n;
  }

  std::vector<PToken> ts_;
  size_t i_ = 0;
};

}  // namespace

WordLanguagePredicate parse_predicate(const std::string& text) {
  std::vector<PToken> ts = lex_predicate(text);
  if (ts.empty()) fail(Errc::ParseError, "empty predicate expression");
  PredPtr root = PredParser(std::move(ts)).parse();
  return {[root](const std::string& w) { return eval_pred(*root, w); }, text, false};
}

WordLanguagePredicate resolve_predicate(const std::string& text) {
  if (text == "palindromes" || text == "all" || text == "empty" || text == "zeros-star")
    return builtin_predicate(text);
  return parse_predicate(text);
}

// ============================================================================
// Language-to-tree encoding
// ============================================================================

LazyTree tree_from_language(const WordLanguagePredicate& pred) {
  if (!pred.member) fail(Errc::Malformed, "predicate has no membership function");
  LazyTree t;
  t.rank = 0;
  if (pred.certified_singleton_nerode) t.certificate = std::string(kCertAntiregular);
  std::function<bool(const std::string&)> member = pred.member;
  t.label_at = [member](const Address& a) -> std::variant<int, Letter> {
    std::string w(a.size(), '0');
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0) w[i] = '1';
    return member(w) ? Letter{"a", 2} : Letter{"b", 2};
  };
  return t;
}

// ============================================================================
// Nerode separation witnesses
// ============================================================================

std::optional<std::string> nerode_witness(const WordLanguagePredicate& pred, const std::string& u,
                                          const std::string& v, int maxlen) {
  check_word(u);
  check_word(v);
  if (u == v) fail(Errc::EqualWords, "a separation witness needs two distinct words");
  if (maxlen < 0) fail(Errc::Malformed, "witness length bound must be >= 0");

  std::string ubuf = u;
  std::string vbuf = v;
  for (int len = 0; len <= maxlen; ++len) {
    if (len > 20) fail(Errc::TooLarge, "witness enumeration past length 20 is infeasible");
    ubuf.resize(u.size() + static_cast<size_t>(len));
    vbuf.resize(v.size() + static_cast<size_t>(len));
    for (uint64_t m = 0; m < (uint64_t{1} << len); ++m) {
      for (int b = 0; b < len; ++b) {
        const char d = ((m >> (len - 1 - b)) & 1) ? '1' : '0';
        ubuf[u.size() + static_cast<size_t>(b)] = d;
        vbuf[v.size() + static_cast<size_t>(b)] = d;
      }
      if (pred.member(ubuf) != pred.member(vbuf))
        return ubuf.substr(u.size());
    }
  }
  return std::nullopt;
}

// ============================================================================
// Refutation search
// ============================================================================

// Nodes of the depth-(d+L) prefix in breadth-first order, which is also
// shortlex order on addresses. Children of one node are consecutive.
namespace {

struct PrefixNode {
  int parent;
  int which;
  int lab;
  int rank;
  int depth;
  int kids_off = 0;
  int kids_n = 0;
};

Address address_of(const std::vector<PrefixNode>& ns, int i) {
  Address a;
  for (int v = i; v != 0; v = ns[static_cast<size_t>(v)].parent)
    a.push_back(ns[static_cast<size_t>(v)].which);
  std::reverse(a.begin(), a.end());
  return a;
}

}  // namespace

std::optional<std::pair<Address, Address>> antiregular_refute(const LazyTree& t, int node_depth,
                                                              int witness_len) {
  if (node_depth < 0 || witness_len < 0) fail(Errc::Malformed, "budgets must be >= 0");
  constexpr size_t kNodeCap = size_t{1} << 22;
  const long long window = static_cast<long long>(node_depth) + witness_len;

  std::vector<PrefixNode> ns;
  std::map<std::variant<int, Letter>, int> lab_code;
  auto code_of = [&](const std::variant<int, Letter>& l) {
    const int next = static_cast<int>(lab_code.size());
    return lab_code.emplace(l, next).first->second;
  };
  auto rank_of_label = [](const std::variant<int, Letter>& l) {
    return std::holds_alternative<Letter>(l) ? std::get<Letter>(l).rank : 0;
  };

  {
    const std::variant<int, Letter> l = t.label_at(Address{});
    ns.push_back({-1, 0, code_of(l), rank_of_label(l), 0});
  }
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i].depth >= window) continue;
    const int r = ns[i].rank;
    if (r <= 0) continue;
    if (ns.size() + static_cast<size_t>(r) > kNodeCap)
      fail(Errc::TooLarge, "prefix exceeds " + std::to_string(kNodeCap) +
                               " nodes; lower the depth or witness budget");
    const int depth = ns[i].depth;
    ns[i].kids_off = static_cast<int>(ns.size());
    ns[i].kids_n = r;
    Address base = address_of(ns, static_cast<int>(i));
    for (int j = 0; j < r; ++j) {
      base.push_back(j);
      const std::variant<int, Letter> l = t.label_at(base);
      base.pop_back();
      ns.push_back({static_cast<int>(i), j, code_of(l), rank_of_label(l), depth + 1});
    }
  }

  // ids[i] after pass k identifies the depth-k unfolding below node i.
  // Passes read the previous level from a snapshot, so only nodes whose
  // whole window fits in the prefix are recomputed.
  const int n = static_cast<int>(ns.size());
  std::vector<int> ids(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = ns[static_cast<size_t>(i)].lab;
  std::vector<int> prev;
  std::vector<int> key;
  for (int k = 1; k <= witness_len; ++k) {
    if (window - k < 0) break;
    prev = ids;
    std::map<std::vector<int>, int> tab;
    for (int i = 0; i < n; ++i) {
      const PrefixNode& nd = ns[static_cast<size_t>(i)];
      if (nd.depth > window - k) continue;
      key.clear();
      key.push_back(nd.lab);
      for (int c = 0; c < nd.kids_n; ++c)
        key.push_back(prev[static_cast<size_t>(nd.kids_off + c)]);
      const int next = static_cast<int>(tab.size());
      ids[static_cast<size_t>(i)] = tab.emplace(key, next).first->second;
    }
    // A numeric fixpoint means every further pass preserves the partition
    // restricted to the nodes it still recomputes.
    if (ids == prev) break;
  }

  std::vector<int> shallow;
  for (int i = 0; i < n; ++i)
    if (ns[static_cast<size_t>(i)].depth <= node_depth) shallow.push_back(i);
  for (size_t a = 0; a < shallow.size(); ++a)
    for (size_t b = a + 1; b < shallow.size(); ++b)
      if (ids[static_cast<size_t>(shallow[a])] == ids[static_cast<size_t>(shallow[b])])
        return std::make_pair(address_of(ns, shallow[a]), address_of(ns, shallow[b]));
  return std::nullopt;
}

// ============================================================================
// The regular-trees-are-kind-1 experiment
// ============================================================================

std::pair<Address, Address> equal_subtree_pair(const TermGraph& g) {
  if (g.rank() != 0)
    fail(Errc::NonZeroRank, "equal subtrees are guaranteed only on rank-0 graphs");
  const TermGraph m = minimize_bisim(g);
  std::vector<int> seen(static_cast<size_t>(m.size()), -1);
  int v = 0;
  for (int depth = 0;; ++depth) {
    if (seen[static_cast<size_t>(v)] >= 0)
      return {Address(static_cast<size_t>(seen[static_cast<size_t>(v)]), 0),
              Address(static_cast<size_t>(depth), 0)};
    seen[static_cast<size_t>(v)] = depth;
    if (m.at(v).succ.empty())
      fail(Errc::SearchExhausted, "leftmost branch ended at a leaf before a class repeated");
    v = m.at(v).succ[0];
  }
}

ExperimentReport regular_kind1_experiment(uint64_t seed, int count, int size_bound) {
  if (count < 1) fail(Errc::Malformed, "experiment count must be >= 1");
  if (size_bound < 1) fail(Errc::Malformed, "size bound must be >= 1");
  Rng rng(seed);
  ExperimentReport rep;
  rep.samples.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    TermGraph g = random_term_graph(rng, 0, size_bound);
    KindElement e = classify(g);
    std::pair<Address, Address> repetition = equal_subtree_pair(g);
    ++rep.kind_histogram[e.kind()];
    rep.samples.push_back(ExperimentSample{std::move(g), std::move(e), std::move(repetition)});
  }
  return rep;
}

}  // namespace oclone
