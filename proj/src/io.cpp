#include "oclone/io.hpp"

#include <cctype>
#include <sstream>

namespace oclone {

namespace {

// --------------------------------------------------------------------------
// S-expression tokenizer: parens and atoms, whitespace-separated.
// --------------------------------------------------------------------------

struct Tokens {
  std::vector<std::string> toks;
  size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const {
    if (done()) fail(Errc::ParseError, "unexpected end of input");
    return toks[pos];
  }
  std::string next() {
    if (done()) fail(Errc::ParseError, "unexpected end of input");
    return toks[pos++];
  }
  void expect(const std::string& t) {
    if (next() != t) fail(Errc::ParseError, "expected '" + t + "'");
  }
};

Tokens tokenize_sexpr(const std::string& text) {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.toks.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '(' || c == ')') {
      flush();
      out.toks.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int parse_port_number(const std::string& s) {
  long v = std::stol(s);
  if (v < 1 || v > 1'000'000) fail(Errc::ParseError, "port number out of range: " + s);
  return static_cast<int>(v);
}

FiniteTerm::NodePtr parse_term_node(Tokens& tk, const RankedAlphabet& sigma) {
  if (is_number(tk.peek())) return FiniteTerm::Node::make_port(parse_port_number(tk.next()));
  tk.expect("(");
  std::string name = tk.next();
  if (name == "(" || name == ")") fail(Errc::ParseError, "expected a letter name");
  const Letter* l = sigma.find(name);
  if (!l) fail(Errc::UnknownLetter, "letter '" + name + "' not in alphabet");
  std::vector<FiniteTerm::NodePtr> kids;
  while (tk.peek() != ")") kids.push_back(parse_term_node(tk, sigma));
  tk.expect(")");
  return FiniteTerm::Node::make(*l, std::move(kids));
}

NestedFiniteTerm::NodePtr parse_nested_node(Tokens& tk, const RankedAlphabet& sigma) {
  if (is_number(tk.peek())) return NestedFiniteTerm::Node::make_port(parse_port_number(tk.next()));
  tk.expect("(");
  if (tk.peek() != "(")
    fail(Errc::ParseError, "nested term labels must themselves be parenthesized terms");
  FiniteTerm label = FiniteTerm::adopt(parse_term_node(tk, sigma));
  std::vector<NestedFiniteTerm::NodePtr> kids;
  while (tk.peek() != ")") kids.push_back(parse_nested_node(tk, sigma));
  tk.expect(")");
  return NestedFiniteTerm::Node::make(std::move(label), std::move(kids));
}

void print_term_node(const FiniteTerm::NodePtr& n, std::string& out) {
  if (n->is_port()) {
    out += std::to_string(n->port());
    return;
  }
  out += "(";
  out += n->label().name;
  for (const auto& c : n->children()) {
    out += " ";
    print_term_node(c, out);
  }
  out += ")";
}

void print_nested_node(const NestedFiniteTerm::NodePtr& n, std::string& out) {
  if (n->is_port()) {
    out += std::to_string(n->port());
    return;
  }
  out += "(";
  out += print_term(n->label());
  for (const auto& c : n->children()) {
    out += " ";
    print_nested_node(c, out);
  }
  out += ")";
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

RankedAlphabet parse_alphabet_line(const std::string& line) {
  std::vector<std::string> words = split_ws(line);
  if (words.empty() || words[0] != "alphabet")
    fail(Errc::ParseError, "expected 'alphabet <name>:<rank> ...'");
  std::vector<Letter> letters;
  for (size_t i = 1; i < words.size(); ++i) {
    size_t colon = words[i].find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= words[i].size())
      fail(Errc::ParseError, "bad letter declaration '" + words[i] + "'");
    std::string name = words[i].substr(0, colon);
    std::string rank = words[i].substr(colon + 1);
    if (!is_number(rank)) fail(Errc::ParseError, "bad rank in '" + words[i] + "'");
    letters.push_back({name, static_cast<int>(std::stol(rank))});
  }
  if (letters.empty()) fail(Errc::ParseError, "alphabet with no letters");
  return RankedAlphabet(std::move(letters));
}

std::string print_alphabet_line(const RankedAlphabet& sigma) {
  std::string out = "alphabet";
  for (const Letter& l : sigma.letters()) out += " " + l.name + ":" + std::to_string(l.rank);
  return out;
}

FiniteTerm parse_term_sexpr(const std::string& text, const RankedAlphabet& sigma) {
  Tokens tk = tokenize_sexpr(text);
  FiniteTerm::NodePtr root = parse_term_node(tk, sigma);
  if (!tk.done()) fail(Errc::ParseError, "trailing input after term");
  return FiniteTerm::adopt(std::move(root));
}

std::string print_term(const FiniteTerm& t) {
  std::string out;
  print_term_node(t.root(), out);
  return out;
}

TermFile parse_term_file(const std::string& text) {
  size_t nl = text.find('\n');
  if (nl == std::string::npos) fail(Errc::ParseError, "expected alphabet line then term");
  RankedAlphabet sigma = parse_alphabet_line(text.substr(0, nl));
  FiniteTerm t = parse_term_sexpr(text.substr(nl + 1), sigma);
  return {std::move(sigma), std::move(t)};
}

std::string print_term_file(const RankedAlphabet& sigma, const FiniteTerm& t) {
  return print_alphabet_line(sigma) + "\n" + print_term(t) + "\n";
}

NestedFiniteTerm parse_nested_term_sexpr(const std::string& text, const RankedAlphabet& sigma) {
  Tokens tk = tokenize_sexpr(text);
  NestedFiniteTerm::NodePtr root = parse_nested_node(tk, sigma);
  if (!tk.done()) fail(Errc::ParseError, "trailing input after term");
  return NestedFiniteTerm::adopt(std::move(root));
}

std::string print_nested_term(const NestedFiniteTerm& t) {
  std::string out;
  print_nested_node(t.root(), out);
  return out;
}

NestedTermFile parse_nested_term_file(const std::string& text) {
  size_t nl = text.find('\n');
  if (nl == std::string::npos) fail(Errc::ParseError, "expected alphabet line then term");
  RankedAlphabet sigma = parse_alphabet_line(text.substr(0, nl));
  NestedFiniteTerm t = parse_nested_term_sexpr(text.substr(nl + 1), sigma);
  return {std::move(sigma), std::move(t)};
}

std::string print_nested_term_file(const RankedAlphabet& sigma, const NestedFiniteTerm& t) {
  return print_alphabet_line(sigma) + "\n" + print_nested_term(t) + "\n";
}

TermGraph parse_graph_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto parse_fail = [&](const std::string& what) {
    fail(Errc::ParseError, "line " + std::to_string(lineno) + ": " + what);
  };

  int declared_rank = -1;
  std::vector<TermGraph::Vertex> vs;
  std::map<std::string, int> letter_rank;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> words = split_ws(line);
    if (words.empty()) continue;
    if (declared_rank < 0) {
      if (words.size() != 2 || words[0] != "rank" || !is_number(words[1]))
        parse_fail("expected 'rank <n>'");
      declared_rank = static_cast<int>(std::stol(words[1]));
      continue;
    }
    if (words[0].size() < 2 || words[0].back() != ':')
      parse_fail("expected '<id>: ...'");
    std::string id_str = words[0].substr(0, words[0].size() - 1);
    if (!is_number(id_str)) parse_fail("bad vertex id '" + id_str + "'");
    int id = static_cast<int>(std::stol(id_str));
    if (id != static_cast<int>(vs.size()))
      parse_fail("vertex ids must be 0..n-1 in order, got " + id_str);
    if (words.size() < 2) parse_fail("vertex with no label");
    TermGraph::Vertex vx;
    if (words[1] == "port") {
      if (words.size() != 3 || !is_number(words[2])) parse_fail("expected 'port <i>'");
      vx.label = parse_port_number(words[2]);
    } else {
      std::vector<int> succ;
      for (size_t i = 2; i < words.size(); ++i) {
        if (!is_number(words[i])) parse_fail("bad successor id '" + words[i] + "'");
        succ.push_back(static_cast<int>(std::stol(words[i])));
      }
      auto [it, fresh] = letter_rank.emplace(words[1], static_cast<int>(succ.size()));
      if (!fresh && it->second != static_cast<int>(succ.size()))
        parse_fail("letter '" + words[1] + "' used with ranks " + std::to_string(it->second) +
                   " and " + std::to_string(succ.size()));
      vx.label = Letter{words[1], static_cast<int>(succ.size())};
      vx.succ = std::move(succ);
    }
    vs.push_back(std::move(vx));
  }
  if (declared_rank < 0) fail(Errc::ParseError, "empty graph file");
  TermGraph g = TermGraph::adopt(std::move(vs));
  if (g.rank() != declared_rank)
    fail(Errc::ParseError, "declared rank " + std::to_string(declared_rank) +
                               " but ports say " + std::to_string(g.rank()));
  return g;
}

std::string print_graph_file(const TermGraph& g) {
  std::string out = "rank " + std::to_string(g.rank()) + "\n";
  for (int v = 0; v < g.size(); ++v) {
    out += std::to_string(v) + ":";
    const TermGraph::Vertex& vx = g.at(v);
    if (vx.is_port()) {
      out += " port " + std::to_string(vx.port());
    } else {
      out += " " + vx.lab().name;
      for (int s : vx.succ) out += " " + std::to_string(s);
    }
    out += "\n";
  }
  return out;
}

std::string print_prefix(const Prefix<Letter>& p) {
  switch (p.tag) {
    case Prefix<Letter>::Tag::Cut: return "#";
    case Prefix<Letter>::Tag::Port: return std::to_string(p.port);
    case Prefix<Letter>::Tag::Inner: {
      std::string out = "(" + p.label->name;
      for (const auto& c : p.children) out += " " + print_prefix(c);
      return out + ")";
    }
  }
  return "?";
}

LazyTree term_view(const FiniteTerm& t) {
  FiniteTerm::NodePtr root = t.root();
  LazyTree lt;
  lt.rank = t.rank();
  lt.label_at = [root](const Address& a) -> std::variant<int, Letter> {
    FiniteTerm::NodePtr n = root;
    for (size_t i = 0; i < a.size(); ++i) {
      if (n->is_port() || a[i] < 0 || static_cast<size_t>(a[i]) >= n->children().size())
        fail(Errc::BadAddress, "no node at " + address_to_string(a));
      n = n->children()[static_cast<size_t>(a[i])];
    }
    if (n->is_port()) return n->port();
    return n->label();
  };
  return lt;
}

}  // namespace oclone
