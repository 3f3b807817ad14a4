#include "pbls/opb.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace pbls {

namespace {

struct Token {
  enum class Kind { Integer, Lit, Rel, Semi, MinKw, End };

  Kind kind = Kind::End;
  Int value = 0;    // Kind::Integer
  Literal lit;      // Kind::Lit
  RelOp rel = RelOp::Ge;  // Kind::Rel
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) lines_.push_back(std::move(line));
  }

  // Comment lines seen before the first statement, for header detection.
  const std::vector<std::string>& leading_comments() const { return leading_comments_; }

  Token next() {
    for (;;) {
      if (line_ >= lines_.size()) return {Token::Kind::End, 0, {}, RelOp::Ge, int(line_) + 1, 1};
      const std::string& s = lines_[line_];
      while (col_ < s.size() && std::isspace(static_cast<unsigned char>(s[col_]))) ++col_;
      if (col_ >= s.size()) {
        ++line_;
        col_ = 0;
        continue;
      }
      if (col_ == first_nonspace(s) && s[col_] == '*') {
        if (!seen_statement_) leading_comments_.push_back(s);
        ++line_;
        col_ = 0;
        continue;
      }
      seen_statement_ = true;
      return scan(s);
    }
  }

 private:
  static std::size_t first_nonspace(const std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, int(line_) + 1, int(col_) + 1);
  }

  Token scan(const std::string& s) {
    const int tline = int(line_) + 1;
    const int tcol = int(col_) + 1;
    char c = s[col_];

    if (c == ';') {
      ++col_;
      return {Token::Kind::Semi, 0, {}, RelOp::Ge, tline, tcol};
    }
    if (c == '>' || c == '<' || c == '=') {
      ++col_;
      RelOp op = RelOp::Eq;
      if (c == '>')
        op = RelOp::Gt;
      else if (c == '<')
        op = RelOp::Lt;
      if (c != '=' && col_ < s.size() && s[col_] == '=') {
        ++col_;
        op = (c == '>') ? RelOp::Ge : RelOp::Le;
      }
      return {Token::Kind::Rel, 0, {}, op, tline, tcol};
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = col_;
      if (c == '+' || c == '-') ++col_;
      std::size_t digits = col_;
      while (col_ < s.size() && std::isdigit(static_cast<unsigned char>(s[col_]))) ++col_;
      if (col_ == digits) fail("expected digits after sign");
      Int value = 0;
      // std::from_chars does not accept a leading '+'
      const char* begin = s.data() + (s[start] == '+' ? start + 1 : start);
      auto [ptr, ec] = std::from_chars(begin, s.data() + col_, value);
      (void)ptr;
      if (ec == std::errc::result_out_of_range) fail("integer does not fit in 64 bits");
      if (ec != std::errc()) fail("malformed integer");
      return {Token::Kind::Integer, value, {}, RelOp::Ge, tline, tcol};
    }
    if (c == '~' || std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      bool negated = c == '~';
      if (negated) {
        ++col_;
        while (col_ < s.size() && std::isspace(static_cast<unsigned char>(s[col_]))) ++col_;
        if (col_ >= s.size()) fail("'~' must be followed by a variable");
      }
      std::size_t start = col_;
      while (col_ < s.size() && (std::isalnum(static_cast<unsigned char>(s[col_])) || s[col_] == '_'))
        ++col_;
      std::string word = s.substr(start, col_ - start);
      if (!negated && word == "min" && col_ < s.size() && s[col_] == ':') {
        ++col_;
        return {Token::Kind::MinKw, 0, {}, RelOp::Ge, tline, tcol};
      }
      if (!negated && word == "max" && col_ < s.size() && s[col_] == ':')
        fail("maximization objectives are not supported");
      if (word.size() < 2 || word[0] != 'x') fail("expected a variable of the form xN");
      Var idx = 0;
      auto [ptr, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), idx);
      if (ec != std::errc() || ptr != word.data() + word.size())
        fail("expected a variable of the form xN");
      if (idx <= 0) fail("variable index must be at least 1");
      return {Token::Kind::Lit, 0, {idx, !negated}, RelOp::Ge, tline, tcol};
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::vector<std::string> lines_;
  std::vector<std::string> leading_comments_;
  std::size_t line_ = 0;
  std::size_t col_ = 0;
  bool seen_statement_ = false;
};

// Reads the integer that follows `key` in a header comment, if present.
std::optional<Int> header_field(const std::vector<std::string>& comments, const std::string& key) {
  for (const std::string& s : comments) {
    std::size_t pos = s.find(key);
    if (pos == std::string::npos) continue;
    pos += key.size();
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    Int value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), value);
    if (ec == std::errc() && ptr != s.data() + pos) return value;
  }
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::istream& in) : lexer_(in) { advance(); }

  PboInstance run() {
    bool objective_seen = false;
    bool constraint_seen = false;
    std::vector<Term> objective_terms;
    std::vector<RawConstraint> raws;
    std::vector<std::pair<int, int>> raw_pos;

    while (cur_.kind != Token::Kind::End) {
      if (cur_.kind == Token::Kind::MinKw) {
        if (objective_seen) fail(cur_, "duplicate objective");
        if (constraint_seen) fail(cur_, "objective must precede all constraints");
        objective_seen = true;
        advance();
        objective_terms = parse_terms();
        expect_semi();
        continue;
      }
      constraint_seen = true;
      const int line = cur_.line, col = cur_.col;
      RawConstraint raw;
      // An empty term list is accepted so that degenerate (all-zero) constraints
      // survive an emit/parse round trip; the relation check below still rejects
      // stray tokens.
      raw.terms = parse_terms();
      if (cur_.kind != Token::Kind::Rel) fail(cur_, "expected a relation (>=, <=, =, >, <)");
      raw.op = cur_.rel;
      advance();
      if (cur_.kind != Token::Kind::Integer) fail(cur_, "expected the right-hand side");
      raw.rhs = cur_.value;
      advance();
      expect_semi();
      raws.push_back(std::move(raw));
      raw_pos.emplace_back(line, col);
    }

    const auto declared_vars = header_field(lexer_.leading_comments(), "#variable=");
    PboInstance inst;
    if (declared_vars) {
      if (*declared_vars < 0 || *declared_vars > std::numeric_limits<int>::max())
        throw ParseError("declared #variable= is out of range", 1, 1);
      inst.num_vars = static_cast<int>(*declared_vars);
      if (max_var_ > inst.num_vars)
        throw ParseError("variable x" + std::to_string(max_var_) +
                             " exceeds the declared #variable= " + std::to_string(inst.num_vars),
                         1, 1);
    } else {
      inst.num_vars = max_var_;
    }

    try {
      inst.objective = normalize_objective(objective_terms);
    } catch (const OverflowError& e) {
      throw ParseError(std::string("objective: ") + e.what(), 1, 1);
    }
    for (std::size_t i = 0; i < raws.size(); ++i) {
      try {
        for (NormalizedConstraint& c : normalize(raws[i]))
          if (!c.trivially_satisfied()) inst.constraints.push_back(std::move(c));
      } catch (const OverflowError& e) {
        throw ParseError(e.what(), raw_pos[i].first, raw_pos[i].second);
      }
    }
    return inst;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.col);
  }

  void expect_semi() {
    if (cur_.kind != Token::Kind::Semi) fail(cur_, "expected ';'");
    advance();
  }

  std::vector<Term> parse_terms() {
    std::vector<Term> terms;
    for (;;) {
      if (cur_.kind == Token::Kind::Lit) {
        if (terms.empty())
          fail(cur_, "missing coefficient before literal");
        else
          fail(cur_, "products of literals are not supported (linear format only)");
      }
      if (cur_.kind != Token::Kind::Integer) break;
      Term t;
      t.coef = cur_.value;
      advance();
      if (cur_.kind != Token::Kind::Lit) fail(cur_, "expected a literal after the coefficient");
      t.lit = cur_.lit;
      max_var_ = std::max(max_var_, t.lit.var);
      advance();
      terms.push_back(t);
    }
    return terms;
  }

  Lexer lexer_;
  Token cur_;
  Var max_var_ = 0;
};

void emit_literal(std::ostream& out, const Literal& l) {
  if (!l.positive) out << '~';
  out << 'x' << l.var;
}

}  // namespace

PboInstance parse_opb(std::istream& in) { return Parser(in).run(); }

PboInstance parse_opb_string(const std::string& text) {
  std::istringstream in(text);
  return parse_opb(in);
}

PboInstance parse_opb_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_opb(in);
}

void emit_opb(const PboInstance& inst, std::ostream& out) {
  out << "* #variable= " << inst.num_vars << " #constraint= " << inst.constraints.size() << '\n';
  if (!inst.objective.empty()) {
    out << "min:";
    for (const Term& t : inst.objective.terms) {
      out << ' ' << (t.coef >= 0 ? "+" : "") << t.coef << ' ';
      emit_literal(out, t.lit);
    }
    out << " ;\n";
  }
  for (const NormalizedConstraint& c : inst.constraints) {
    bool first = true;
    for (const Term& t : c.terms) {
      if (!first) out << ' ';
      first = false;
      out << '+' << t.coef << ' ';
      emit_literal(out, t.lit);
    }
    out << " >= " << c.degree << " ;\n";
  }
}

std::string emit_opb_string(const PboInstance& inst) {
  std::ostringstream out;
  emit_opb(inst, out);
  return out.str();
}

}  // namespace pbls
