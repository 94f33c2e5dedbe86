#include "cxkit/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cxkit/blockops.hpp"

namespace cxkit {

ParseError::ParseError(ParseErrorKind kind, SourcePos pos, const std::string& msg)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + error_kind_name(kind) +
                         ": " + msg),
      kind_(kind),
      pos_(pos),
      msg_(msg) {}

std::string error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::syntax: return "syntax error";
    case ParseErrorKind::unknown_symbol: return "unknown symbol";
    case ParseErrorKind::dimension: return "dimension mismatch";
  }
  return "error";
}

// ------------------------------------------------------------ task values

std::string TaskValue::str() const {
  switch (kind) {
    case Kind::name: return name;
    case Kind::poly: {
      std::string s = poly.str();
      return s.find(' ') == std::string::npos ? s : "(" + s + ")";
    }
    case Kind::tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i].str();
      return s + ")";
    }
  }
  return "";
}

std::optional<long> TaskValue::as_int() const {
  if (kind != Kind::poly || !poly.is_constant()) return std::nullopt;
  GaussianRational c = poly.constant_value();
  if (!c.is_real()) return std::nullopt;
  mpq_class q = c.real();
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) return std::nullopt;
  return q.get_num().get_si();
}

std::optional<double> TaskValue::as_double() const {
  if (kind != Kind::poly || !poly.is_constant()) return std::nullopt;
  GaussianRational c = poly.constant_value();
  if (!c.is_real()) return std::nullopt;
  return c.real().get_d();
}

bool operator==(const TaskValue& a, const TaskValue& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TaskValue::Kind::name: return a.name == b.name;
    case TaskValue::Kind::poly: return a.poly == b.poly;
    case TaskValue::Kind::tuple: return a.items == b.items;
  }
  return false;
}

const TaskValue* Task::get(const std::string& key) const {
  for (const auto& [k, v] : named)
    if (k == key) return &v;
  return nullptr;
}

bool Task::flag(const std::string& name) const {
  return std::any_of(positional.begin(), positional.end(),
                     [&](const TaskValue& v) { return v.kind == TaskValue::Kind::name && v.name == name; });
}

// --------------------------------------------------------------- document

VarListPtr SpecDocument::vars() const { return operator_vars(space, time, params); }

const OpDef* SpecDocument::find_op(const std::string& name) const {
  for (const auto& o : ops)
    if (o.name == name) return &o;
  return nullptr;
}

const ComplexDef* SpecDocument::find_complex(const std::string& name) const {
  for (const auto& c : complexes)
    if (c.name == name) return &c;
  return nullptr;
}

MuSet SpecDocument::weights(const std::string& complex_name) const {
  if (auto it = mu.find(complex_name); it != mu.end()) return it->second;
  const ComplexDef* c = find_complex(complex_name);
  if (!c) throw std::invalid_argument("unknown complex " + complex_name);
  return MuSet::identity(c->value);
}

namespace {

bool same_mu(const MuSet& a, const MuSet& b) {
  if (a.length() != b.length()) return false;
  for (int q = 0; q <= a.length(); ++q)
    if (a.mu0(q) != b.mu0(q) || a.mu1(q) != b.mu1(q)) return false;
  return true;
}

bool same_complex(const Complex& a, const Complex& b) {
  if (a.length() != b.length() || a.ranks() != b.ranks()) return false;
  for (int q = 0; q < a.length(); ++q)
    if (a.op(q) != b.op(q)) return false;
  return true;
}

}  // namespace

bool operator==(const SpecDocument& a, const SpecDocument& b) {
  if (a.space != b.space || a.time != b.time || a.params != b.params) return false;
  if (a.ops.size() != b.ops.size() || a.complexes.size() != b.complexes.size() || a.mu.size() != b.mu.size())
    return false;
  for (std::size_t i = 0; i < a.ops.size(); ++i)
    if (a.ops[i].name != b.ops[i].name || a.ops[i].value != b.ops[i].value) return false;
  for (std::size_t i = 0; i < a.complexes.size(); ++i) {
    const auto &x = a.complexes[i], &y = b.complexes[i];
    if (x.name != y.name || x.expr != y.expr || !same_complex(x.value, y.value)) return false;
  }
  for (const auto& [k, m] : a.mu) {
    auto it = b.mu.find(k);
    if (it == b.mu.end() || !same_mu(m, it->second)) return false;
  }
  return a.tasks == b.tasks;
}

// ------------------------------------------------------------------ lexer

namespace {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    // U+2202 (partial) is accepted for d
    if (src.compare(i, 3, "\xE2\x88\x82") == 0) {
      advance(3);
      std::string t = "d";
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t += src[i];
        advance(1);
      }
      out.push_back({Tok::ident, t, pos});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string t;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t += src[i];
        advance(1);
      }
      out.push_back({Tok::ident, t, pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string t;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t += src[i];
        advance(1);
      }
      if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
        t += '.';
        advance(1);
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
          t += src[i];
          advance(1);
        }
      }
      out.push_back({Tok::number, t, pos});
      continue;
    }
    if (std::string(";,=[](){}+-*/^").find(c) != std::string::npos) {
      out.push_back({Tok::punct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError(ParseErrorKind::syntax, pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", {line, col}});
  return out;
}

GaussianRational number_value(const std::string& t) {
  auto dot = t.find('.');
  if (dot == std::string::npos) return GaussianRational::rational(t);
  std::string digits = t.substr(0, dot) + t.substr(dot + 1);
  std::string den = "1" + std::string(t.size() - dot - 1, '0');
  return GaussianRational::rational(digits + "/" + den);
}

// ----------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  SpecDocument run() {
    while (peek().kind != Tok::end) statement();
    return std::move(doc_);
  }


 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  SpecDocument doc_;
  bool defined_ = false;
  VarListPtr vars_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(at_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(at_++, toks_.size() - 1)]; }
  bool is(const std::string& p) const { return peek().kind == Tok::punct && peek().text == p; }
  bool accept(const std::string& p) {
    if (!is(p)) return false;
    ++at_;
    return true;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(ParseErrorKind::syntax, t.pos, msg + (t.kind == Tok::end ? " at end of input" : " near '" + t.text + "'"));
  }
  Token expect(const std::string& p) {
    if (!is(p)) fail(peek(), "expected '" + p + "'");
    return next();
  }
  Token expect_ident() {
    if (peek().kind != Tok::ident) fail(peek(), "expected a name");
    return next();
  }
  long expect_int() {
    bool neg = accept("-");
    if (peek().kind != Tok::number || peek().text.find('.') != std::string::npos) fail(peek(), "expected an integer");
    long v = std::stol(next().text);
    return neg ? -v : v;
  }
  void expect_end() {
    if (peek().kind != Tok::end) fail(peek(), "unexpected input");
  }

  const VarListPtr& vars(SourcePos pos) {
    if (doc_.space <= 0) throw ParseError(ParseErrorKind::syntax, pos, "space dimension not declared");
    if (!vars_) vars_ = doc_.vars();
    return vars_;
  }

  // ---- statements

  void statement() {
    Token kw = expect_ident();
    const std::string& k = kw.text;
    if (k == "space" || k == "time" || k == "param") {
      if (defined_) throw ParseError(ParseErrorKind::syntax, kw.pos, "declarations must precede definitions");
      if (k == "space") {
        doc_.space = static_cast<int>(expect_int());
        if (doc_.space < 1 || doc_.space > 12) throw ParseError(ParseErrorKind::dimension, kw.pos, "space dimension out of range");
      } else if (k == "time") {
        doc_.time = true;
      } else {
        do {
          Token p = expect_ident();
          if (is_reserved(p.text)) throw ParseError(ParseErrorKind::syntax, p.pos, "reserved name '" + p.text + "'");
          if (std::find(doc_.params.begin(), doc_.params.end(), p.text) == doc_.params.end()) doc_.params.push_back(p.text);
        } while (accept(","));
      }
      expect(";");
      return;
    }
    defined_ = true;
    if (k == "op") {
      Token name = expect_ident();
      check_fresh(name);
      expect("=");
      OperatorMatrix m = mexpr();
      expect(";");
      doc_.ops.push_back({name.text, m, name.pos});
    } else if (k == "complex") {
      Token name = expect_ident();
      check_fresh(name);
      expect("=");
      doc_.complexes.push_back(complex_def(name.text, name.pos));
      expect(";");
    } else if (k == "mu0" || k == "mu1") {
      Token cn = expect_ident();
      const ComplexDef* c = doc_.find_complex(cn.text);
      if (!c) throw ParseError(ParseErrorKind::unknown_symbol, cn.pos, "unknown complex '" + cn.text + "'");
      long q = expect_int();
      expect("=");
      Token at = peek();
      OperatorMatrix m = mexpr();
      expect(";");
      MuSet& mu = doc_.mu.try_emplace(cn.text, MuSet::identity(c->value)).first->second;
      if (q < 0 || q > mu.length()) throw ParseError(ParseErrorKind::dimension, at.pos, "weight degree out of range");
      try {
        if (k == "mu0") mu.set_mu0(static_cast<int>(q), m);
        else mu.set_mu1(static_cast<int>(q), m);
      } catch (const std::invalid_argument& e) {
        throw ParseError(ParseErrorKind::dimension, at.pos, e.what());
      }
    } else if (k == "mu") {
      Token cn = expect_ident();
      const ComplexDef* c = doc_.find_complex(cn.text);
      if (!c) throw ParseError(ParseErrorKind::unknown_symbol, cn.pos, "unknown complex '" + cn.text + "'");
      expect("=");
      Token form = expect_ident();
      MuSet mu;
      if (form.text == "identity") {
        mu = MuSet::identity(c->value);
      } else if (form.text == "scalar") {
        expect("(");
        OperatorMatrix s = mexpr();
        expect(")");
        if (s.rows() != 1 || s.cols() != 1) throw ParseError(ParseErrorKind::dimension, form.pos, "scalar weight must be 1x1");
        mu = MuSet::scalar(c->value, s(0, 0));
      } else if (form.text == "powered") {
        expect("(");
        std::vector<int> t = int_tuple(), h;
        expect(",");
        h = int_tuple();
        expect(")");
        mu = MuSet::powered(c->value, t, h);
      } else {
        throw ParseError(ParseErrorKind::unknown_symbol, form.pos, "unknown weight form '" + form.text + "'");
      }
      expect(";");
      doc_.mu[cn.text] = mu;
    } else if (k == "task") {
      doc_.tasks.push_back(task(kw.pos));
    } else {
      throw ParseError(ParseErrorKind::syntax, kw.pos, "unknown statement '" + k + "'");
    }
  }

  static bool is_reserved(const std::string& s) {
    static const char* words[] = {"i", "dt",
                                  "eye", "zeros", "kron", "adjoint", "transpose"};
    for (const char* w : words)
      if (s == w) return true;
    return s.size() > 1 && s[0] == 'd' && std::all_of(s.begin() + 1, s.end(), ::isdigit);
  }

  void check_fresh(const Token& name) {
    if (is_reserved(name.text)) throw ParseError(ParseErrorKind::syntax, name.pos, "reserved name '" + name.text + "'");
    if (doc_.find_op(name.text) || doc_.find_complex(name.text) ||
        std::find(doc_.params.begin(), doc_.params.end(), name.text) != doc_.params.end())
      throw ParseError(ParseErrorKind::syntax, name.pos, "name '" + name.text + "' already defined");
  }

  std::vector<int> int_tuple() {
    std::vector<int> v;
    expect("(");
    if (!is(")")) do v.push_back(static_cast<int>(expect_int()));
      while (accept(","));
    expect(")");
    return v;
  }

  // ---- tasks

  Task task(SourcePos pos) {
    Task t;
    t.pos = pos;
    t.command = expect_ident().text;
    while (is("-") && peek(1).kind == Tok::ident) {
      next();
      t.command += "-" + next().text;
    }
    while (!is(";")) {
      if (peek().kind == Tok::end) fail(peek(), "expected ';'");
      if (peek().kind == Tok::ident && peek(1).kind == Tok::punct && peek(1).text == "=") {
        std::string key = next().text;
        next();
        t.named.emplace_back(key, value());
      } else {
        t.positional.push_back(value());
      }
    }
    expect(";");
    return t;
  }

  bool is_ring_symbol(const std::string& s) const {
    if (s == "i" || s == "dt") return true;
    if (s.size() > 1 && s[0] == 'd' && std::all_of(s.begin() + 1, s.end(), ::isdigit)) return true;
    return std::find(doc_.params.begin(), doc_.params.end(), s) != doc_.params.end();
  }

  TaskValue value() {
    TaskValue v;
    if (accept("(")) {
      v.kind = TaskValue::Kind::tuple;
      if (!is(")")) do v.items.push_back(value());
        while (accept(","));
      expect(")");
      return v;
    }
    if (peek().kind == Tok::ident && !is_ring_symbol(peek().text)) {
      v.kind = TaskValue::Kind::name;
      v.name = next().text;
      return v;
    }
    Token at = peek();
    OperatorMatrix m = mexpr_sum(false);
    if (m.rows() != 1 || m.cols() != 1) throw ParseError(ParseErrorKind::dimension, at.pos, "task values must be scalar");
    v.kind = TaskValue::Kind::poly;
    v.poly = m(0, 0);
    return v;
  }

  // ---- complexes

  ComplexDef complex_def(const std::string& name, SourcePos pos) {
    auto [expr, c] = cexpr();
    return {name, expr, c.renamed(name), pos};
  }

  std::pair<std::string, Complex> cexpr() {
    Token b = expect_ident();
    expect("(");
    std::pair<std::string, Complex> out;
    const VarListPtr& v = vars(b.pos);
    auto need_space = [&](int n) {
      if (n != doc_.space)
        throw ParseError(ParseErrorKind::dimension, b.pos,
                         b.text + " needs space " + std::to_string(n) + ", declared " + std::to_string(doc_.space));
    };
    auto lifted = [&](const Complex& c) { return c.with_vars(v); };
    if (b.text == "de_rham") {
      long n = expect_int();
      FormBasis basis = FormBasis::lexicographic;
      std::string tag;
      if (accept(",")) {
        Token t = expect_ident();
        if (t.text == "hodge") basis = FormBasis::hodge_dual, tag = ", hodge";
        else if (t.text != "lex") throw ParseError(ParseErrorKind::unknown_symbol, t.pos, "unknown basis '" + t.text + "'");
      }
      need_space(static_cast<int>(n));
      out = {"de_rham(" + std::to_string(n) + tag + ")", lifted(build_de_rham(static_cast<int>(n), basis))};
    } else if (b.text == "power_de_rham") {
      long n = expect_int();
      expect(",");
      long p = expect_int();
      need_space(static_cast<int>(n));
      out = {"power_de_rham(" + std::to_string(n) + ", " + std::to_string(p) + ")",
             lifted(build_power_de_rham(static_cast<int>(n), static_cast<int>(p)))};
    } else if (b.text == "dolbeault") {
      long n = expect_int();
      need_space(static_cast<int>(2 * n));
      out = {"dolbeault(" + std::to_string(n) + ")", lifted(build_dolbeault(static_cast<int>(n)))};
    } else if (b.text == "koszul") {
      std::vector<Poly> qs;
      std::string text = "koszul(";
      do {
        Token at = peek();
        OperatorMatrix m = mexpr();
        if (m.rows() != 1 || m.cols() != 1) throw ParseError(ParseErrorKind::dimension, at.pos, "koszul entries must be scalar");
        qs.push_back(m(0, 0));
        text += (qs.size() > 1 ? ", " : "") + m(0, 0).str();
      } while (accept(","));
      out = {text + ")", build_koszul(qs, v)};
    } else if (b.text == "chain") {
      std::vector<OperatorMatrix> ops;
      std::string text = "chain(";
      do {
        Token n = expect_ident();
        const OpDef* o = doc_.find_op(n.text);
        if (!o) throw ParseError(ParseErrorKind::unknown_symbol, n.pos, "unknown operator '" + n.text + "'");
        if (!ops.empty() && ops.back().rows() != o->value.cols())
          throw ParseError(ParseErrorKind::dimension, n.pos, "operator '" + n.text + "' does not compose with its predecessor");
        ops.push_back(o->value);
        text += (ops.size() > 1 ? ", " : "") + n.text;
      } while (accept(","));
      out = {text + ")", Complex("chain", ops)};
    } else if (b.text == "scale") {
      auto inner = cexpr();
      expect(",");
      Token at = peek();
      OperatorMatrix s = mexpr();
      if (s.rows() != 1 || s.cols() != 1 || !s(0, 0).is_constant())
        throw ParseError(ParseErrorKind::dimension, at.pos, "scale factor must be a constant");
      out = {"scale(" + inner.first + ", " + s(0, 0).str() + ")", scale_complex(inner.second, s(0, 0).constant_value())};
    } else if (b.text == "repeat") {
      long k = expect_int();
      expect(",");
      auto inner = cexpr();
      if (k < 1) throw ParseError(ParseErrorKind::dimension, b.pos, "repeat count must be positive");
      std::vector<OperatorMatrix> ops;
      for (int j = 0; j < inner.second.length(); ++j) ops.push_back(tensor_identity(k, inner.second.op(j)));
      out = {"repeat(" + std::to_string(k) + ", " + inner.first + ")",
             Complex("repeat", ops, k * inner.second.rank(0))};
    } else {
      throw ParseError(ParseErrorKind::unknown_symbol, b.pos, "unknown complex builder '" + b.text + "'");
    }
    expect(")");
    return out;
  }

  // ---- matrix expressions; scalars are 1x1

  OperatorMatrix scalar(const Poly& p, SourcePos pos) { return OperatorMatrix::scalar(vars(pos), p); }

  OperatorMatrix mexpr() { return mexpr_sum(true); }

  OperatorMatrix mexpr_sum(bool allow_matrix) {
    OperatorMatrix a = mterm(allow_matrix);
    while (is("+") || is("-")) {
      Token op = next();
      OperatorMatrix b = mterm(allow_matrix);
      if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ParseError(ParseErrorKind::dimension, op.pos,
                         "cannot add " + shape(a) + " and " + shape(b));
      a = op.text == "+" ? a + b : a - b;
    }
    return a;
  }

  static std::string shape(const OperatorMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

  OperatorMatrix mterm(bool allow_matrix) {
    OperatorMatrix a = munary(allow_matrix);
    while (is("*") || is("/")) {
      Token op = next();
      OperatorMatrix b = munary(allow_matrix);
      if (op.text == "/") {
        if (b.rows() != 1 || b.cols() != 1 || !b(0, 0).is_constant() || b(0, 0).is_zero())
          throw ParseError(ParseErrorKind::dimension, op.pos, "division only by a nonzero constant");
        a = (GaussianRational(1) / b(0, 0).constant_value()) * a;
      } else if (a.cols() == b.rows()) {
        a = compose(a, b);
      } else if (a.rows() == 1 && a.cols() == 1) {
        a = a(0, 0) * b;
      } else if (b.rows() == 1 && b.cols() == 1) {
        a = b(0, 0) * a;
      } else {
        throw ParseError(ParseErrorKind::dimension, op.pos, "cannot multiply " + shape(a) + " by " + shape(b));
      }
    }
    return a;
  }

  OperatorMatrix munary(bool allow_matrix) {
    if (accept("-")) return -munary(allow_matrix);
    if (accept("+")) return munary(allow_matrix);
    return mpower(allow_matrix);
  }

  OperatorMatrix mpower(bool allow_matrix) {
    OperatorMatrix a = mprimary(allow_matrix);
    if (is("^")) {
      Token caret = next();
      if (peek().kind != Tok::number || peek().text.find('.') != std::string::npos)
        throw ParseError(ParseErrorKind::syntax, caret.pos, "expected an integer exponent after '^'");
      long e = std::stol(next().text);
      if (a.rows() != 1 || a.cols() != 1) throw ParseError(ParseErrorKind::dimension, caret.pos, "only scalars have powers");
      a = scalar(pow(a(0, 0), static_cast<unsigned>(e)), caret.pos);
    }
    return a;
  }

  OperatorMatrix mprimary(bool allow_matrix) {
    Token t = peek();
    if (t.kind == Tok::number) {
      next();
      return scalar(Poly::constant(vars(t.pos), number_value(t.text)), t.pos);
    }
    if (accept("(")) {
      OperatorMatrix m = mexpr_sum(allow_matrix);
      expect(")");
      return m;
    }
    if (is("[")) {
      if (!allow_matrix) fail(t, "matrix not allowed here");
      return literal();
    }
    if (t.kind != Tok::ident) fail(t, "expected an expression");
    next();
    const VarListPtr& v = vars(t.pos);
    if (t.text == "i") return scalar(Poly::constant(v, GaussianRational::i()), t.pos);
    if (auto idx = v->index_of(t.text)) return scalar(Poly::var(v, *idx), t.pos);
    if (t.text == "dt" || (t.text.size() > 1 && t.text[0] == 'd' && std::all_of(t.text.begin() + 1, t.text.end(), ::isdigit)))
      throw ParseError(ParseErrorKind::unknown_symbol, t.pos, "'" + t.text + "' is not a variable of this space");
    if (allow_matrix) {
      if (t.text == "eye") {
        expect("(");
        long n = expect_int();
        expect(")");
        return OperatorMatrix::identity(v, n);
      }
      if (t.text == "zeros") {
        expect("(");
        long r = expect_int();
        expect(",");
        long c = expect_int();
        expect(")");
        return OperatorMatrix::zero(v, r, c);
      }
      if (t.text == "kron") {
        expect("(");
        OperatorMatrix a = mexpr();
        expect(",");
        OperatorMatrix b = mexpr();
        expect(")");
        return kron(a, b);
      }
      if (t.text == "adjoint" || t.text == "transpose") {
        expect("(");
        OperatorMatrix a = mexpr();
        expect(")");
        return t.text == "adjoint" ? formal_adjoint(a) : a.transpose();
      }
      if (const OpDef* o = doc_.find_op(t.text)) return o->value;
    }
    throw ParseError(ParseErrorKind::unknown_symbol, t.pos, "unknown name '" + t.text + "'");
  }

  static OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
    PolyMatrix out = zero_matrix(a.vars(), a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j)
        for (Index k = 0; k < b.rows(); ++k)
          for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return OperatorMatrix(a.vars(), out);
  }

  // [a, b; c, d]: scalar entries, or blocks with literal 0 as a zero block of fitting size
  OperatorMatrix literal() {
    Token open = expect("[");
    const VarListPtr& v = vars(open.pos);
    struct Cell {
      OperatorMatrix m;
      bool zero_block;
      SourcePos pos;
    };
    std::vector<std::vector<Cell>> rows;
    if (!is("]")) {
      rows.emplace_back();
      for (;;) {
        Token at = peek();
        bool literal_zero = at.kind == Tok::number && at.text == "0" && peek(1).kind == Tok::punct &&
                            (peek(1).text == "," || peek(1).text == ";" || peek(1).text == "]");
        OperatorMatrix m = mexpr();
        rows.back().push_back({m, literal_zero, at.pos});
        if (accept(",")) continue;
        if (accept(";")) {
          rows.emplace_back();
          continue;
        }
        break;
      }
    }
    expect("]");
    if (rows.empty()) return OperatorMatrix::zero(v, 0, 0);
    const std::size_t ncols = rows[0].size();
    for (const auto& r : rows)
      if (r.size() != ncols) throw ParseError(ParseErrorKind::dimension, r.empty() ? open.pos : r[0].pos, "rows have different lengths");
    std::vector<Index> h(rows.size(), -1), w(ncols, -1);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < ncols; ++j) {
        const Cell& c = rows[i][j];
        if (c.zero_block) continue;
        if (h[i] >= 0 && h[i] != c.m.rows())
          throw ParseError(ParseErrorKind::dimension, c.pos, "block height " + std::to_string(c.m.rows()) + " does not fit row");
        if (w[j] >= 0 && w[j] != c.m.cols())
          throw ParseError(ParseErrorKind::dimension, c.pos, "block width " + std::to_string(c.m.cols()) + " does not fit column");
        h[i] = c.m.rows();
        w[j] = c.m.cols();
      }
    for (auto& x : h) x = x < 0 ? 1 : x;
    for (auto& x : w) x = x < 0 ? 1 : x;
    Index tr = 0, tc = 0;
    for (auto x : h) tr += x;
    for (auto x : w) tc += x;
    PolyMatrix out = zero_matrix(v, tr, tc);
    Index r0 = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Index c0 = 0;
      for (std::size_t j = 0; j < ncols; ++j) {
        const Cell& c = rows[i][j];
        if (!c.zero_block && c.m.rows() > 0 && c.m.cols() > 0) out.block(r0, c0, h[i], w[j]) = c.m.body();
        c0 += w[j];
      }
      r0 += h[i];
    }
    return OperatorMatrix(v, out);
  }
};

std::string matrix_text(const OperatorMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return "zeros(" + std::to_string(m.rows()) + ", " + std::to_string(m.cols()) + ")";
  std::string s = "[";
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) s += ";\n  ";
    for (Index j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + m(i, j).str();
  }
  return s + "]";
}

}  // namespace

SpecDocument parse_spec(const std::string& text) { return Parser(text).run(); }

std::string print_spec(const SpecDocument& d) {
  std::ostringstream os;
  if (d.space > 0) os << "space " << d.space << ";\n";
  if (d.time) os << "time;\n";
  if (!d.params.empty()) {
    os << "param ";
    for (std::size_t i = 0; i < d.params.size(); ++i) os << (i ? ", " : "") << d.params[i];
    os << ";\n";
  }
  for (const auto& o : d.ops) os << "op " << o.name << " = " << matrix_text(o.value) << ";\n";
  for (const auto& c : d.complexes) {
    os << "complex " << c.name << " = " << c.expr << ";\n";
    if (auto it = d.mu.find(c.name); it != d.mu.end()) {
      const MuSet& mu = it->second;
      for (int q = 0; q <= mu.length(); ++q) {
        os << "mu0 " << c.name << " " << q << " = " << matrix_text(mu.mu0(q)) << ";\n";
        os << "mu1 " << c.name << " " << q << " = " << matrix_text(mu.mu1(q)) << ";\n";
      }
    }
  }
  for (const auto& t : d.tasks) {
    os << "task " << t.command;
    for (const auto& v : t.positional) os << " " << v.str();
    for (const auto& [k, v] : t.named) os << " " << k << "=" << v.str();
    os << ";\n";
  }
  return os.str();
}

ComplexDef parse_complex_expr(const std::string& text) {
  // dimension: first integer argument of de_rham / power_de_rham, twice it for dolbeault,
  // otherwise the largest d<k> mentioned
  int n = 0;
  auto first_int = [&](const std::string& builder) -> int {
    auto p = text.find(builder + "(");
    if (p == std::string::npos) return 0;
    return std::atoi(text.c_str() + p + builder.size() + 1);
  };
  if (int k = first_int("power_de_rham")) n = k;
  else if (int k2 = first_int("de_rham")) n = k2;
  else if (int k3 = first_int("dolbeault")) n = 2 * k3;
  for (std::size_t i = 0; i + 1 < text.size(); ++i)
    if (text[i] == 'd' && std::isdigit(static_cast<unsigned char>(text[i + 1])) &&
        (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]))))
      n = std::max(n, std::atoi(text.c_str() + i + 1));
  SpecDocument d = parse_spec("space " + std::to_string(std::max(n, 1)) + ";\ncomplex C = " + text + ";\n");
  return d.complexes.front();
}

}  // namespace cxkit
