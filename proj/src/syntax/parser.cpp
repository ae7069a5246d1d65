#include "kdb/syntax/parser.hpp"

#include <algorithm>
#include <unordered_set>

#include "kdb/syntax/lexer.hpp"
#include "kdb/syntax/resolve.hpp"

namespace kdb {

ParseError::ParseError(std::uint32_t line, std::uint32_t col, std::string message,
                       std::vector<std::string> expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      line_(line),
      col_(col),
      message_(std::move(message)),
      expected_(std::move(expected))
{
}

namespace {

const std::unordered_set<std::string> & keywords()
{
  static const std::unordered_set<std::string> kw = {
      "nil",    "new",    "let",  "in",     "schema",  "table", "true", "not",
      "insert", "delete", "select", "update", "aggr",  "create", "drop", "eval",
      "foreach", "sum",   "avg",  "count",  "min",     "max",   "asc",  "desc",
      "lex",    "subset", "ERR",  "Int",    "String",  "Id",    "Loc"};
  return kw;
}

bool is_keyword(const std::string & s) { return keywords().count(s) != 0; }

// Thrown to unwind a failed alternative; the parser keeps track of the
// farthest failure for the final diagnostic.
struct Backtrack {};

const Int k_int64_max("9223372036854775807");

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  template <class F>
  auto top(F && f)
  {
    try {
      auto out = f();
      expect(Tok::End, "end of input");
      return out;
    } catch (const Backtrack &) {
      const Token & t = toks_[far_pos_];
      std::vector<std::string> exp(far_expected_.begin(), far_expected_.end());
      std::string msg = "unexpected " + token_text(t);
      if (!exp.empty()) {
        msg += "; expected ";
        for (std::size_t i = 0; i < exp.size(); ++i) {
          if (i) msg += i + 1 == exp.size() ? " or " : ", ";
          msg += exp[i];
        }
      }
      throw ParseError(t.line, t.col, msg, exp);
    }
  }

  System system()
  {
    System sys;
    while (at_kw("schema")) {
      Span s = span();
      take();
      SchemaDecl d;
      d.span = s;
      d.tid = tid_name();
      expect(Tok::Colon, "':'");
      d.schema = schema();
      sys.schemas.push_back(std::move(d));
    }
    if (at_kw("let")) {
      take();
      while (!at_kw("in")) sys.procedures.push_back(procedure());
      take();
    }
    sys.net = net();
    return sys;
  }

  NetP net()
  {
    NetP left = net_atom();
    while (at(Tok::BarBar)) {
      Span s = span();
      take();
      NetP right = net_atom();
      left = Net{Net::Par{left, right}, s};
    }
    return left;
  }

  ProcP process()
  {
    ProcP left = pref();
    while (at(Tok::Semi)) {
      Span s = span();
      take();
      ProcP right = pref();
      left = Process{Process::Seq{left, right}, s};
    }
    return left;
  }

  ExprP expr()
  {
    ExprP left = additive();
    while (at(Tok::PlusPlus)) {
      Span s = span();
      take();
      ExprP right = additive();
      left = Expr{Expr::Concat{left, right}, s};
    }
    return left;
  }

  PredP pred()
  {
    PredP left = pred_unary();
    while (at(Tok::AndAnd)) {
      Span s = span();
      take();
      PredP right = pred_unary();
      left = Pred{Pred::And{left, right}, s};
    }
    return left;
  }

 private:
  // -- token helpers -------------------------------------------------------

  const Token & peek(std::size_t k = 0) const
  {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_kw(const char * w) const
  {
    const Token & t = peek();
    return (t.kind == Tok::Ident || t.kind == Tok::Tid) && t.text == w;
  }
  Span span() const { return Span{peek().line, peek().col}; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  static std::string token_text(const Token & t)
  {
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Tid: return "'" + t.text + "'";
      case Tok::Loc: return "'$" + t.text + "'";
      case Tok::IntLit: return "integer " + t.text;
      case Tok::StrLit: return "string literal";
      default: return describe(t.kind);
    }
  }

  [[noreturn]] void fail(const std::string & what)
  {
    if (pos_ > far_pos_) {
      far_pos_ = pos_;
      far_expected_.clear();
    }
    if (pos_ == far_pos_) far_expected_.insert(what);
    throw Backtrack{};
  }

  [[noreturn]] void hard(const Span & s, const std::string & msg) { throw ParseError(s.line, s.col, msg); }

  Token expect(Tok k, const char * what)
  {
    if (!at(k)) fail(what);
    return take();
  }

  void expect_kw(const char * w)
  {
    if (!at_kw(w)) fail(std::string("'") + w + "'");
    take();
  }

  std::string ident()
  {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail("identifier");
    if (peek().text == "_") hard(span(), "'_' is not a valid name");
    return take().text;
  }

  std::string tid_name()
  {
    if (at(Tok::Ident) && peek().text == "_")
      hard(span(), "anonymous tables cannot appear in source text");
    if (!at(Tok::Tid) || is_keyword(peek().text)) fail("table identifier");
    return take().text;
  }

  std::size_t index_lit()
  {
    Span s = span();
    Token t = expect(Tok::IntLit, "column index");
    if (t.text.size() > 9 || std::stoul(t.text) == 0) hard(s, "column index must be between 1 and 999999999");
    return std::stoul(t.text);
  }

  // -- declarations --------------------------------------------------------

  Procedure procedure()
  {
    Procedure p;
    p.span = span();
    p.name = ident();
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      do {
        Param prm;
        prm.span = span();
        prm.name = ident();
        expect(Tok::Colon, "':'");
        prm.type = mtype();
        p.params.push_back(std::move(prm));
      } while (at(Tok::Comma) && (take(), true));
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Assign, "':='");
    p.body = process();
    return p;
  }

  BaseType base_type()
  {
    if (at(Tok::Tid)) {
      const std::string & w = peek().text;
      BaseType b;
      bool ok = true;
      if (w == "Int") b = BaseType::Int;
      else if (w == "String") b = BaseType::String;
      else if (w == "Id") b = BaseType::Id;
      else if (w == "Loc") b = BaseType::Loc;
      else ok = false;
      if (ok) {
        take();
        return b;
      }
    }
    fail("type");
  }

  MType mtype()
  {
    if (at(Tok::LBrace)) {
      take();
      MType m{base_type(), true};
      expect(Tok::RBrace, "'}'");
      return m;
    }
    return MType{base_type(), false};
  }

  Schema schema()
  {
    Schema sk;
    if (at(Tok::LParen)) {
      take();
      sk.push_back(mtype());
      while (at(Tok::Comma)) {
        take();
        sk.push_back(mtype());
      }
      expect(Tok::RParen, "')'");
    } else {
      sk.push_back(mtype());
    }
    return sk;
  }

  // -- nets and components -------------------------------------------------

  NetP net_atom()
  {
    Span s = span();
    if (at_kw("nil")) {
      take();
      return Net{Net::Nil{}, s};
    }
    if (at_kw("ERR")) {
      take();
      return Net{Net::Err{}, s};
    }
    if (at(Tok::LParen)) {
      take();
      if (at_kw("new")) {
        take();
        std::string l = expect(Tok::Loc, "locality").text;
        expect(Tok::RParen, "')'");
        NetP inner = net_atom();
        return Net{Net::Restrict{l, inner}, s};
      }
      NetP n = net();
      expect(Tok::RParen, "')'");
      return n;
    }
    if (at(Tok::Loc)) {
      std::string l = take().text;
      expect(Tok::DColon, "'::'");
      CompP c = component();
      return Net{Net::Node{l, c}, s};
    }
    fail("net");
  }

  CompP component()
  {
    CompP left = comp_atom();
    while (at(Tok::Bar)) {
      Span s = span();
      take();
      CompP right = comp_atom();
      left = Component{Component::Par{left, right}, s};
    }
    return left;
  }

  CompP comp_atom()
  {
    Span s = span();
    if (at_kw("table")) return Component{Component::Tab{table_literal()}, s};
    if (at(Tok::LParen)) {
      std::size_t save = pos_;
      try {
        ProcP p = process();
        return Component{Component::Proc{p}, s};
      } catch (const Backtrack &) {
        pos_ = save;
      }
      take();
      CompP c = component();
      expect(Tok::RParen, "')'");
      return c;
    }
    ProcP p = process();
    return Component{Component::Proc{p}, s};
  }

  Shared<Table> table_literal()
  {
    expect_kw("table");
    Table tb;
    tb.iface.tid = tid_name();
    expect(Tok::Colon, "':'");
    tb.iface.schema = schema();
    expect(Tok::Eq, "'='");
    expect(Tok::LBrace, "'{'");
    if (!at(Tok::RBrace)) {
      do {
        tb.rows.add(tag_sorts(row(), tb.iface.schema));
      } while (at(Tok::Comma) && (take(), true));
    }
    expect(Tok::RBrace, "'}'");
    return Shared<Table>(std::move(tb));
  }

  ValueTuple row()
  {
    expect(Tok::LParen, "'('");
    ValueTuple t;
    do {
      Span s = span();
      t.push_back(constant(*expr(), s));
    } while (at(Tok::Comma) && (take(), true));
    expect(Tok::RParen, "')'");
    return t;
  }

  Value constant(const Expr & e, const Span & s)
  {
    if (auto * l = std::get_if<Expr::Lit>(&e.node)) return l->value;
    if (auto * m = std::get_if<Expr::SetLit>(&e.node)) {
      SetV set;
      for (const ExprP & el : m->elems) {
        auto * l = std::get_if<Expr::Lit>(&el->node);
        if (!l) hard(s, "table rows may only contain constants");
        auto sc = to_scalar(l->value);
        if (!set.items.empty() && scalar_kind(*sc) != scalar_kind(set.items.begin()->first))
          hard(s, "multiset elements must all have the same type");
        set.items.add(*sc);
      }
      return set;
    }
    hard(s, "table rows may only contain constants");
  }

  // -- processes and actions -----------------------------------------------

  bool at_action() const
  {
    static const char * acts[] = {"insert", "delete", "select", "update", "aggr", "create", "drop", "eval"};
    if (!at(Tok::Ident)) return false;
    for (const char * a : acts)
      if (peek().text == a) return true;
    return false;
  }

  ProcP pref()
  {
    Span s = span();
    if (at_kw("nil")) {
      take();
      return Process{Process::Nil{}, s};
    }
    if (at_kw("foreach")) {
      take();
      expect(Tok::LParen, "'('");
      Process::Foreach f;
      f.table = table_ref();
      expect(Tok::Comma, "','");
      f.tmpl = templ();
      expect(Tok::Comma, "','");
      f.pred = pred();
      expect(Tok::Comma, "','");
      f.order = order();
      expect(Tok::RParen, "')'");
      expect(Tok::Colon, "':'");
      f.body = pref();
      return Process{std::move(f), s};
    }
    if (at(Tok::LParen)) {
      take();
      ProcP p = process();
      expect(Tok::RParen, "')'");
      return p;
    }
    if (at_action()) {
      Action a = action();
      expect(Tok::Dot, "'.'");
      ProcP cont = pref();
      return Process{Process::Prefix{std::move(a), cont}, s};
    }
    if (at(Tok::Ident) && !is_keyword(peek().text) && peek(1).kind == Tok::LParen) {
      Process::Call c;
      c.name = ident();
      take();
      if (!at(Tok::RParen)) {
        do {
          c.args.push_back(expr());
        } while (at(Tok::Comma) && (take(), true));
      }
      expect(Tok::RParen, "')'");
      return Process{std::move(c), s};
    }
    fail("process");
  }

  LocRef loc_ref()
  {
    LocRef r;
    r.span = span();
    if (at(Tok::Loc)) {
      r.name = take().text;
      return r;
    }
    if (at(Tok::Ident) && !is_keyword(peek().text)) {
      r.name = ident();
      r.is_var = true;
      return r;
    }
    fail("locality");
  }

  void target(std::string & tid, LocRef & loc)
  {
    tid = tid_name();
    expect(Tok::At, "'@'");
    loc = loc_ref();
  }

  Action action()
  {
    Span s = span();
    std::string kw = take().text;
    expect(Tok::LParen, "'('");
    Action a;
    a.span = s;
    if (kw == "insert") {
      Action::Insert x;
      target(x.tid, x.loc);
      expect(Tok::Comma, "','");
      x.tuple = tuple();
      a.node = std::move(x);
    } else if (kw == "delete") {
      Action::Delete x;
      target(x.tid, x.loc);
      expect(Tok::Comma, "','");
      x.tmpl = templ();
      expect(Tok::Comma, "','");
      x.pred = pred();
      a.node = std::move(x);
    } else if (kw == "select") {
      Action::Select x;
      if (at(Tok::LBrack)) {
        take();
        do {
          x.tables.push_back(table_ref());
        } while (at(Tok::Comma) && (take(), true));
        expect(Tok::RBrack, "']'");
      } else {
        x.tables.push_back(table_ref());
      }
      expect(Tok::Comma, "','");
      x.tmpl = templ();
      expect(Tok::Comma, "','");
      x.pred = pred();
      expect(Tok::Comma, "','");
      x.tuple = tuple();
      expect(Tok::Comma, "','");
      expect(Tok::Bang, "'!'");
      x.bind = ident();
      a.node = std::move(x);
    } else if (kw == "update") {
      Action::Update x;
      target(x.tid, x.loc);
      expect(Tok::Comma, "','");
      x.tmpl = templ();
      expect(Tok::Comma, "','");
      x.pred = pred();
      expect(Tok::Comma, "','");
      x.tuple = tuple();
      a.node = std::move(x);
    } else if (kw == "aggr") {
      Action::Aggr x;
      target(x.tid, x.loc);
      expect(Tok::Comma, "','");
      x.tmpl = templ();
      expect(Tok::Comma, "','");
      x.pred = pred();
      expect(Tok::Comma, "','");
      x.fn = aggr_fn();
      expect(Tok::Comma, "','");
      x.result = templ();
      a.node = std::move(x);
    } else if (kw == "create") {
      Action::Create x;
      target(x.tid, x.loc);
      expect(Tok::Comma, "','");
      x.schema = schema();
      a.node = std::move(x);
    } else if (kw == "drop") {
      Action::Drop x;
      target(x.tid, x.loc);
      a.node = std::move(x);
    } else {
      Action::Eval x;
      x.process = process();
      expect(Tok::RParen, "')'");
      expect(Tok::At, "'@'");
      x.loc = loc_ref();
      a.node = std::move(x);
      return a;
    }
    expect(Tok::RParen, "')'");
    return a;
  }

  TableRef table_ref()
  {
    TableRef r;
    r.span = span();
    if (at_kw("table")) {
      r.node = TableRef::Literal{table_literal()};
    } else if (at(Tok::Ident) && !is_keyword(peek().text)) {
      r.node = TableRef::ByVar{ident()};
    } else {
      TableRef::ByName b;
      target(b.tid, b.loc);
      r.node = std::move(b);
    }
    return r;
  }

  AggrFn aggr_fn()
  {
    AggrFn f;
    if (at_kw("count")) {
      take();
      f.kind = AggrFn::Kind::Count;
      return f;
    }
    if (at_kw("sum")) f.kind = AggrFn::Kind::Sum;
    else if (at_kw("avg")) f.kind = AggrFn::Kind::Avg;
    else if (at_kw("min")) f.kind = AggrFn::Kind::Min;
    else if (at_kw("max")) f.kind = AggrFn::Kind::Max;
    else fail("aggregator");
    take();
    expect(Tok::LParen, "'('");
    f.col = index_lit();
    expect(Tok::RParen, "')'");
    return f;
  }

  OrderSpec order()
  {
    OrderSpec o;
    if (at(Tok::LBrace)) {
      take();
      expect(Tok::RBrace, "'}'");
      return o;
    }
    if (at_kw("lex")) {
      take();
      o.kind = OrderSpec::Kind::Lex;
      return o;
    }
    if (at_kw("asc")) o.kind = OrderSpec::Kind::Asc;
    else if (at_kw("desc")) o.kind = OrderSpec::Kind::Desc;
    else fail("order");
    take();
    expect(Tok::LParen, "'('");
    o.col = index_lit();
    expect(Tok::RParen, "')'");
    return o;
  }

  Binder binder()
  {
    Binder b;
    b.span = span();
    expect(Tok::Bang, "'!'");
    if (at(Tok::At)) {
      take();
      b.is_loc = true;
    }
    b.name = ident();
    return b;
  }

  Template templ()
  {
    Template t;
    t.span = span();
    if (at(Tok::LParen)) {
      take();
      do {
        t.fields.push_back(binder());
      } while (at(Tok::Comma) && (take(), true));
      expect(Tok::RParen, "')'");
    } else {
      t.fields.push_back(binder());
    }
    for (std::size_t i = 0; i < t.fields.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (t.fields[i].name == t.fields[j].name)
          hard(t.fields[i].span, "template binds '" + t.fields[i].name + "' more than once");
    return t;
  }

  Tuple tuple()
  {
    Tuple t;
    t.span = span();
    expect(Tok::LParen, "'('");
    do {
      t.items.push_back(expr());
    } while (at(Tok::Comma) && (take(), true));
    expect(Tok::RParen, "')'");
    return t;
  }

  // -- expressions ---------------------------------------------------------

  ExprP additive()
  {
    ExprP left = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Span s = span();
      ArithOp op = take().kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      ExprP right = multiplicative();
      left = Expr{Expr::Arith{op, left, right}, s};
    }
    return left;
  }

  ExprP multiplicative()
  {
    ExprP left = primary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Span s = span();
      ArithOp op = take().kind == Tok::Star ? ArithOp::Mul : ArithOp::Div;
      ExprP right = primary();
      left = Expr{Expr::Arith{op, left, right}, s};
    }
    return left;
  }

  Value int_literal(bool negative)
  {
    Span s = span();
    Token t = expect(Tok::IntLit, "integer");
    if (t.text.size() > 19) hard(s, "integer literal out of 64-bit range");
    Int v(t.text);
    if (v > k_int64_max + (negative ? 1 : 0)) hard(s, "integer literal out of 64-bit range");
    return negative ? Int(-v) : v;
  }

  ExprP primary()
  {
    Span s = span();
    switch (peek().kind) {
      case Tok::IntLit: return Expr{Expr::Lit{int_literal(false)}, s};
      case Tok::Minus:
        if (peek(1).kind == Tok::IntLit) {
          take();
          return Expr{Expr::Lit{int_literal(true)}, s};
        }
        break;
      case Tok::StrLit: return Expr{Expr::Lit{Str{take().text}}, s};
      case Tok::Loc: return Expr{Expr::Lit{LocV{take().text}}, s};
      case Tok::Tid:
        if (!is_keyword(peek().text)) return Expr{Expr::Lit{TidV{take().text}}, s};
        break;
      case Tok::Ident:
        if (!is_keyword(peek().text)) return Expr{Expr::Var{ident(), false}, s};
        break;
      case Tok::LBrace: {
        take();
        Expr::SetLit m;
        if (!at(Tok::RBrace)) {
          do {
            Span es = span();
            ExprP e = expr();
            if (contains_set(*e)) hard(es, "multisets cannot be nested");
            m.elems.push_back(e);
          } while (at(Tok::Comma) && (take(), true));
        }
        expect(Tok::RBrace, "'}'");
        return Expr{std::move(m), s};
      }
      case Tok::LParen: {
        take();
        ExprP e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default: break;
    }
    fail("expression");
  }

  static bool contains_set(const Expr & e)
  {
    return std::visit(
        [](const auto & n) -> bool {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Expr::SetLit>) return true;
          else if constexpr (std::is_same_v<N, Expr::Lit>) return std::holds_alternative<SetV>(n.value);
          else if constexpr (std::is_same_v<N, Expr::Concat> || std::is_same_v<N, Expr::Arith>)
            return contains_set(*n.left) || contains_set(*n.right);
          else return false;
        },
        e.node);
  }

  // -- predicates ----------------------------------------------------------

  PredP pred_unary()
  {
    Span s = span();
    if (at_kw("not")) {
      take();
      return Pred{Pred::Not{pred_unary()}, s};
    }
    return pred_atom();
  }

  PredP pred_atom()
  {
    Span s = span();
    if (at_kw("true")) {
      take();
      return Pred{Pred::True{}, s};
    }
    if (at(Tok::LParen)) {
      std::size_t save = pos_;
      try {
        take();
        PredP p = pred();
        expect(Tok::RParen, "')'");
        return p;
      } catch (const Backtrack &) {
        pos_ = save;
      }
    }
    ExprP l = expr();
    Span os = span();
    CmpOp op;
    switch (peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default:
        if (at_kw("in")) {
          take();
          return Pred{Pred::Member{l, expr()}, os};
        }
        if (at_kw("subset")) {
          take();
          return Pred{Pred::Subset{l, expr()}, os};
        }
        fail("comparison operator");
    }
    take();
    return Pred{Pred::Cmp{op, l, expr()}, os};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t far_pos_ = 0;
  std::set<std::string> far_expected_;
};

}  // namespace

System parse_system(const std::string & source)
{
  LexResult lr = lex(source);
  Parser p(std::move(lr.tokens));
  System raw = p.top([&] { return p.system(); });
  return resolve_system(std::move(raw), std::move(lr.names));
}

NetP parse_net(const std::string & source)
{
  LexResult lr = lex(source);
  Parser p(std::move(lr.tokens));
  System sys;
  sys.net = p.top([&] { return p.net(); });
  return resolve_system(std::move(sys), std::move(lr.names), false).net;
}

ProcP parse_process(const std::string & source)
{
  LexResult lr = lex(source);
  Parser p(std::move(lr.tokens));
  ProcP raw = p.top([&] { return p.process(); });
  return resolve_process(raw, std::move(lr.names));
}

ExprP parse_expr(const std::string & source)
{
  LexResult lr = lex(source);
  Parser p(std::move(lr.tokens));
  return p.top([&] { return p.expr(); });
}

PredP parse_pred(const std::string & source)
{
  LexResult lr = lex(source);
  Parser p(std::move(lr.tokens));
  return p.top([&] { return p.pred(); });
}

}  // namespace kdb
