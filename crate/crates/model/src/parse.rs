//! Parser for specification files.
//!
//! ```text
//! sort D = {d1, d2};
//! sort Q = List(D, 2);
//! proc Buffer(q: Q) =
//!     sum d: D . #q < 2 -> read(d) . Buffer(q := q ++ d)
//!   + q != [] -> send(head(q)) . Buffer(q := tail(q));
//! init Buffer([]);
//! form live = nu Y . (forall d: D . [read(d)] mu X . (<true>true && [!send(d)]X)) && [true]Y;
//! ```
//!
//! Data operators, loosest first: `=>` (right), `||`, `&&`, comparisons
//! (non-associative), `++`, `+ -`, `*`, prefix `! - #`. Formula operators,
//! loosest first: `=>` (right), `||`, `&&`, prefix `!`, `[a]`, `<a>`;
//! `mu`, `nu`, `forall` and `exists` extend as far right as possible.
//! Comments run from `%` to the end of the line.

use std::collections::HashMap;

use crate::expr::{BinOp, DataExpr, Quant, UnOp};
use crate::formula::{ActionArg, ActionFormula, FixParam, Fixpoint, MuFormula};
use crate::lps::{LinearProcess, Param, Spec, Summand};
use crate::sort::{Sort, SortKind, Ty, Value};
use crate::ModelError;

type Result<T> = std::result::Result<T, ModelError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(i64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: &[&str] = &[
    ":=", "==", "!=", "<=", ">=", "&&", "||", "=>", "->", "++", "(", ")", "[", "]", "{", "}", ",", ";", ":", ".",
    "=", "<", ">", "+", "-", "*", "#", "!", "_",
];

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = (line, col);
        let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '\'';
        let tok = if c.is_ascii_alphabetic() || (c == '_' && i + 1 < chars.len() && is_ident(chars[i + 1])) {
            let j = (i..chars.len()).find(|&j| !is_ident(chars[j])).unwrap_or(chars.len());
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let j = (i..chars.len()).find(|&j| !chars[j].is_ascii_digit()).unwrap_or(chars.len());
            let s: String = chars[i..j].iter().collect();
            let n = s.parse::<i64>().map_err(|_| ModelError::Syntax {
                line,
                col,
                msg: format!("integer literal `{s}` out of range"),
            })?;
            col += j - i;
            i = j;
            Tok::Num(n)
        } else {
            let sym = SYMBOLS.iter().find(|s| {
                let s: Vec<char> = s.chars().collect();
                chars[i..].starts_with(&s)
            });
            match sym {
                Some(s) => {
                    i += s.len();
                    col += s.len();
                    Tok::Sym(s)
                }
                None => {
                    return Err(ModelError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "sort", "proc", "init", "form", "sum", "mu", "nu", "forall", "exists", "true", "false", "head", "tail", "if",
    "List", "Int", "Bool",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    sorts: Vec<Sort>,
    consts: HashMap<String, Sort>,
    vars: Vec<(String, Sort)>,
    props: Vec<(String, Vec<Sort>)>,
    bound_props: Vec<String>,
    actions: Vec<(String, Vec<Ty>)>,
    process: Option<LinearProcess>,
}

/// Parses a complete specification file.
pub fn parse_spec(text: &str) -> Result<Spec> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sorts: Vec::new(),
        consts: HashMap::new(),
        vars: Vec::new(),
        props: Vec::new(),
        bound_props: Vec::new(),
        actions: Vec::new(),
        process: None,
    };
    let mut formulas: Vec<(String, MuFormula)> = Vec::new();
    let mut init_seen = false;
    while p.peek() != &Tok::Eof {
        let kw = p.expect_ident()?;
        match kw.as_str() {
            "sort" => p.sort_decl()?,
            "proc" => {
                if p.process.is_some() {
                    return p.fail_prev("only one process may be declared");
                }
                let proc = p.proc_decl()?;
                p.process = Some(proc);
            }
            "init" => {
                if init_seen {
                    return p.fail_prev("duplicate init");
                }
                p.init_decl()?;
                init_seen = true;
            }
            "form" => {
                if p.process.is_none() {
                    return p.fail_prev("formulas must follow the process declaration");
                }
                let name = p.expect_ident()?;
                if formulas.iter().any(|(n, _)| *n == name) {
                    return p.fail_prev(&format!("duplicate formula `{name}`"));
                }
                p.expect("=")?;
                p.bound_props.clear();
                let f = p.formula()?;
                p.expect(";")?;
                f.check_positive()?;
                formulas.push((name, f));
            }
            other => return p.fail_prev(&format!("expected declaration, found `{other}`")),
        }
    }
    let process = match p.process.take() {
        Some(proc) => proc,
        None => return p.fail("missing process declaration"),
    };
    if !init_seen {
        return p.fail("missing init declaration");
    }
    Ok(Spec {
        sorts: p.sorts,
        process,
        formulas,
    })
}

/// Parses a single formula against the process of `spec`.
pub fn parse_formula(spec: &Spec, text: &str) -> Result<MuFormula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sorts: spec.sorts.clone(),
        consts: HashMap::new(),
        vars: Vec::new(),
        props: Vec::new(),
        bound_props: Vec::new(),
        actions: Vec::new(),
        process: None,
    };
    for s in &spec.sorts {
        p.register_consts(s);
    }
    p.actions = action_signatures(&spec.process, &p.consts);
    p.process = Some(spec.process.clone());
    let f = p.formula()?;
    if p.peek() != &Tok::Eof {
        return p.fail("trailing input after formula");
    }
    f.check_positive()?;
    Ok(f)
}

fn action_signatures(proc: &LinearProcess, consts: &HashMap<String, Sort>) -> Vec<(String, Vec<Ty>)> {
    let mut out: Vec<(String, Vec<Ty>)> = Vec::new();
    for s in &proc.summands {
        if out.iter().any(|(n, _)| *n == s.action) {
            continue;
        }
        let scope: Vec<(String, Sort)> = proc
            .params
            .iter()
            .chain(&s.sums)
            .map(|p| (p.name.clone(), p.sort.clone()))
            .collect();
        let tys = s
            .args
            .iter()
            .map(|a| {
                a.infer(&|x| lookup(&scope, x).map(Sort::ty), &|c| consts.get(c).map(Sort::ty))
                    .unwrap_or(Ty::Unknown)
            })
            .collect();
        out.push((s.action.clone(), tys));
    }
    out
}

fn lookup<'a>(scope: &'a [(String, Sort)], x: &str) -> Option<&'a Sort> {
    scope.iter().rev().find(|(n, _)| n == x).map(|(_, s)| s)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is(s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        let (line, col) = self.here();
        Err(ModelError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        })
    }

    fn fail_prev<T>(&self, msg: &str) -> Result<T> {
        let t = &self.toks[self.pos.saturating_sub(1)];
        Err(ModelError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.to_string(),
        })
    }

    fn sort_err<T>(&self, at: (usize, usize), msg: String) -> Result<T> {
        Err(ModelError::Sort {
            line: at.0,
            col: at.1,
            msg,
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.fail(&format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail(&format!("expected identifier, found {}", self.describe())),
        }
    }

    fn expect_name(&mut self) -> Result<String> {
        let s = self.expect_ident()?;
        if KEYWORDS.contains(&s.as_str()) {
            return self.fail_prev(&format!("keyword `{s}` cannot be used as a name"));
        }
        Ok(s)
    }

    fn expect_int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match self.next() {
            Tok::Num(n) => Ok(if neg { -n } else { n }),
            _ => self.fail_prev("expected integer"),
        }
    }

    fn register_consts(&mut self, s: &Sort) {
        if let SortKind::Enum(cs) = &s.kind {
            for c in cs {
                self.consts.insert(c.clone(), s.clone());
            }
        }
    }

    // ---- sorts ----

    fn sort_decl(&mut self) -> Result<()> {
        let name = self.expect_name()?;
        if self.sorts.iter().any(|s| s.name == name) {
            return self.fail_prev(&format!("duplicate sort `{name}`"));
        }
        self.expect("=")?;
        let sort = if self.eat("{") {
            let mut cs: Vec<String> = Vec::new();
            loop {
                let c = self.expect_name()?;
                if cs.contains(&c) || self.consts.contains_key(&c) {
                    return self.fail_prev(&format!("duplicate constant `{c}`"));
                }
                cs.push(c);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
            Sort {
                name: name.clone(),
                kind: SortKind::Enum(cs),
            }
        } else {
            self.sort_ref()?.named(&name)
        };
        self.expect(";")?;
        self.register_consts(&sort);
        self.sorts.push(sort);
        Ok(())
    }

    fn sort_ref(&mut self) -> Result<Sort> {
        let at = self.here();
        let name = self.expect_ident()?;
        let sort = match name.as_str() {
            "Bool" => Sort::bool(),
            "Int" => {
                self.expect("(")?;
                let lo = self.expect_int()?;
                self.expect(",")?;
                let hi = self.expect_int()?;
                self.expect(")")?;
                Sort::int(lo, hi)
            }
            "List" => {
                self.expect("(")?;
                let elem = self.sort_ref()?;
                self.expect(",")?;
                let max = self.expect_int()?;
                self.expect(")")?;
                if max < 0 {
                    return self.sort_err(at, "negative list bound".into());
                }
                Sort::list(elem, max as usize)
            }
            _ => match self.sorts.iter().find(|s| s.name == name) {
                Some(s) => s.clone(),
                None => return self.sort_err(at, format!("unknown sort `{name}`")),
            },
        };
        if sort.size() == 0 {
            return self.sort_err(at, format!("sort `{sort}` is empty"));
        }
        Ok(sort)
    }

    fn typed_vars(&mut self) -> Result<Vec<Param>> {
        let mut out: Vec<Param> = Vec::new();
        loop {
            let name = self.expect_name()?;
            if out.iter().any(|p| p.name == name) {
                return self.fail_prev(&format!("duplicate variable `{name}`"));
            }
            self.expect(":")?;
            let sort = self.sort_ref()?;
            out.push(Param { name, sort });
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    // ---- process ----

    fn proc_decl(&mut self) -> Result<LinearProcess> {
        let name = self.expect_name()?;
        let params = if self.eat("(") {
            if self.eat(")") {
                Vec::new()
            } else {
                let ps = self.typed_vars()?;
                self.expect(")")?;
                ps
            }
        } else {
            Vec::new()
        };
        self.expect("=")?;
        self.vars = params.iter().map(|p| (p.name.clone(), p.sort.clone())).collect();
        let mut summands = Vec::new();
        loop {
            summands.push(self.summand(&name, &params)?);
            if !self.eat("+") {
                break;
            }
        }
        self.expect(";")?;
        self.vars.clear();
        let proc = LinearProcess {
            name,
            params,
            summands,
            init: Vec::new(),
        };
        let sigs = action_signatures(&proc, &self.consts);
        for s in &proc.summands {
            let (_, tys) = sigs.iter().find(|(n, _)| *n == s.action).unwrap();
            if tys.len() != s.args.len() {
                return Err(ModelError::Arity {
                    action: s.action.clone(),
                    expected: tys.len(),
                    actual: s.args.len(),
                });
            }
        }
        self.actions = sigs;
        Ok(proc)
    }

    fn summand(&mut self, proc_name: &str, params: &[Param]) -> Result<Summand> {
        let sums = if self.is_kw("sum") {
            self.next();
            let vs = self.typed_vars()?;
            for v in &vs {
                if params.iter().any(|p| p.name == v.name) {
                    return self.fail_prev(&format!("sum variable `{}` shadows a parameter", v.name));
                }
            }
            self.expect(".")?;
            vs
        } else {
            Vec::new()
        };
        let depth = self.vars.len();
        self.vars.extend(sums.iter().map(|p| (p.name.clone(), p.sort.clone())));

        let save = self.pos;
        let at = self.here();
        let guard = match self.data() {
            Ok(g) if self.is("->") => {
                self.next();
                self.check_ty(&g, &Ty::Bool, at, "guard")?;
                g
            }
            _ => {
                self.pos = save;
                DataExpr::bool(true)
            }
        };

        let action = self.expect_name()?;
        let mut args = Vec::new();
        if self.eat("(") {
            loop {
                args.push(self.data()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
        }
        for a in &args {
            self.infer(a, at)?;
        }
        self.expect(".")?;
        let target = self.expect_ident()?;
        if target != proc_name {
            return self.fail_prev(&format!("expected recursion on `{proc_name}`"));
        }
        let mut next: Vec<DataExpr> = params.iter().map(|p| DataExpr::var(&p.name)).collect();
        if self.eat("(") && !self.eat(")") {
            let named = matches!(self.peek(), Tok::Ident(_)) && self.peek_at(1) == &Tok::Sym(":=");
            let mut assigned = vec![false; params.len()];
            let mut i = 0;
            loop {
                let at = self.here();
                let idx = if named {
                    let x = self.expect_ident()?;
                    self.expect(":=")?;
                    match params.iter().position(|p| p.name == x) {
                        Some(k) if !assigned[k] => k,
                        Some(_) => return self.fail_prev(&format!("`{x}` assigned twice")),
                        None => return self.fail_prev(&format!("`{x}` is not a process parameter")),
                    }
                } else {
                    if i >= params.len() {
                        return self.fail("too many arguments");
                    }
                    i
                };
                let e = self.data()?;
                let want = params[idx].sort.ty();
                self.check_ty(&e, &want, at, &format!("update of `{}`", params[idx].name))?;
                next[idx] = e;
                assigned[idx] = true;
                i += 1;
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            if !named && i != params.len() {
                return self.fail_prev(&format!("expected {} arguments, found {i}", params.len()));
            }
        }
        self.vars.truncate(depth);
        Ok(Summand {
            sums,
            guard,
            action,
            args,
            next,
        })
    }

    fn init_decl(&mut self) -> Result<()> {
        let Some(proc) = self.process.take() else {
            return self.fail_prev("init must follow the process declaration");
        };
        let mut proc = proc;
        let name = self.expect_ident()?;
        if name != proc.name {
            return self.fail_prev(&format!("expected `{}`", proc.name));
        }
        let mut vals = Vec::new();
        if self.eat("(") && !self.eat(")") {
            loop {
                let at = self.here();
                let e = self.data()?;
                let k = vals.len();
                if k >= proc.params.len() {
                    return self.sort_err(at, "too many initial values".into());
                }
                let v = match e.eval(&mut Default::default()) {
                    Ok(v) if proc.params[k].sort.contains(&v) => v,
                    _ => {
                        return self.sort_err(
                            at,
                            format!("initial value `{e}` is not in sort {}", proc.params[k].sort),
                        )
                    }
                };
                vals.push(v);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
        }
        if vals.len() != proc.params.len() {
            return self.fail_prev(&format!("expected {} initial values", proc.params.len()));
        }
        self.expect(";")?;
        proc.init = vals;
        self.process = Some(proc);
        Ok(())
    }

    // ---- data ----

    fn infer(&self, e: &DataExpr, at: (usize, usize)) -> Result<Ty> {
        let vars = &self.vars;
        let consts = &self.consts;
        match e.infer(&|x| lookup(vars, x).map(Sort::ty), &|c| consts.get(c).map(Sort::ty)) {
            Ok(t) => Ok(t),
            Err(msg) => self.sort_err(at, msg),
        }
    }

    fn check_ty(&self, e: &DataExpr, want: &Ty, at: (usize, usize), what: &str) -> Result<()> {
        let t = self.infer(e, at)?;
        if !t.compatible(want) {
            return self.sort_err(at, format!("{what}: expected {want}, found {t}"));
        }
        Ok(())
    }

    fn data(&mut self) -> Result<DataExpr> {
        let at = self.here();
        let e = self.d_imp()?;
        self.infer(&e, at)?;
        Ok(e)
    }

    fn d_imp(&mut self) -> Result<DataExpr> {
        let a = self.d_or()?;
        if self.eat("=>") {
            let b = self.d_imp()?;
            return Ok(DataExpr::imp(a, b));
        }
        Ok(a)
    }

    fn d_or(&mut self) -> Result<DataExpr> {
        let mut a = self.d_and()?;
        while self.eat("||") {
            a = DataExpr::or(a, self.d_and()?);
        }
        Ok(a)
    }

    fn d_and(&mut self) -> Result<DataExpr> {
        let mut a = self.d_cmp()?;
        while self.eat("&&") {
            a = DataExpr::and(a, self.d_cmp()?);
        }
        Ok(a)
    }

    fn cmp_op(&self) -> Option<BinOp> {
        let Tok::Sym(s) = self.peek() else { return None };
        Some(match *s {
            "==" => BinOp::Eq,
            "!=" => BinOp::Ne,
            "<" => BinOp::Lt,
            "<=" => BinOp::Le,
            ">" => BinOp::Gt,
            ">=" => BinOp::Ge,
            _ => return None,
        })
    }

    fn d_cmp(&mut self) -> Result<DataExpr> {
        let a = self.d_concat()?;
        if let Some(op) = self.cmp_op() {
            self.next();
            let b = self.d_concat()?;
            if self.cmp_op().is_some() {
                return self.fail("comparisons do not associate; add parentheses");
            }
            return Ok(DataExpr::bin(op, a, b));
        }
        Ok(a)
    }

    fn d_concat(&mut self) -> Result<DataExpr> {
        let mut a = self.d_add()?;
        while self.is("++") {
            let at = self.here();
            self.next();
            let b = self.d_add()?;
            let ta = self.infer(&a, at)?;
            let tb = self.infer(&b, at)?;
            let op = if matches!(tb, Ty::List(_)) && tb.compatible(&ta) {
                BinOp::Concat
            } else {
                BinOp::Append
            };
            a = DataExpr::bin(op, a, b);
        }
        Ok(a)
    }

    fn d_add(&mut self) -> Result<DataExpr> {
        let mut a = self.d_mul()?;
        loop {
            let op = if self.is("+") {
                BinOp::Add
            } else if self.is("-") {
                BinOp::Sub
            } else {
                return Ok(a);
            };
            self.next();
            a = DataExpr::bin(op, a, self.d_mul()?);
        }
    }

    fn d_mul(&mut self) -> Result<DataExpr> {
        let mut a = self.d_unary()?;
        while self.eat("*") {
            a = DataExpr::bin(BinOp::Mul, a, self.d_unary()?);
        }
        Ok(a)
    }

    fn d_unary(&mut self) -> Result<DataExpr> {
        if self.eat("!") {
            return Ok(DataExpr::not(self.d_unary()?));
        }
        if self.eat("#") {
            return Ok(DataExpr::un(UnOp::Len, self.d_unary()?));
        }
        if self.eat("-") {
            if let Tok::Num(n) = *self.peek() {
                self.next();
                return Ok(DataExpr::int(-n));
            }
            return Ok(DataExpr::un(UnOp::Neg, self.d_unary()?));
        }
        self.d_atom()
    }

    fn d_atom(&mut self) -> Result<DataExpr> {
        let at = self.here();
        match self.next() {
            Tok::Num(n) => Ok(DataExpr::int(n)),
            Tok::Sym("(") => {
                let e = self.d_imp()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Sym("[") => {
                let mut items = Vec::new();
                if !self.eat("]") {
                    loop {
                        items.push(self.d_imp()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect("]")?;
                }
                if items.iter().all(|e| matches!(e, DataExpr::Lit(_))) {
                    let vals = items
                        .into_iter()
                        .map(|e| match e {
                            DataExpr::Lit(v) => v,
                            _ => unreachable!(),
                        })
                        .collect();
                    return Ok(DataExpr::Lit(Value::List(vals)));
                }
                Ok(DataExpr::List(items))
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => Ok(DataExpr::bool(true)),
                "false" => Ok(DataExpr::bool(false)),
                "head" | "tail" => {
                    self.expect("(")?;
                    let e = self.d_imp()?;
                    self.expect(")")?;
                    Ok(DataExpr::un(if s == "head" { UnOp::Head } else { UnOp::Tail }, e))
                }
                "if" => {
                    self.expect("(")?;
                    let c = self.d_imp()?;
                    self.expect(",")?;
                    let a = self.d_imp()?;
                    self.expect(",")?;
                    let b = self.d_imp()?;
                    self.expect(")")?;
                    Ok(DataExpr::ite(c, a, b))
                }
                "forall" | "exists" => {
                    let q = if s == "forall" { Quant::Forall } else { Quant::Exists };
                    let x = self.expect_name()?;
                    self.expect(":")?;
                    let sort = self.sort_ref()?;
                    self.expect(".")?;
                    self.vars.push((x.clone(), sort.clone()));
                    let body = self.d_imp();
                    self.vars.pop();
                    Ok(DataExpr::quant(q, &x, sort, body?))
                }
                _ if lookup(&self.vars, &s).is_some() => Ok(DataExpr::Var(s)),
                _ if self.consts.contains_key(&s) => Ok(DataExpr::Lit(Value::Sym(s))),
                _ => Err(ModelError::Sort {
                    line: at.0,
                    col: at.1,
                    msg: format!("unbound identifier `{s}`"),
                }),
            },
            _ => {
                self.pos -= 1;
                self.fail(&format!("expected expression, found {}", self.describe()))
            }
        }
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<MuFormula> {
        self.f_imp()
    }

    fn f_imp(&mut self) -> Result<MuFormula> {
        let a = self.f_or()?;
        if self.eat("=>") {
            let b = self.f_imp()?;
            return Ok(match (a, b) {
                (MuFormula::Data(x), MuFormula::Data(y)) => MuFormula::Data(DataExpr::imp(x, y)),
                (a, b) => MuFormula::Imp(Box::new(a), Box::new(b)),
            });
        }
        Ok(a)
    }

    fn f_or(&mut self) -> Result<MuFormula> {
        let a = self.f_and()?;
        if self.eat("||") {
            let b = self.f_or()?;
            return Ok(match (a, b) {
                (MuFormula::Data(x), MuFormula::Data(y)) => MuFormula::Data(DataExpr::or(x, y)),
                (a, b) => MuFormula::or(a, b),
            });
        }
        Ok(a)
    }

    fn f_and(&mut self) -> Result<MuFormula> {
        let a = self.f_unary()?;
        if self.eat("&&") {
            let b = self.f_and()?;
            return Ok(match (a, b) {
                (MuFormula::Data(x), MuFormula::Data(y)) => MuFormula::Data(DataExpr::and(x, y)),
                (a, b) => MuFormula::and(a, b),
            });
        }
        Ok(a)
    }

    fn f_unary(&mut self) -> Result<MuFormula> {
        if self.eat("!") {
            return Ok(match self.f_unary()? {
                MuFormula::Data(e) => MuFormula::Data(DataExpr::not(e)),
                f => MuFormula::Not(Box::new(f)),
            });
        }
        if self.eat("[") {
            let a = self.action_formula()?;
            self.expect("]")?;
            return Ok(MuFormula::must(a, self.f_unary()?));
        }
        if self.eat("<") {
            let a = self.action_formula()?;
            self.expect(">")?;
            return Ok(MuFormula::may(a, self.f_unary()?));
        }
        if self.is_kw("mu") || self.is_kw("nu") {
            return self.fixpoint();
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            let q = if self.is_kw("forall") { Quant::Forall } else { Quant::Exists };
            self.next();
            let x = self.formula_var()?;
            self.expect(":")?;
            let sort = self.sort_ref()?;
            self.expect(".")?;
            self.vars.push((x.clone(), sort.clone()));
            let body = self.f_imp();
            self.vars.pop();
            return Ok(MuFormula::Quant(q, x, sort, Box::new(body?)));
        }
        self.f_atom()
    }

    fn formula_var(&mut self) -> Result<String> {
        let x = self.expect_name()?;
        if let Some(proc) = &self.process {
            if proc.param_index(&x).is_some() {
                return self.fail_prev(&format!("formula variable `{x}` shadows a process parameter"));
            }
        }
        Ok(x)
    }

    fn fixpoint(&mut self) -> Result<MuFormula> {
        let sigma = if self.is_kw("mu") { Fixpoint::Mu } else { Fixpoint::Nu };
        self.next();
        let name = self.expect_name()?;
        if self.bound_props.contains(&name) {
            return self.fail_prev(&format!("propositional variable `{name}` is bound twice"));
        }
        self.bound_props.push(name.clone());
        let mut params: Vec<FixParam> = Vec::new();
        if self.eat("(") {
            loop {
                let x = self.formula_var()?;
                if params.iter().any(|p| p.name == x) {
                    return self.fail_prev(&format!("duplicate parameter `{x}`"));
                }
                self.expect(":")?;
                let sort = self.sort_ref()?;
                self.expect(":=")?;
                let at = self.here();
                let init = self.data()?;
                self.check_ty(&init, &sort.ty(), at, "initial value")?;
                params.push(FixParam { name: x, sort, init });
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
        }
        self.expect(".")?;
        let depth = self.vars.len();
        self.vars.extend(params.iter().map(|p| (p.name.clone(), p.sort.clone())));
        self.props.push((name.clone(), params.iter().map(|p| p.sort.clone()).collect()));
        let body = self.f_imp();
        self.props.pop();
        self.vars.truncate(depth);
        Ok(MuFormula::Fix {
            sigma,
            name,
            params,
            body: Box::new(body?),
        })
    }

    fn f_atom(&mut self) -> Result<MuFormula> {
        let at = self.here();
        if let Tok::Ident(x) = self.peek().clone() {
            if let Some((_, sorts)) = self.props.iter().rev().find(|(n, _)| *n == x).cloned() {
                self.next();
                let mut args = Vec::new();
                if self.eat("(") {
                    loop {
                        args.push(self.data()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect(")")?;
                }
                if args.len() != sorts.len() {
                    return self.sort_err(at, format!("`{x}` expects {} arguments, found {}", sorts.len(), args.len()));
                }
                for (a, s) in args.iter().zip(&sorts) {
                    self.check_ty(a, &s.ty(), at, &format!("argument of `{x}`"))?;
                }
                return Ok(MuFormula::Var(x, args));
            }
        }
        if self.is("(") {
            let save = self.pos;
            self.next();
            let inner = self.f_imp().and_then(|f| self.expect(")").map(|_| f));
            let data_follows = self.cmp_op().is_some() || self.is("++") || self.is("+") || self.is("-") || self.is("*");
            match inner {
                Ok(f) if !data_follows => return Ok(f),
                _ => self.pos = save,
            }
        }
        let e = self.d_cmp()?;
        self.check_ty(&e, &Ty::Bool, at, "formula")?;
        Ok(MuFormula::Data(e))
    }

    fn action_formula(&mut self) -> Result<ActionFormula> {
        let mut a = self.a_and()?;
        while self.eat("||") {
            a = ActionFormula::Or(Box::new(a), Box::new(self.a_and()?));
        }
        Ok(a)
    }

    fn a_and(&mut self) -> Result<ActionFormula> {
        let mut a = self.a_unary()?;
        while self.eat("&&") {
            a = ActionFormula::And(Box::new(a), Box::new(self.a_unary()?));
        }
        Ok(a)
    }

    fn a_unary(&mut self) -> Result<ActionFormula> {
        if self.eat("!") {
            return Ok(ActionFormula::Not(Box::new(self.a_unary()?)));
        }
        if self.eat("(") {
            let a = self.action_formula()?;
            self.expect(")")?;
            return Ok(a);
        }
        let at = self.here();
        let name = self.expect_ident()?;
        match name.as_str() {
            "true" => return Ok(ActionFormula::Const(true)),
            "false" => return Ok(ActionFormula::Const(false)),
            _ => {}
        }
        if !self.eat("(") {
            return Ok(ActionFormula::act(&name, None));
        }
        let mut args = Vec::new();
        loop {
            if self.eat("_") {
                args.push(ActionArg::Any);
            } else {
                args.push(ActionArg::Expr(self.data()?));
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        if let Some((_, tys)) = self.actions.iter().find(|(n, _)| *n == name).cloned() {
            if tys.len() != args.len() {
                return Err(ModelError::Arity {
                    action: name,
                    expected: args.len(),
                    actual: tys.len(),
                });
            }
            for (a, t) in args.iter().zip(&tys) {
                if let ActionArg::Expr(e) = a {
                    self.check_ty(e, t, at, &format!("argument of `{name}`"))?;
                }
            }
        }
        Ok(ActionFormula::act(&name, Some(args)))
    }
}
