use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceText};
use crate::mapping::GavMapping;
use crate::model::{
    Atom, CmpOp, Comparison, Conjunction, Constant, Database, DenialConstraint, Fact, InclusionDependency, Schema,
    Term, UnionQuery, NULL_PREFIX,
};
use crate::program::{AspProgram, CountAgg, Literal, QueryPred, Rule};

const ANON: &str = "_#";

struct Parser<'a> {
    src: &'a SourceText,
    toks: Vec<Token>,
    pos: usize,
    anon: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a SourceText) -> PResult<Self> {
        Ok(Parser { src, toks: tokenize(src)?, pos: 0, anon: 0 })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn location(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => {
                let lines: Vec<&str> = self.src.content.split('\n').collect();
                (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1)
            }
        }
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.location();
        ParseError::new(&self.src.origin, line, col, message)
    }

    fn error_at(&self, loc: (usize, usize), message: impl Into<String>) -> ParseError {
        ParseError::new(&self.src.origin, loc.0, loc.1, message)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error_here(format!("expected {expected}, found {t}")),
            None => self.error_here(format!("expected {expected}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn integer(&mut self) -> PResult<usize> {
        match self.peek() {
            Some(Tok::Int(s)) => {
                let n = s.parse().map_err(|_| self.error_here(format!("invalid number {s}")))?;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let t = match self.peek() {
            Some(Tok::Var(v)) => Term::Var(v.clone()),
            Some(Tok::Anon) => {
                self.anon += 1;
                Term::Var(format!("{ANON}{}", self.anon))
            }
            Some(Tok::Ident(s)) | Some(Tok::Int(s)) | Some(Tok::Quoted(s)) => self.constant_term(s.clone())?,
            Some(Tok::Hash(_)) => {
                return Err(self.error_here(format!("constants starting with `{NULL_PREFIX}` are reserved")))
            }
            _ => return Err(self.unexpected("a term")),
        };
        self.pos += 1;
        Ok(t)
    }

    fn constant_term(&self, s: String) -> PResult<Term> {
        if s.starts_with(NULL_PREFIX) {
            return Err(self.error_here(format!("constants starting with `{NULL_PREFIX}` are reserved")));
        }
        Ok(Term::Const(Constant::new(s)))
    }

    fn terms_in_parens(&mut self) -> PResult<Vec<Term>> {
        let mut terms = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                terms.push(self.term()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(&Tok::Comma)?;
            }
        }
        Ok(terms)
    }

    fn atom(&mut self) -> PResult<Atom> {
        let name = self.ident()?;
        let terms = self.terms_in_parens()?;
        Ok(Atom::new(name, terms))
    }

    fn cmp_op(&mut self) -> Option<CmpOp> {
        let op = match self.peek()? {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    fn is_cmp_op(tok: Option<&Tok>) -> bool {
        matches!(tok, Some(Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge))
    }

    fn comparison(&mut self) -> PResult<Comparison> {
        let left = self.term()?;
        let op = self.cmp_op().ok_or_else(|| self.unexpected("a comparison operator"))?;
        let right = self.term()?;
        Ok(Comparison::new(left, op, right))
    }

    fn count_agg(&mut self) -> PResult<CountAgg> {
        match self.bump() {
            Some(Tok::Hash(h)) if h == "count" => {}
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`#count`"));
            }
        }
        self.expect(&Tok::LBrace)?;
        let mut vars = Vec::new();
        if !self.eat(&Tok::Colon) {
            loop {
                match self.term()? {
                    Term::Var(v) => vars.push(v),
                    Term::Const(_) => {
                        self.pos -= 1;
                        return Err(self.unexpected("a variable"));
                    }
                }
                if self.eat(&Tok::Colon) {
                    break;
                }
                self.expect(&Tok::Comma)?;
            }
        }
        let atom = self.atom()?;
        self.expect(&Tok::RBrace)?;
        Ok(CountAgg { vars, atom })
    }

    /// A body literal; `allow_asp` admits negation and aggregates.
    fn literal(&mut self, allow_asp: bool) -> PResult<Literal> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "not" && matches!(self.peek_at(1), Some(Tok::Ident(_))) => {
                if !allow_asp {
                    return Err(self.error_here("negation is not allowed here"));
                }
                self.pos += 1;
                Ok(Literal::Neg(self.atom()?))
            }
            Some(Tok::Hash(h)) if h == "count" => {
                if !allow_asp {
                    return Err(self.error_here("aggregates are not allowed here"));
                }
                let left = self.count_agg()?;
                if !matches!(self.cmp_op(), Some(CmpOp::Eq)) {
                    self.pos -= 1;
                    return Err(self.unexpected("`=` between two #count aggregates"));
                }
                let right = self.count_agg()?;
                Ok(Literal::CountEq(left, right))
            }
            Some(Tok::Ident(_)) if !Self::is_cmp_op(self.peek_at(1)) => Ok(Literal::Pos(self.atom()?)),
            _ => Ok(Literal::Cmp(self.comparison()?)),
        }
    }

    fn body(&mut self, allow_asp: bool) -> PResult<Vec<Literal>> {
        let mut lits = vec![self.literal(allow_asp)?];
        while self.eat(&Tok::Comma) {
            lits.push(self.literal(allow_asp)?);
        }
        Ok(lits)
    }

    /// Atoms and comparisons of a query or constraint body.
    fn conjunctive_body(&mut self) -> PResult<(Vec<Atom>, Vec<Comparison>)> {
        let mut atoms = Vec::new();
        let mut cmps = Vec::new();
        for l in self.body(false)? {
            match l {
                Literal::Pos(a) => atoms.push(a),
                Literal::Cmp(c) => cmps.push(c),
                _ => unreachable!("only atoms and comparisons are parsed here"),
            }
        }
        Ok((atoms, cmps))
    }

    /// `rel name/arity.`
    fn rel_decl(&mut self) -> PResult<(String, usize)> {
        self.pos += 1;
        let name = self.ident()?;
        self.expect(&Tok::Slash)?;
        let arity = self.integer()?;
        self.expect(&Tok::Dot)?;
        Ok((name, arity))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) && matches!(self.peek_at(1), Some(Tok::Ident(_)))
    }
}

/// Replaces `_` placeholders by fresh variables `A1, A2, ...` that do not
/// clash with the variables of the statement.
struct Anon {
    map: HashMap<String, String>,
}

impl Anon {
    fn new<'t>(terms: impl Iterator<Item = &'t Term>) -> Self {
        let mut used = BTreeSet::new();
        let mut placeholders = BTreeSet::new();
        for t in terms {
            if let Term::Var(v) = t {
                if v.starts_with(ANON) {
                    placeholders.insert(v.clone());
                } else {
                    used.insert(v.clone());
                }
            }
        }
        let mut map = HashMap::new();
        let mut n = 0;
        let mut ordered: Vec<String> = placeholders.into_iter().collect();
        ordered.sort_by_key(|p| p[ANON.len()..].parse::<usize>().unwrap_or(0));
        for p in ordered {
            let fresh = loop {
                n += 1;
                let cand = format!("A{n}");
                if !used.contains(&cand) {
                    break cand;
                }
            };
            map.insert(p, fresh);
        }
        Anon { map }
    }

    fn term(&self, t: &mut Term) {
        if let Term::Var(v) = t {
            if let Some(f) = self.map.get(v) {
                *v = f.clone();
            }
        }
    }

    fn atom(&self, a: &mut Atom) {
        a.terms.iter_mut().for_each(|t| self.term(t));
    }

    fn cmp(&self, c: &mut Comparison) {
        self.term(&mut c.left);
        self.term(&mut c.right);
    }
}

fn literal_terms(l: &Literal) -> Vec<&Term> {
    match l {
        Literal::Pos(a) | Literal::Neg(a) => a.terms.iter().collect(),
        Literal::Cmp(c) => vec![&c.left, &c.right],
        Literal::CountEq(x, y) => x.atom.terms.iter().chain(y.atom.terms.iter()).collect(),
    }
}

fn fix_anon_rule(rule: &mut Rule) {
    let anon = {
        let terms = rule.head.iter().flat_map(|a| a.terms.iter()).chain(rule.body.iter().flat_map(literal_terms));
        Anon::new(terms)
    };
    rule.head.iter_mut().for_each(|a| anon.atom(a));
    for l in &mut rule.body {
        match l {
            Literal::Pos(a) | Literal::Neg(a) => anon.atom(a),
            Literal::Cmp(c) => anon.cmp(c),
            Literal::CountEq(x, y) => {
                anon.atom(&mut x.atom);
                anon.atom(&mut y.atom);
            }
        }
    }
}

fn fix_anon_conj(head: &mut [Term], atoms: &mut [Atom], cmps: &mut [Comparison]) {
    let anon = Anon::new(
        head.iter()
            .chain(atoms.iter().flat_map(|a| a.terms.iter()))
            .chain(cmps.iter().flat_map(|c| [&c.left, &c.right])),
    );
    head.iter_mut().for_each(|t| anon.term(t));
    atoms.iter_mut().for_each(|a| anon.atom(a));
    cmps.iter_mut().for_each(|c| anon.cmp(c));
}

enum SchemaStmt {
    Rel(String, usize),
    Key(String, Vec<usize>),
    Dc(DenialConstraint),
    Ind(InclusionDependency),
}

/// Parse a schema: `rel r/n.`, `key r = {i,...}.`, denial constraints
/// `:- body.` and inclusion dependencies `r1(..) -> r2(..).` with `_` for
/// existential positions.
pub fn parse_schema(src: &SourceText) -> Result<Schema, ParseError> {
    let mut p = Parser::new(src)?;
    let mut stmts = Vec::new();
    while !p.at_end() {
        let loc = p.location();
        let stmt = if p.at_keyword("rel") {
            let (name, arity) = p.rel_decl()?;
            SchemaStmt::Rel(name, arity)
        } else if p.at_keyword("key") {
            p.pos += 1;
            let name = p.ident()?;
            p.expect(&Tok::Eq)?;
            p.expect(&Tok::LBrace)?;
            let mut key = vec![p.integer()?];
            while p.eat(&Tok::Comma) {
                key.push(p.integer()?);
            }
            p.expect(&Tok::RBrace)?;
            p.expect(&Tok::Dot)?;
            SchemaStmt::Key(name, key)
        } else if p.eat(&Tok::If) {
            let (mut atoms, mut cmps) = p.conjunctive_body()?;
            p.expect(&Tok::Dot)?;
            fix_anon_conj(&mut [], &mut atoms, &mut cmps);
            SchemaStmt::Dc(DenialConstraint::new(atoms, cmps))
        } else {
            let lhs = p.atom()?;
            p.expect(&Tok::Arrow)?;
            let rhs = p.atom()?;
            p.expect(&Tok::Dot)?;
            let mut atoms = [lhs, rhs];
            fix_anon_conj(&mut [], &mut atoms, &mut []);
            let [lhs, rhs] = atoms;
            SchemaStmt::Ind(InclusionDependency::new(lhs, rhs))
        };
        stmts.push((loc, stmt));
    }

    let mut schema = Schema::new();
    let ordered = stmts
        .iter()
        .filter(|(_, s)| matches!(s, SchemaStmt::Rel(..)))
        .chain(stmts.iter().filter(|(_, s)| matches!(s, SchemaStmt::Key(..))));
    let rest = stmts.iter().filter(|(_, s)| matches!(s, SchemaStmt::Dc(_) | SchemaStmt::Ind(_)));
    for (loc, stmt) in ordered.chain(rest) {
        let result = match stmt {
            SchemaStmt::Rel(n, a) => schema.add_relation(n, *a),
            SchemaStmt::Key(n, k) => schema.set_key(n, k.iter().copied()),
            SchemaStmt::Dc(dc) => schema.add_dc(dc.clone()),
            SchemaStmt::Ind(ind) => schema.add_ind(ind.clone()),
        };
        result.map_err(|e| p.error_at(*loc, e.to_string()))?;
    }
    Ok(schema)
}

/// Parse ground facts `r(v1,...,vn).`, checking relation arities against
/// `schema` when one is given.
pub fn parse_facts(src: &SourceText, schema: Option<&Schema>) -> Result<Database, ParseError> {
    let mut p = Parser::new(src)?;
    let mut db = Database::new();
    while !p.at_end() {
        let loc = p.location();
        let atom = p.atom()?;
        p.expect(&Tok::Dot)?;
        let mut tuple = Vec::with_capacity(atom.arity());
        for t in atom.terms {
            match t {
                Term::Const(c) => tuple.push(c),
                Term::Var(v) => {
                    let shown = if v.starts_with(ANON) { "_" } else { v.as_str() };
                    return Err(p.error_at(loc, format!("facts must be ground, found variable {shown}")));
                }
            }
        }
        if let Some(schema) = schema {
            let sig = schema.relation(&atom.relation).map_err(|e| p.error_at(loc, e.to_string()))?;
            if sig.arity != tuple.len() {
                return Err(p.error_at(
                    loc,
                    format!("{} has arity {} but the fact has {} values", atom.relation, sig.arity, tuple.len()),
                ));
            }
        }
        db.insert(Fact::new(atom.relation, tuple));
    }
    Ok(db)
}

/// One rule `head :- atoms, comparisons.` of a query or mapping.
fn conjunctive_rule(p: &mut Parser) -> PResult<(Atom, Conjunction)> {
    let mut head = p.atom()?;
    p.expect(&Tok::If)?;
    let (mut atoms, mut cmps) = p.conjunctive_body()?;
    p.expect(&Tok::Dot)?;
    fix_anon_conj(&mut head.terms, &mut atoms, &mut cmps);
    let conj = Conjunction::new(head.terms.clone(), atoms, cmps);
    Ok((head, conj))
}

/// Parse a union of conjunctive queries: rules sharing one head predicate.
pub fn parse_query(src: &SourceText) -> Result<UnionQuery, ParseError> {
    let mut p = Parser::new(src)?;
    let mut name: Option<(String, usize)> = None;
    let mut disjuncts = Vec::new();
    while !p.at_end() {
        let loc = p.location();
        let (head, conj) = conjunctive_rule(&mut p)?;
        match &name {
            None => name = Some((head.relation.clone(), head.arity())),
            Some((n, a)) if *n != head.relation || *a != head.arity() => {
                return Err(p.error_at(
                    loc,
                    format!("query rules disagree on the head: {n}/{a} vs {}/{}", head.relation, head.arity()),
                ))
            }
            Some(_) => {}
        }
        conj.validate().map_err(|e| p.error_at(loc, e.to_string()))?;
        disjuncts.push(conj);
    }
    let (name, arity) = name.ok_or_else(|| p.error_here("empty query"))?;
    UnionQuery::new(name, arity, disjuncts).map_err(|e| p.error_at((1, 1), e.to_string()))
}

/// Parse a GAV mapping: optional `rel src/n.` declarations of source
/// relations, then rules `g(X,...) :- s1(...), ... .`
pub fn parse_mapping(src: &SourceText) -> Result<GavMapping, ParseError> {
    let mut p = Parser::new(src)?;
    let mut sources: BTreeMap<String, usize> = BTreeMap::new();
    let mut rules: BTreeMap<String, (usize, Vec<Conjunction>)> = BTreeMap::new();
    while !p.at_end() {
        let loc = p.location();
        if p.at_keyword("rel") {
            let (name, arity) = p.rel_decl()?;
            if sources.insert(name.clone(), arity).is_some() {
                return Err(p.error_at(loc, format!("source relation {name} is declared twice")));
            }
            continue;
        }
        let (head, conj) = conjunctive_rule(&mut p)?;
        conj.validate().map_err(|e| p.error_at(loc, e.to_string()))?;
        let entry = rules.entry(head.relation.clone()).or_insert((head.arity(), Vec::new()));
        if entry.0 != head.arity() {
            return Err(p.error_at(
                loc,
                format!("mapping rules for {} disagree on arity ({} vs {})", head.relation, entry.0, head.arity()),
            ));
        }
        entry.1.push(conj);
    }
    let mut queries = BTreeMap::new();
    for (g, (arity, disjuncts)) in rules {
        let q = UnionQuery::new(g.clone(), arity, disjuncts).map_err(|e| p.error_at((1, 1), e.to_string()))?;
        queries.insert(g, q);
    }
    Ok(GavMapping { queries, sources: if sources.is_empty() { None } else { Some(sources) } })
}

/// Parse an ASP program in the emitted syntax: rules with ` v ` (or `|`)
/// disjunction, `not`, comparisons, `#count{..} = #count{..}`, constraints
/// `:- body.`, facts, and an optional query statement `q(X1,...)?`.
pub fn parse_asp(src: &SourceText) -> Result<AspProgram, ParseError> {
    let mut p = Parser::new(src)?;
    let mut program = AspProgram::new();
    while !p.at_end() {
        let loc = p.location();
        let mut head = Vec::new();
        if !matches!(p.peek(), Some(Tok::If)) {
            head.push(p.atom()?);
            loop {
                let disj = match p.peek() {
                    Some(Tok::Pipe) => true,
                    Some(Tok::Ident(s)) => s == "v" && matches!(p.peek_at(1), Some(Tok::Ident(_))),
                    _ => false,
                };
                if !disj {
                    break;
                }
                p.pos += 1;
                head.push(p.atom()?);
            }
            if head.len() == 1 && p.eat(&Tok::Question) {
                let q = head.pop().expect("one head atom");
                if program.query.is_some() {
                    return Err(p.error_at(loc, "more than one query statement"));
                }
                program.query = Some(QueryPred { name: q.relation, arity: q.terms.len() });
                continue;
            }
        }
        let body = if p.eat(&Tok::If) { p.body(true)? } else { Vec::new() };
        if head.is_empty() && body.is_empty() {
            return Err(p.error_at(loc, "empty rule"));
        }
        p.expect(&Tok::Dot)?;
        let mut rule = Rule::new(head, body);
        fix_anon_rule(&mut rule);
        if let Some(v) = rule.unsafe_var() {
            return Err(p.error_at(loc, format!("unsafe variable {v}")));
        }
        program.push(rule);
    }
    Ok(program)
}
