//! Input language.
//!
//! ```text
//! ring R = F32003[x,y,z] / (x^2+y^2+z^2);
//! ideal I = -x^2+y^2, -y^2+z^2, x*y, y*z, z*x;
//! ideal J = -x^2+y^2, -y^2+z^2, x*y;
//! ideal K = maxideal;
//! option seed = 7;
//! ```
//!
//! Coefficients are kept as exact rationals so a document is independent of
//! the field it is later evaluated over. `#` and `//` start line comments.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::field::canonical_rational;
use crate::algebra::poly::format_terms;
use crate::algebra::{Field, FieldKind, Monomial, MonomialOrder, Poly, PolyRing, Rationals, MAX_VARS};

/// A parse failure with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Names of the ideals a document may declare.
pub const IDEAL_NAMES: [&str; 3] = ["I", "J", "K"];

#[derive(Clone, Debug, PartialEq)]
pub struct RingDecl {
    pub name: String,
    pub field: FieldKind,
    pub vars: Vec<String>,
    pub relations: Vec<Poly<Rationals>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdealValue {
    /// The ideal generated by all ring variables.
    MaxIdeal,
    Generators(Vec<Poly<Rationals>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub ring: RingDecl,
    pub ideals: BTreeMap<String, IdealValue>,
    pub options: BTreeMap<String, i64>,
}

impl InputDocument {
    /// The rational polynomial ring the document's polynomials live in.
    pub fn rational_ring(&self) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, self.ring.vars.clone(), MonomialOrder::DegRevLex)
            .expect("variable count checked at parse time")
    }

    pub fn ideal(&self, name: &str) -> Option<&IdealValue> {
        self.ideals.get(name)
    }

    pub fn option(&self, key: &str) -> Option<i64> {
        self.options.get(key).copied()
    }
}

impl fmt::Display for InputDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = &self.ring.vars;
        let show = |p: &Poly<Rationals>| format_terms(p.terms().iter().map(|(m, c)| (m, c.clone())), names);
        write!(
            f,
            "ring {} = {}[{}]",
            self.ring.name,
            self.ring.field,
            self.ring.vars.join(",")
        )?;
        if !self.ring.relations.is_empty() {
            let rels: Vec<String> = self.ring.relations.iter().map(show).collect();
            write!(f, " / ({})", rels.join(", "))?;
        }
        writeln!(f, ";")?;
        for (name, value) in &self.ideals {
            match value {
                IdealValue::MaxIdeal => writeln!(f, "ideal {} = maxideal;", name)?,
                IdealValue::Generators(gens) => {
                    let g: Vec<String> = gens.iter().map(show).collect();
                    writeln!(f, "ideal {} = {};", name, g.join(", "))?;
                }
            }
        }
        for (k, v) in &self.options {
            writeln!(f, "option {} = {};", k, v)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{}`", s),
            Tok::Int(n) => format!("integer `{}`", n),
            Tok::Sym(c) => format!("`{}`", c),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l0,
                column: c0,
            });
            continue;
        }
        if "=;,[]()+-*/^".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: l0,
                column: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line: l0,
            column: c0,
            message: format!("unexpected character {:?}", c),
            expected: vec![],
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    ring: Option<PolyRing<Rationals>>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error_here(format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Sym(c) {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{}`", c)]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn document(&mut self) -> PResult<InputDocument> {
        let mut ring_decl: Option<RingDecl> = None;
        let mut ideals = BTreeMap::new();
        let mut options = BTreeMap::new();
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw) if kw == "ring" => {
                    if ring_decl.is_some() {
                        return Err(self.error_here("ring declared twice", &[]));
                    }
                    self.advance();
                    ring_decl = Some(self.ring_decl()?);
                }
                Tok::Ident(kw) if kw == "ideal" => {
                    if self.ring.is_none() {
                        return Err(self.error_here("ideal declared before the ring", &["`ring`"]));
                    }
                    self.advance();
                    let at = self.pos;
                    let name = self.expect_ident("ideal name")?;
                    if !IDEAL_NAMES.contains(&name.as_str()) {
                        self.pos = at;
                        return Err(self.error_here(format!("unknown ideal name `{}`", name), &IDEAL_NAMES));
                    }
                    if ideals.contains_key(&name) {
                        self.pos = at;
                        return Err(self.error_here(format!("ideal `{}` declared twice", name), &[]));
                    }
                    self.expect_sym('=')?;
                    let value = if *self.peek() == Tok::Ident("maxideal".into()) {
                        self.advance();
                        IdealValue::MaxIdeal
                    } else {
                        IdealValue::Generators(self.poly_list()?)
                    };
                    self.expect_sym(';')?;
                    ideals.insert(name, value);
                }
                Tok::Ident(kw) if kw == "option" => {
                    self.advance();
                    let key = self.expect_ident("option name")?;
                    self.expect_sym('=')?;
                    let neg = if *self.peek() == Tok::Sym('-') {
                        self.advance();
                        true
                    } else {
                        false
                    };
                    let v = match self.peek().clone() {
                        Tok::Int(n) => {
                            let n = if neg { -n } else { n };
                            let v = n
                                .to_i64()
                                .ok_or_else(|| self.error_here("option value out of range", &[]))?;
                            self.advance();
                            v
                        }
                        _ => return Err(self.unexpected(&["integer"])),
                    };
                    self.expect_sym(';')?;
                    options.insert(key, v);
                }
                _ => return Err(self.unexpected(&["`ring`", "`ideal`", "`option`", "end of input"])),
            }
        }
        let ring = ring_decl.ok_or_else(|| self.error_here("missing ring declaration", &["`ring`"]))?;
        if !ideals.contains_key("I") {
            return Err(self.error_here("missing declaration of ideal I", &["`ideal`"]));
        }
        Ok(InputDocument { ring, ideals, options })
    }

    fn ring_decl(&mut self) -> PResult<RingDecl> {
        let name = self.expect_ident("ring name")?;
        self.expect_sym('=')?;
        let field = match self.peek().clone() {
            Tok::Ident(s) if s == "QQ" || s.starts_with('F') => s
                .parse::<FieldKind>()
                .map_err(|m| self.error_here(m, &["`QQ`", "`F<prime>`"]))?,
            _ => return Err(self.unexpected(&["`QQ`", "`F<prime>`"])),
        };
        self.advance();
        self.expect_sym('[')?;
        let mut vars = vec![self.expect_ident("variable name")?];
        while *self.peek() == Tok::Sym(',') {
            self.advance();
            let at = self.pos;
            let v = self.expect_ident("variable name")?;
            if vars.contains(&v) {
                self.pos = at;
                return Err(self.error_here(format!("variable `{}` repeated", v), &[]));
            }
            vars.push(v);
        }
        for v in &vars {
            if ["ring", "ideal", "option", "maxideal"].contains(&v.as_str()) {
                return Err(self.error_here(format!("`{}` is reserved", v), &[]));
            }
        }
        if vars.len() > MAX_VARS - 1 {
            return Err(self.error_here(format!("at most {} variables are supported", MAX_VARS - 1), &[]));
        }
        self.expect_sym(']')?;
        self.ring =
            Some(PolyRing::new(Rationals, vars.clone(), MonomialOrder::DegRevLex).expect("variable count checked"));
        let mut relations = Vec::new();
        if *self.peek() == Tok::Sym('/') {
            self.advance();
            self.expect_sym('(')?;
            relations = self.poly_list()?;
            self.expect_sym(')')?;
        }
        self.expect_sym(';')?;
        Ok(RingDecl {
            name,
            field,
            vars,
            relations,
        })
    }

    fn poly_list(&mut self) -> PResult<Vec<Poly<Rationals>>> {
        let mut out = vec![self.expr()?];
        while *self.peek() == Tok::Sym(',') {
            self.advance();
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn ring(&self) -> &PolyRing<Rationals> {
        self.ring.as_ref().expect("ring parsed before polynomials")
    }

    fn expr(&mut self) -> PResult<Poly<Rationals>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.advance();
                    let t = self.term()?;
                    acc = self.ring().add(&acc, &t);
                }
                Tok::Sym('-') => {
                    self.advance();
                    let t = self.term()?;
                    acc = self.ring().sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Poly<Rationals>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.advance();
                    let f = self.unary()?;
                    acc = self.ring().mul(&acc, &f);
                }
                Tok::Sym('/') => {
                    self.advance();
                    let at = self.pos;
                    let f = self.unary()?;
                    let c = match f.terms() {
                        [(m, c)] if m.is_one() => c.clone(),
                        _ => {
                            self.pos = at;
                            return Err(self.error_here("divisor must be a nonzero constant", &[]));
                        }
                    };
                    let inv = Rationals.inv(&c).expect("nonzero constant");
                    acc = self.ring().scale(&acc, &inv);
                }
                // coefficient juxtaposed with a monomial, e.g. `3x^2` or `2(x+y)`
                Tok::Ident(_) | Tok::Sym('(') => {
                    let f = self.unary()?;
                    acc = self.ring().mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Poly<Rationals>> {
        match self.peek() {
            Tok::Sym('-') => {
                self.advance();
                let u = self.unary()?;
                Ok(self.ring().neg(&u))
            }
            Tok::Sym('+') => {
                self.advance();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Poly<Rationals>> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.advance();
            match self.peek().clone() {
                Tok::Int(n) => {
                    let e = n
                        .to_u32()
                        .filter(|e| *e <= 1000)
                        .ok_or_else(|| self.error_here("exponent too large", &[]))?;
                    self.advance();
                    Ok(self.ring().pow(&base, e))
                }
                _ => Err(self.unexpected(&["nonnegative integer exponent"])),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> PResult<Poly<Rationals>> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                let q = canonical_rational(n, BigInt::from(1)).expect("unit denominator");
                Ok(self.ring().constant(q))
            }
            Tok::Ident(name) => {
                let idx = self.ring().names().iter().position(|v| *v == name);
                match idx {
                    Some(i) => {
                        self.advance();
                        Ok(self.ring().var(i))
                    }
                    None => Err(self.error_here(format!("unknown variable `{}`", name), &["variable"])),
                }
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(self.unexpected(&["integer", "variable", "`(`", "`-`"])),
        }
    }
}

/// Parse a document from text.
pub fn parse(text: &str) -> Result<InputDocument, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ring: None,
    };
    p.document()
}

/// Parse raw bytes; invalid UTF-8 is reported at its position like any other error.
pub fn parse_bytes(bytes: &[u8]) -> Result<InputDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let text = std::str::from_utf8(valid).expect("valid prefix");
            let line = text.matches('\n').count() + 1;
            let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Err(ParseError {
                line,
                column,
                message: "input is not valid UTF-8".into(),
                expected: vec![],
            })
        }
    }
}

/// Parse a single polynomial over `ring` (variables named as in `ring`).
pub fn parse_poly<F: Field>(ring: &PolyRing<F>, text: &str) -> Result<Poly<F>, ParseError> {
    let q = parse_rational_poly(ring.names(), text)?;
    map_poly(ring, &q).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
        expected: vec![],
    })
}

/// Parse a comma-separated list of polynomials.
pub fn parse_polys<F: Field>(ring: &PolyRing<F>, text: &str) -> Result<Vec<Poly<F>>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ring: Some(
            PolyRing::new(Rationals, ring.names().to_vec(), MonomialOrder::DegRevLex).map_err(|e| ParseError {
                line: 1,
                column: 1,
                message: e.to_string(),
                expected: vec![],
            })?,
        ),
    };
    let list = p.poly_list()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["`,`", "end of input"]));
    }
    list.iter()
        .map(|q| {
            map_poly(ring, q).map_err(|e| ParseError {
                line: 1,
                column: 1,
                message: e.to_string(),
                expected: vec![],
            })
        })
        .collect()
}

fn parse_rational_poly(names: &[String], text: &str) -> Result<Poly<Rationals>, ParseError> {
    let toks = lex(text)?;
    let ring = PolyRing::new(Rationals, names.to_vec(), MonomialOrder::DegRevLex).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
        expected: vec![],
    })?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ring: Some(ring),
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}

/// Map a rational polynomial into `ring` (same variables, any field and order).
pub fn map_poly<F: Field>(ring: &PolyRing<F>, q: &Poly<Rationals>) -> crate::Result<Poly<F>> {
    let mut terms: Vec<(Monomial, F::Elem)> = Vec::with_capacity(q.len());
    for (m, c) in q.terms() {
        let v = ring.field().from_rational(c)?;
        terms.push((*m, v));
    }
    Ok(ring.from_terms(terms))
}

/// Lift a polynomial back to rational coefficients (symmetric residues for prime fields).
pub fn lift_poly<F: Field>(ring: &PolyRing<F>, p: &Poly<F>) -> Poly<Rationals> {
    let qring = PolyRing::new(Rationals, ring.names().to_vec(), MonomialOrder::DegRevLex).expect("same arity");
    qring.from_terms(
        p.terms()
            .iter()
            .map(|(m, c)| (*m, ring.field().lift(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect(),
    )
}

/// Build a rational monomial-coefficient polynomial (used by generators of documents).
pub fn rational(n: i64, d: i64) -> BigRational {
    canonical_rational(BigInt::from(n), BigInt::from(d)).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const QUADRICS_DOC: &str = "ring R = F32003[x,y,z];\n\
        ideal I = -x^2+y^2, -y^2+z^2, x*y, y*z, z*x;\n\
        ideal J = -x^2+y^2, -y^2+z^2, x*y;\n\
        ideal K = maxideal;";

    #[test]
    fn quadrics_document_parses() {
        let doc = parse(QUADRICS_DOC).unwrap();
        assert_eq!(doc.ring.field, FieldKind::Prime { p: 32003 });
        assert_eq!(doc.ring.vars, vec!["x", "y", "z"]);
        match doc.ideal("I").unwrap() {
            IdealValue::Generators(g) => assert_eq!(g.len(), 5),
            _ => panic!(),
        }
        assert_eq!(doc.ideal("K"), Some(&IdealValue::MaxIdeal));
    }

    #[test]
    fn empty_generator_list_is_an_error_at_the_semicolon() {
        let err = parse("ring R = QQ[x,y];\nideal I = ;").unwrap_err();
        assert_eq!((err.line, err.column), (2, 11));
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn diagnostics() {
        assert!(parse("ring R = F32004[x];ideal I = x;").is_err());
        assert!(parse("ring R = QQ[x];ideal I = w;")
            .unwrap_err()
            .message
            .contains("unknown variable"));
        assert!(parse("ring R = QQ[x];ideal Q = x;").is_err());
        assert!(parse("ring R = QQ[x];").unwrap_err().message.contains("ideal I"));
        assert!(parse("ring R = QQ[x];ideal I = x/(x+1);").is_err());
        assert!(parse_bytes(b"ring R = QQ[x];\xff").is_err());
        let e = parse("ring R = QQ[x];\nideal I = x $ 2;").unwrap_err();
        assert_eq!((e.line, e.column), (2, 13));
    }

    #[test]
    fn implicit_multiplication_and_rationals() {
        let ring = PolyRing::new(Rationals, vec!["x".into(), "y".into()], MonomialOrder::DegRevLex).unwrap();
        let a = parse_poly(&ring, "3x^2 - 1/2*y(x+y)").unwrap();
        let b = parse_poly(&ring, "3*x^2 - x*y/2 - y^2/2").unwrap();
        assert_eq!(a, b);
        assert_eq!(ring.format(&a), "3*x^2-1/2*x*y-1/2*y^2");
    }

    #[test]
    fn relations_and_options_round_trip() {
        let text =
            "ring S = QQ[x,y] / (x^2-y^2); ideal I = x, y; ideal K = maxideal; option seed = -3; option kmax = 12;";
        let doc = parse(text).unwrap();
        assert_eq!(doc.ring.relations.len(), 1);
        assert_eq!(doc.option("seed"), Some(-3));
        assert_eq!(parse(&doc.to_string()).unwrap(), doc);
    }

    fn arb_doc() -> impl Strategy<Value = String> {
        let poly = proptest::collection::vec((-9i64..10, 0u32..3, 0u32..3), 1..4).prop_map(|ts| {
            ts.iter()
                .map(|(c, a, b)| format!("({})*x^{}*y^{}", c, a, b))
                .collect::<Vec<_>>()
                .join(" + ")
        });
        (
            proptest::collection::vec(poly.clone(), 1..4),
            proptest::option::of(proptest::collection::vec(poly, 1..3)),
            any::<bool>(),
            proptest::option::of(-100i64..100),
        )
            .prop_map(|(i, j, kmax, seed)| {
                let mut s = String::from("ring R = F101[x,y];\n");
                s += &format!("ideal I = {};\n", i.join(", "));
                if let Some(j) = j {
                    s += &format!("ideal J = {};\n", j.join(", "));
                }
                if kmax {
                    s += "ideal K = maxideal;\n";
                }
                if let Some(seed) = seed {
                    s += &format!("option seed = {};\n", seed);
                }
                s
            })
    }

    proptest! {
        #[test]
        fn print_parse_fixpoint(text in arb_doc()) {
            let doc = parse(&text).unwrap();
            let printed = doc.to_string();
            let again = parse(&printed).unwrap();
            prop_assert_eq!(&again, &doc);
            prop_assert_eq!(again.to_string(), printed);
        }

        #[test]
        fn parse_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            let _ = parse_bytes(&bytes);
        }
    }
}
