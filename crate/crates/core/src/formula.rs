//! Formula AST for intuitionistic propositional calculus.
//!
//! The language has exactly five constructors: bottom, variables, conjunction,
//! disjunction and implication. Negation `~A` is notation for `A -> _|_`,
//! truth for `_|_ -> _|_`, and `A <-> B` for `(A -> B) & (B -> A)`; all three
//! are desugared at construction/parse time.
//!
//! Formulas are immutable reference-counted nodes with precomputed structural
//! hash, connective count and implicational degree. Substitution shares
//! subtrees, so the iterates `A, A(A/x), A(A(A/x)/x), ...` stay polynomial in
//! memory even though they grow exponentially as trees.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};

/// An IPC formula. Cheap to clone; equality is structural.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

#[derive(Debug)]
pub(crate) enum Kind {
    Bottom,
    Var(Box<str>),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    /// Number of binary connectives (saturating; iterates overflow u32).
    conn: u64,
    /// Implicational degree: nesting depth of `->`.
    degree: u32,
}

fn mix(tag: u64, a: u64, b: u64) -> u64 {
    // FNV-style mixing; collisions are resolved by structural comparison.
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ tag;
    for x in [a, b] {
        h ^= x;
        h = h.wrapping_mul(0x1000_0000_01b3);
        h ^= h >> 29;
    }
    h
}

impl Formula {
    fn new(kind: Kind) -> Self {
        let (hash, conn, degree) = match &kind {
            Kind::Bottom => (mix(1, 0, 0), 0, 0),
            Kind::Var(name) => {
                let mut h = 0xcbf2_9ce4_8422_2325u64 ^ 2;
                for b in name.as_bytes() {
                    h ^= u64::from(*b);
                    h = h.wrapping_mul(0x1000_0000_01b3);
                }
                (h, 0, 0)
            }
            Kind::And(a, b) => (
                mix(3, a.0.hash, b.0.hash),
                a.0.conn.saturating_add(b.0.conn).saturating_add(1),
                a.0.degree.max(b.0.degree),
            ),
            Kind::Or(a, b) => (
                mix(4, a.0.hash, b.0.hash),
                a.0.conn.saturating_add(b.0.conn).saturating_add(1),
                a.0.degree.max(b.0.degree),
            ),
            Kind::Implies(a, b) => (
                mix(5, a.0.hash, b.0.hash),
                a.0.conn.saturating_add(b.0.conn).saturating_add(1),
                a.0.degree.max(b.0.degree) + 1,
            ),
        };
        Formula(Arc::new(Node {
            kind,
            hash,
            conn,
            degree,
        }))
    }

    pub fn bottom() -> Self {
        Formula::new(Kind::Bottom)
    }

    pub fn var(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "variable names must be nonempty");
        Formula::new(Kind::Var(name.into_boxed_str()))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::new(Kind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::new(Kind::Or(a, b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::new(Kind::Implies(a, b))
    }

    /// `~a`, i.e. `a -> _|_`.
    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::bottom())
    }

    /// `~_|_`.
    pub fn top() -> Self {
        Formula::not(Formula::bottom())
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.0.kind, Kind::Bottom)
    }

    pub fn as_var(&self) -> Option<&str> {
        match &self.0.kind {
            Kind::Var(n) => Some(n),
            _ => None,
        }
    }

    /// Number of binary connectives.
    pub fn connectives(&self) -> u64 {
        self.0.conn
    }

    /// Implicational degree: `d(_|_) = d(x) = 0`, max over `&`/`|`, max+1 over `->`.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub(crate) fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// The set of variable names occurring in the formula, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = FxHashSet::default();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.ptr_id()) {
                continue;
            }
            match f.kind() {
                Kind::Bottom => {}
                Kind::Var(n) => {
                    out.insert(n.to_string());
                }
                Kind::And(a, b) | Kind::Or(a, b) | Kind::Implies(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
            }
        }
        out
    }

    pub fn contains_var(&self, name: &str) -> bool {
        let mut seen = FxHashSet::default();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.ptr_id()) {
                continue;
            }
            match f.kind() {
                Kind::Bottom => {}
                Kind::Var(n) => {
                    if &**n == name {
                        return true;
                    }
                }
                Kind::And(a, b) | Kind::Or(a, b) | Kind::Implies(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        false
    }

    /// True iff every occurrence of `name` is in positive position.
    pub fn positive_in(&self, name: &str) -> bool {
        fn walk(f: &Formula, name: &str, positive: bool, bad: &mut bool) {
            if *bad {
                return;
            }
            match f.kind() {
                Kind::Bottom => {}
                Kind::Var(n) => {
                    if &**n == name && !positive {
                        *bad = true;
                    }
                }
                Kind::And(a, b) | Kind::Or(a, b) => {
                    walk(a, name, positive, bad);
                    walk(b, name, positive, bad);
                }
                Kind::Implies(a, b) => {
                    walk(a, name, !positive, bad);
                    walk(b, name, positive, bad);
                }
            }
        }
        let mut bad = false;
        walk(self, name, true, &mut bad);
        !bad
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.conn != other.0.conn {
            return false;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Bottom, Kind::Bottom) => true,
            (Kind::Var(a), Kind::Var(b)) => a == b,
            (Kind::And(a1, b1), Kind::And(a2, b2))
            | (Kind::Or(a1, b1), Kind::Or(a2, b2))
            | (Kind::Implies(a1, b1), Kind::Implies(a2, b2)) => a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl std::hash::Hash for Formula {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// Precedence levels for printing: -> is 0 (right assoc), | is 1, & is 2,
// ~ is 3, atoms are 4. `Implies(a, _|_)` prints as `~a`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let prec = match t.kind() {
                Kind::Bottom | Kind::Var(_) => 4,
                Kind::Implies(_, b) if b.is_bottom() => 3,
                Kind::Implies(..) => 0,
                Kind::Or(..) => 1,
                Kind::And(..) => 2,
            };
            let parens = prec < min;
            if parens {
                write!(f, "(")?;
            }
            match t.kind() {
                Kind::Bottom => write!(f, "_|_")?,
                Kind::Var(n) => write!(f, "{}", n)?,
                Kind::Implies(a, b) if b.is_bottom() => {
                    write!(f, "~")?;
                    go(a, 3, f)?;
                }
                Kind::Implies(a, b) => {
                    go(a, 1, f)?;
                    write!(f, " -> ")?;
                    go(b, 0, f)?;
                }
                Kind::Or(a, b) => {
                    go(a, 1, f)?;
                    write!(f, " | ")?;
                    go(b, 2, f)?;
                }
                Kind::And(a, b) => {
                    go(a, 2, f)?;
                    write!(f, " & ")?;
                    go(b, 3, f)?;
                }
            }
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

/// A simultaneous substitution; variables absent from the map are fixed.
#[derive(Clone, Default)]
pub struct Substitution {
    map: FxHashMap<Box<str>, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn single(name: impl Into<String>, image: Formula) -> Self {
        Substitution::new().bind(name, image)
    }

    pub fn bind(mut self, name: impl Into<String>, image: Formula) -> Self {
        self.map.insert(name.into().into_boxed_str(), image);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.map.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Simultaneous capture-free replacement of mapped variables by their images.
pub fn substitute(a: &Formula, s: &Substitution) -> Formula {
    if s.is_empty() {
        return a.clone();
    }
    let mut memo: FxHashMap<usize, Formula> = FxHashMap::default();
    substitute_memo(a, s, &mut memo)
}

fn substitute_memo(a: &Formula, s: &Substitution, memo: &mut FxHashMap<usize, Formula>) -> Formula {
    if let Some(hit) = memo.get(&a.ptr_id()) {
        return hit.clone();
    }
    let result = match a.kind() {
        Kind::Bottom => a.clone(),
        Kind::Var(n) => match s.get(n) {
            Some(img) => img.clone(),
            None => a.clone(),
        },
        Kind::And(l, r) => {
            let (l2, r2) = (substitute_memo(l, s, memo), substitute_memo(r, s, memo));
            if Arc::ptr_eq(&l.0, &l2.0) && Arc::ptr_eq(&r.0, &r2.0) {
                a.clone()
            } else {
                Formula::and(l2, r2)
            }
        }
        Kind::Or(l, r) => {
            let (l2, r2) = (substitute_memo(l, s, memo), substitute_memo(r, s, memo));
            if Arc::ptr_eq(&l.0, &l2.0) && Arc::ptr_eq(&r.0, &r2.0) {
                a.clone()
            } else {
                Formula::or(l2, r2)
            }
        }
        Kind::Implies(l, r) => {
            let (l2, r2) = (substitute_memo(l, s, memo), substitute_memo(r, s, memo));
            if Arc::ptr_eq(&l.0, &l2.0) && Arc::ptr_eq(&r.0, &r2.0) {
                a.clone()
            } else {
                Formula::implies(l2, r2)
            }
        }
    };
    memo.insert(a.ptr_id(), result.clone());
    result
}

/// The iterate `A^i`: `A^1 = A`, `A^{i+1} = A(A^i / x)`, all other variables fixed.
///
/// No simplification is performed; the result grows syntactically (subtrees
/// are shared, so memory stays linear in `i`).
pub fn iterate_formula(a: &Formula, x: &str, i: u32) -> Formula {
    assert!(i >= 1, "iterate_formula requires i >= 1");
    let mut current = a.clone();
    for _ in 1..i {
        current = substitute(a, &Substitution::single(x, current));
    }
    current
}

/// Implicational degree of a formula (free-function form of [`Formula::degree`]).
pub fn degree(a: &Formula) -> u32 {
    a.degree()
}

/// Syntax error with the byte offset at which parsing failed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

/// Parse the ASCII grammar: variables `[a-z][a-zA-Z0-9_]*`, `_|_`, `~A`,
/// `A & B`, `A | B`, `A -> B`, `A <-> B`, parentheses. Precedence
/// `~ > & > | > ->` with `->` right-associative and `<->` binding loosest.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let f = p.parse_iff()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> SyntaxError {
        SyntaxError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.input[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn parse_iff(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_imp()?;
        self.skip_ws();
        if self.eat("<->") {
            self.skip_ws();
            let rhs = self.parse_iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_or()?;
        self.skip_ws();
        // `<->` also starts with `<`, never with `-`; `->` is unambiguous here.
        if self.input[self.pos..].starts_with(b"->") {
            self.pos += 2;
            self.skip_ws();
            let rhs = self.parse_imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.parse_and()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'|') && !self.input[self.pos..].starts_with(b"|_") {
                self.pos += 1;
                self.skip_ws();
                let rhs = self.parse_and()?;
                lhs = Formula::or(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.parse_unary()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'&') {
                self.pos += 1;
                self.skip_ws();
                let rhs = self.parse_unary()?;
                lhs = Formula::and(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        if self.peek() == Some(b'~') {
            self.pos += 1;
            let inner = self.parse_unary()?;
            return Ok(Formula::not(inner));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_iff()?;
                self.skip_ws();
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.err("expected ')'"))
                }
            }
            Some(b'_') => {
                if self.eat("_|_") {
                    Ok(Formula::bottom())
                } else {
                    Err(self.err("expected '_|_'"))
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                self.pos += 1;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                Ok(Formula::var(name))
            }
            _ => Err(self.err("expected a formula")),
        }
    }
}
