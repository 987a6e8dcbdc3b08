//! Boolean expressions over `x0..x{n-1}`: AST, text grammar, DIMACS CNF
//! ingestion, truth tables and the algebraic normal form.
//!
//! Row `x` of a truth table assigns `x0` to the most significant bit of `x`,
//! which is the same convention the simulator uses for basis states.

use std::fmt;

use thiserror::Error;

/// Largest variable count a truth table may have.
pub const MAX_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} out of range for {var_count} variables")]
    VarOutOfRange { index: usize, var_count: usize },
    #[error("assignment has {got} bits, expression needs at least {needed}")]
    AssignmentLength { got: usize, needed: usize },
    #[error("DIMACS: {0}")]
    Dimacs(String),
    #[error("{0} variables exceeds the limit of {MAX_VARS}")]
    TooManyVars(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Var(usize),
    Const(bool),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Xor(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn var(index: usize) -> Self {
        BoolExpr::Var(index)
    }

    /// Positive literal for `value == true`, negated literal otherwise.
    pub fn literal(index: usize, value: bool) -> Self {
        if value {
            BoolExpr::Var(index)
        } else {
            BoolExpr::Var(index).not()
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        BoolExpr::Not(Box::new(self))
    }

    /// Conjunction; an empty list is `1` and a single operand is returned as is.
    pub fn and_all(mut items: Vec<BoolExpr>) -> Self {
        match items.len() {
            0 => BoolExpr::Const(true),
            1 => items.pop().unwrap(),
            _ => BoolExpr::And(items),
        }
    }

    /// Disjunction; an empty list is `0`.
    pub fn or_all(mut items: Vec<BoolExpr>) -> Self {
        match items.len() {
            0 => BoolExpr::Const(false),
            1 => items.pop().unwrap(),
            _ => BoolExpr::Or(items),
        }
    }

    /// Exclusive or; an empty list is `0`.
    pub fn xor_all(mut items: Vec<BoolExpr>) -> Self {
        match items.len() {
            0 => BoolExpr::Const(false),
            1 => items.pop().unwrap(),
            _ => BoolExpr::Xor(items),
        }
    }

    /// One more than the largest variable index used, or 0 for constants.
    pub fn min_var_count(&self) -> usize {
        match self {
            BoolExpr::Var(i) => i + 1,
            BoolExpr::Const(_) => 0,
            BoolExpr::Not(c) => c.min_var_count(),
            BoolExpr::And(cs) | BoolExpr::Or(cs) | BoolExpr::Xor(cs) => {
                cs.iter().map(BoolExpr::min_var_count).max().unwrap_or(0)
            }
        }
    }

    fn check_vars(&self, var_count: usize) -> Result<(), ExprError> {
        let needed = self.min_var_count();
        if needed > var_count {
            return Err(ExprError::VarOutOfRange {
                index: needed - 1,
                var_count,
            });
        }
        Ok(())
    }

    /// Flattens directly nested operators of the same kind, e.g.
    /// `And[And[a,b],c]` becomes `And[a,b,c]`.
    pub fn canonicalize(&self) -> BoolExpr {
        fn flatten(
            children: &[BoolExpr],
            same: fn(&BoolExpr) -> Option<&Vec<BoolExpr>>,
        ) -> Vec<BoolExpr> {
            let mut out = Vec::with_capacity(children.len());
            for child in children {
                let child = child.canonicalize();
                match same(&child) {
                    Some(inner) => out.extend(inner.iter().cloned()),
                    None => out.push(child),
                }
            }
            out
        }
        match self {
            BoolExpr::Var(_) | BoolExpr::Const(_) => self.clone(),
            BoolExpr::Not(c) => c.canonicalize().not(),
            BoolExpr::And(cs) => BoolExpr::And(flatten(cs, |e| match e {
                BoolExpr::And(v) => Some(v),
                _ => None,
            })),
            BoolExpr::Or(cs) => BoolExpr::Or(flatten(cs, |e| match e {
                BoolExpr::Or(v) => Some(v),
                _ => None,
            })),
            BoolExpr::Xor(cs) => BoolExpr::Xor(flatten(cs, |e| match e {
                BoolExpr::Xor(v) => Some(v),
                _ => None,
            })),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(_) => 1,
            BoolExpr::Xor(_) => 2,
            BoolExpr::And(_) => 3,
            BoolExpr::Not(_) => 4,
            BoolExpr::Var(_) | BoolExpr::Const(_) => 5,
        }
    }

    /// Renders in the text grammar accepted by [`parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // nested binary operators are always grouped
        let nary = |f: &mut fmt::Formatter<'_>, cs: &[BoolExpr], op: &str| {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(op)?;
                }
                if c.precedence() <= 3 {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "{c}")?;
                }
            }
            Ok(())
        };
        match self {
            BoolExpr::Var(i) => write!(f, "x{i}"),
            BoolExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolExpr::Not(c) => {
                if c.precedence() < 4 {
                    write!(f, "~({c})")
                } else {
                    write!(f, "~{c}")
                }
            }
            BoolExpr::And(cs) => nary(f, cs, "&"),
            BoolExpr::Xor(cs) => nary(f, cs, "^"),
            BoolExpr::Or(cs) => nary(f, cs, "|"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Var(usize),
    Const(bool),
    Not,
    And,
    Xor,
    Or,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '~' => Token::Not,
            '&' => Token::And,
            '^' => Token::Xor,
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            'x' => {
                let digits_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    return Err(ExprError::Syntax {
                        pos: start,
                        msg: "expected variable index after 'x'".into(),
                    });
                }
                let digits: String = chars[digits_start..i].iter().collect();
                let index = digits.parse().map_err(|_| ExprError::Syntax {
                    pos: start,
                    msg: format!("variable index '{digits}' too large"),
                })?;
                Token::Var(index)
            }
            '0' | '1' => {
                if i < chars.len() && chars[i].is_ascii_digit() {
                    return Err(ExprError::Syntax {
                        pos: start,
                        msg: "constants must be a single 0 or 1".into(),
                    });
                }
                Token::Const(c == '1')
            }
            other => {
                return Err(ExprError::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
    var_count: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.cursor).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.cursor).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn chain(
        &mut self,
        op: Token,
        next: fn(&mut Self) -> Result<BoolExpr, ExprError>,
        build: fn(Vec<BoolExpr>) -> BoolExpr,
    ) -> Result<BoolExpr, ExprError> {
        let mut items = vec![next(self)?];
        while self.peek() == Some(op) {
            self.cursor += 1;
            items.push(next(self)?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            build(items)
        })
    }

    fn or(&mut self) -> Result<BoolExpr, ExprError> {
        self.chain(Token::Or, Self::xor, BoolExpr::Or)
    }

    fn xor(&mut self) -> Result<BoolExpr, ExprError> {
        self.chain(Token::Xor, Self::and, BoolExpr::Xor)
    }

    fn and(&mut self) -> Result<BoolExpr, ExprError> {
        self.chain(Token::And, Self::unary, BoolExpr::And)
    }

    fn unary(&mut self) -> Result<BoolExpr, ExprError> {
        match self.peek() {
            Some(Token::Not) => {
                self.cursor += 1;
                Ok(self.unary()?.not())
            }
            Some(Token::LParen) => {
                self.cursor += 1;
                let inner = self.or()?;
                if self.peek() != Some(Token::RParen) {
                    return self.error("expected ')'");
                }
                self.cursor += 1;
                Ok(inner)
            }
            Some(Token::Var(index)) => {
                if index >= self.var_count {
                    return Err(ExprError::VarOutOfRange {
                        index,
                        var_count: self.var_count,
                    });
                }
                self.cursor += 1;
                Ok(BoolExpr::Var(index))
            }
            Some(Token::Const(b)) => {
                self.cursor += 1;
                Ok(BoolExpr::Const(b))
            }
            Some(_) => self.error("expected operand"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses the expression grammar: variables `x0..x{n-1}`, constants `0`/`1`,
/// `~` binding tightest, then `&`, `^`, `|`. Chains of one operator become a
/// single n-ary node.
pub fn parse(text: &str, var_count: usize) -> Result<BoolExpr, ExprError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        cursor: 0,
        end: text.chars().count(),
        var_count,
    };
    let expr = parser.or()?;
    if parser.peek().is_some() {
        return parser.error("unexpected trailing input");
    }
    Ok(expr)
}

/// Reads DIMACS CNF. DIMACS variable `k` maps to `x{k-1}`.
pub fn parse_dimacs_cnf(text: &str) -> Result<(BoolExpr, usize), ExprError> {
    let err = |msg: String| Err(ExprError::Dimacs(msg));
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<BoolExpr> = Vec::new();
    let mut current: Vec<BoolExpr> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return err(format!("line {}: duplicate header", lineno + 1));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((v, _)) if v > MAX_VARS => return Err(ExprError::TooManyVars(v)),
                Some(h) => header = Some(h),
                None => return err(format!("line {}: malformed header '{line}'", lineno + 1)),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return err(format!("line {}: clause before 'p cnf' header", lineno + 1));
        };
        for field in line.split_whitespace() {
            let lit: i64 = match field.parse() {
                Ok(l) => l,
                Err(_) => return err(format!("line {}: bad literal '{field}'", lineno + 1)),
            };
            if lit == 0 {
                clauses.push(BoolExpr::or_all(std::mem::take(&mut current)));
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > vars {
                return err(format!(
                    "line {}: literal {lit} out of range for {vars} variables",
                    lineno + 1
                ));
            }
            current.push(BoolExpr::literal(var - 1, lit > 0));
        }
    }

    let Some((vars, expected)) = header else {
        return err("missing 'p cnf' header".into());
    };
    if !current.is_empty() {
        return err("last clause is not terminated by 0".into());
    }
    if clauses.len() != expected {
        return err(format!(
            "header declares {expected} clauses, found {}",
            clauses.len()
        ));
    }
    Ok((BoolExpr::and_all(clauses), vars))
}

/// Evaluates `expr` with `assignment[i]` as the value of `x{i}`.
pub fn evaluate(expr: &BoolExpr, assignment: &[bool]) -> Result<bool, ExprError> {
    let needed = expr.min_var_count();
    if needed > assignment.len() {
        return Err(ExprError::AssignmentLength {
            got: assignment.len(),
            needed,
        });
    }
    Ok(eval_unchecked(expr, assignment))
}

fn eval_unchecked(expr: &BoolExpr, a: &[bool]) -> bool {
    match expr {
        BoolExpr::Var(i) => a[*i],
        BoolExpr::Const(b) => *b,
        BoolExpr::Not(c) => !eval_unchecked(c, a),
        BoolExpr::And(cs) => cs.iter().all(|c| eval_unchecked(c, a)),
        BoolExpr::Or(cs) => cs.iter().any(|c| eval_unchecked(c, a)),
        BoolExpr::Xor(cs) => cs.iter().fold(false, |acc, c| acc ^ eval_unchecked(c, a)),
    }
}

/// Bits of row index `x` as an assignment, `x0` first (most significant).
pub fn assignment_of(x: usize, var_count: usize) -> Vec<bool> {
    (0..var_count)
        .map(|i| (x >> (var_count - 1 - i)) & 1 == 1)
        .collect()
}

/// A boolean function stored as `2^n` packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    var_count: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(var_count: usize) -> Result<Self, ExprError> {
        if var_count > MAX_VARS {
            return Err(ExprError::TooManyVars(var_count));
        }
        let rows = 1usize << var_count;
        Ok(TruthTable {
            var_count,
            words: vec![0; rows.div_ceil(64)],
        })
    }

    pub fn from_fn(var_count: usize, f: impl Fn(usize) -> bool) -> Result<Self, ExprError> {
        let mut t = Self::zeros(var_count)?;
        for x in 0..t.len() {
            if f(x) {
                t.set(x, true);
            }
        }
        Ok(t)
    }

    pub fn from_rows(var_count: usize, rows: &[bool]) -> Result<Self, ExprError> {
        let t = Self::zeros(var_count)?;
        if rows.len() != t.len() {
            return Err(ExprError::AssignmentLength {
                got: rows.len(),
                needed: t.len(),
            });
        }
        Self::from_fn(var_count, |x| rows[x])
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    /// Row count, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.var_count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, x: usize) -> bool {
        (self.words[x / 64] >> (x % 64)) & 1 == 1
    }

    pub fn set(&mut self, x: usize, value: bool) {
        let bit = 1u64 << (x % 64);
        if value {
            self.words[x / 64] |= bit;
        } else {
            self.words[x / 64] &= !bit;
        }
    }

    /// Number of satisfying rows (the marked-state count `m`).
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Satisfying row indices in ascending order.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.get(x)).collect()
    }

    pub fn rows(&self) -> Vec<bool> {
        (0..self.len()).map(|x| self.get(x)).collect()
    }

    /// Appends `extra` trailing variables on which the function is false
    /// unless they are all zero.
    pub fn extend_with_zero_vars(&self, extra: usize) -> Result<Self, ExprError> {
        Self::from_fn(self.var_count + extra, |x| {
            x & ((1 << extra) - 1) == 0 && self.get(x >> extra)
        })
    }

    fn last_mask(&self) -> u64 {
        if self.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }
}

/// Builds the truth table of `expr` over `var_count` variables, evaluating
/// 64 rows per word.
pub fn truth_table(expr: &BoolExpr, var_count: usize) -> Result<TruthTable, ExprError> {
    expr.check_vars(var_count)?;
    let mut table = TruthTable::zeros(var_count)?;
    table.words = eval_words(expr, &table);
    Ok(table)
}

fn eval_words(expr: &BoolExpr, shape: &TruthTable) -> Vec<u64> {
    let n = shape.var_count;
    let mask = shape.last_mask();
    let words = shape.words.len();
    match expr {
        BoolExpr::Const(b) => vec![if *b { mask } else { 0 }; words],
        BoolExpr::Var(i) => {
            let shift = n - 1 - i;
            (0..words)
                .map(|w| {
                    let mut word = 0u64;
                    for bit in 0..64.min(shape.len()) {
                        let x = w * 64 + bit;
                        word |= (((x >> shift) & 1) as u64) << bit;
                    }
                    word
                })
                .collect()
        }
        BoolExpr::Not(c) => eval_words(c, shape).into_iter().map(|w| !w & mask).collect(),
        BoolExpr::And(cs) => combine(cs, shape, mask, |a, b| a & b),
        BoolExpr::Or(cs) => combine(cs, shape, 0, |a, b| a | b),
        BoolExpr::Xor(cs) => combine(cs, shape, 0, |a, b| a ^ b),
    }
}

fn combine(cs: &[BoolExpr], shape: &TruthTable, init: u64, op: fn(u64, u64) -> u64) -> Vec<u64> {
    let mut acc = vec![init; shape.words.len()];
    for c in cs {
        for (a, w) in acc.iter_mut().zip(eval_words(c, shape)) {
            *a = op(*a, w);
        }
    }
    acc
}

/// Algebraic normal form: XOR of monomials, each an AND of positive
/// variables. The empty monomial is the constant `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfForm {
    var_count: usize,
    monomials: Vec<Vec<usize>>,
}

impl AnfForm {
    pub fn var_count(&self) -> usize {
        self.var_count
    }

    /// Monomials ordered by degree, then lexicographically by variable index.
    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    /// Inverse transform back to a truth table.
    pub fn expand(&self) -> TruthTable {
        let mut coeffs = vec![false; 1 << self.var_count];
        for m in &self.monomials {
            let mask = m
                .iter()
                .fold(0usize, |acc, &v| acc | 1 << (self.var_count - 1 - v));
            coeffs[mask] = true;
        }
        mobius(&mut coeffs, self.var_count);
        TruthTable::from_rows(self.var_count, &coeffs).expect("var count already validated")
    }

    pub fn to_expr(&self) -> BoolExpr {
        BoolExpr::xor_all(
            self.monomials
                .iter()
                .map(|m| BoolExpr::and_all(m.iter().map(|&v| BoolExpr::Var(v)).collect()))
                .collect(),
        )
    }
}

impl fmt::Display for AnfForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str(" ^ ")?;
            }
            if m.is_empty() {
                f.write_str("1")?;
            } else {
                let vars: Vec<String> = m.iter().map(|v| format!("x{v}")).collect();
                f.write_str(&vars.join("&"))?;
            }
        }
        Ok(())
    }
}

// In-place GF(2) Möbius transform; it is its own inverse.
fn mobius(a: &mut [bool], n: usize) {
    for bit in 0..n {
        let step = 1 << bit;
        for x in 0..a.len() {
            if x & step != 0 {
                a[x] ^= a[x ^ step];
            }
        }
    }
}

/// Positive-polarity Reed–Muller expansion of `t`.
pub fn anf(t: &TruthTable) -> AnfForm {
    let n = t.var_count;
    let mut coeffs = t.rows();
    mobius(&mut coeffs, n);
    let mut monomials: Vec<Vec<usize>> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(mask, _)| (0..n).filter(|&v| mask >> (n - 1 - v) & 1 == 1).collect())
        .collect();
    monomials.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    AnfForm {
        var_count: n,
        monomials,
    }
}
